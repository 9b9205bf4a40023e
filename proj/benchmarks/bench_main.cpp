#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "cpmc/alias_table.hpp"
#include "cpmc/carpenter.hpp"
#include "cpmc/recursions.hpp"
#include "cpmc/sampler.hpp"

namespace {

using namespace cpmc;

// Piecewise-constant Gaussian series with evenly spaced changepoints.
std::vector<double> synthetic_series(int n, int k, double shift, Rng& rng) {
    std::vector<double> y(n);
    const int gap = n / (k + 1);
    double level = 0.0;
    for (int t = 0; t < n; ++t) {
        if (t > 0 && t % gap == 0 && t / gap <= k) level = (t / gap % 2 == 0) ? 0.0 : shift;
        y[t] = level + rng.normal();
    }
    return y;
}

void BM_LogMarginal(benchmark::State& state) {
    Rng rng(1);
    const auto y = synthetic_series(10000, 20, 4.0, rng);
    const auto model = [&]() -> SegmentModel {
        switch (state.range(0)) {
        case 0: {
            std::vector<double> counts(y.size());
            for (std::size_t i = 0; i < y.size(); ++i)
                counts[i] = std::floor(std::abs(y[i]) * 3.0);
            return SegmentModel::poisson_gamma(1.0, 1.0);
        }
        case 1: return SegmentModel::gaussian_mean(0.0, 1.0, 9.0);
        default: return SegmentModel::gaussian_precision(0.0, 2.0, 2.0);
        }
    }();
    std::vector<double> data = y;
    if (model.kind() == ModelKind::PoissonGamma)
        for (auto& v : data) v = std::floor(std::abs(v) * 3.0);
    const auto cache = build_cache(data, model);
    int a = 1;
    for (auto _ : state) {
        a = a % 9000 + 1;
        benchmark::DoNotOptimize(model.log_marginal(cache, a, a + 900));
    }
}
BENCHMARK(BM_LogMarginal)->Arg(0)->Arg(1)->Arg(2);

void BM_AliasBuild(benchmark::State& state) {
    Rng rng(2);
    std::vector<double> w(state.range(0));
    for (auto& v : w) v = 0.1 + rng.uniform();
    for (auto _ : state) {
        AliasTable table(w);
        benchmark::DoNotOptimize(table.size());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AliasBuild)->Range(1 << 8, 1 << 18);

void BM_AliasSample(benchmark::State& state) {
    Rng rng(3);
    std::vector<double> w(1 << 16);
    for (auto& v : w) v = 0.1 + rng.uniform();
    AliasTable table(w);
    for (auto _ : state) benchmark::DoNotOptimize(table.sample(rng));
}
BENCHMARK(BM_AliasSample);

void BM_Carpenter(benchmark::State& state) {
    Rng rng(4);
    std::vector<double> logp(1000);
    for (auto& v : logp) v = -5.0 * rng.uniform();
    for (auto _ : state) {
        auto draws = carpenter_sample(logp, 10000, rng);
        benchmark::DoNotOptimize(draws.data());
    }
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Carpenter);

void BM_AdaptiveSampler(benchmark::State& state) {
    Rng rng(5);
    const int n = static_cast<int>(state.range(0));
    const auto y = synthetic_series(n, 100, 5.0, rng);
    const auto model = SegmentModel::gaussian_mean(0.0, 1.0, 25.0);
    const auto prior = GapPrior::geometric(100.0 / n);
    const auto cache = build_cache(y, model);

    SamplerConfig cfg;
    cfg.thresholding_enabled = true;
    cfg.h = 0.05;
    cfg.iterations = 2'000'000;
    cfg.burn_in = 1'000'000;
    cfg.seed = 42;
    for (auto _ : state) {
        Sampler sampler(cache, model, prior, cfg);
        auto result = sampler.run();
        benchmark::DoNotOptimize(result.summary.n_samples);
    }
    state.SetItemsProcessed(state.iterations() * cfg.iterations);
}
BENCHMARK(BM_AdaptiveSampler)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_NonAdaptiveSampler(benchmark::State& state) {
    Rng rng(6);
    const int n = static_cast<int>(state.range(0));
    const auto y = synthetic_series(n, 100, 5.0, rng);
    const auto model = SegmentModel::gaussian_mean(0.0, 1.0, 25.0);
    const auto prior = GapPrior::geometric(100.0 / n);
    const auto cache = build_cache(y, model);

    SamplerConfig cfg;
    cfg.adaptation_enabled = false;
    cfg.iterations = 2'000'000;
    cfg.burn_in = 1'000'000;
    cfg.seed = 42;
    for (auto _ : state) {
        Sampler sampler(cache, model, prior, cfg);
        auto result = sampler.run();
        benchmark::DoNotOptimize(result.summary.n_samples);
    }
    state.SetItemsProcessed(state.iterations() * cfg.iterations);
}
BENCHMARK(BM_NonAdaptiveSampler)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_RecursionsBuild(benchmark::State& state) {
    Rng rng(7);
    const int n = static_cast<int>(state.range(0));
    const auto y = synthetic_series(n, 10, 4.0, rng);
    const auto model = SegmentModel::gaussian_mean(0.0, 1.0, 9.0);
    const auto prior = GapPrior::geometric(10.0 / n);
    const auto cache = build_cache(y, model);
    for (auto _ : state) {
        auto table = compute_recursions(cache, model, prior);
        benchmark::DoNotOptimize(table.log_q[1]);
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_RecursionsBuild)
    ->RangeMultiplier(2)
    ->Range(512, 4096)
    ->Complexity(benchmark::oNSquared)
    ->Unit(benchmark::kMillisecond);

void BM_RecursionsTruncated(benchmark::State& state) {
    Rng rng(8);
    const int n = 4096;
    const auto y = synthetic_series(n, 10, 4.0, rng);
    const auto model = SegmentModel::gaussian_mean(0.0, 1.0, 9.0);
    const auto prior = GapPrior::geometric(10.0 / n);
    const auto cache = build_cache(y, model);
    for (auto _ : state) {
        auto table = compute_recursions(cache, model, prior, 1e-10);
        benchmark::DoNotOptimize(table.log_q[1]);
    }
}
BENCHMARK(BM_RecursionsTruncated)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
