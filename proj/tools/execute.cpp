#include "execute.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cpmc/divergence.hpp"
#include "cpmc/recursions.hpp"
#include "ingest.hpp"

namespace cpmc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

ChangepointState initial_state(const RunConfig& config, int n) {
    if (!config.init_changepoints.empty())
        return ChangepointState(n, config.init_changepoints);
    if (config.init_random_k > 0) {
        // Scatter k changepoints uniformly; a separate stream keeps the chain
        // seed's draw sequence untouched.
        Rng rng(config.sampler.seed ^ 0x9e3779b97f4a7c15ULL);
        std::vector<std::uint8_t> used(n, 0);
        std::vector<int> positions;
        while (static_cast<int>(positions.size()) < config.init_random_k) {
            const int pos = 1 + static_cast<int>(rng.uniform_int(n - 1));
            if (!used[pos]) {
                used[pos] = 1;
                positions.push_back(pos);
            }
        }
        std::sort(positions.begin(), positions.end());
        return ChangepointState(n, positions);
    }
    return ChangepointState(n);
}

EngineOutput run_sampler_engine(Engine engine, const RunConfig& config,
                                const SeriesCache& cache, const SegmentModel& model,
                                const GapPrior& prior) {
    SamplerConfig scfg = config.sampler;
    if (engine == Engine::NonAdaptive) {
        scfg.adaptation_enabled = false;
        scfg.thresholding_enabled = false;
        scfg.dual_adaptation_enabled = false;
    }

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<RunResult> results;
    if (config.chains == 1) {
        Sampler sampler(cache, model, prior, scfg);
        std::ofstream dump;
        if (!config.dump_samples_path.empty()) {
            dump = open_out(config.dump_samples_path);
            sampler.set_retained_callback([&dump](const ChangepointState& st) {
                bool first = true;
                for (int pos : st.positions()) {
                    if (!first) dump << ' ';
                    dump << pos;
                    first = false;
                }
                dump << '\n';
            });
        }
        results.push_back(sampler.run(initial_state(config, cache.n)));
    } else {
        results.resize(config.chains, RunResult{{}, {}, ChangepointState(cache.n), 0, 0.0});
        std::vector<std::thread> workers;
        workers.reserve(config.chains);
        for (int c = 0; c < config.chains; ++c) {
            workers.emplace_back([&, c] {
                SamplerConfig chain_cfg = scfg;
                chain_cfg.seed = scfg.seed + static_cast<std::uint64_t>(c);
                Sampler sampler(cache, model, prior, chain_cfg);
                results[c] = sampler.run(initial_state(config, cache.n));
            });
        }
        for (auto& w : workers) w.join();
    }

    EngineOutput out;
    out.engine = engine;
    out.summary = results.front().summary;
    out.stats = results.front().stats;
    out.iterations_run = results.front().iterations_run;
    for (std::size_t c = 1; c < results.size(); ++c) {
        out.summary = merge_summaries(out.summary, results[c].summary);
        out.iterations_run += results[c].iterations_run;
    }
    out.engine_seconds = seconds_since(t0);
    return out;
}

EngineOutput run_recursions_engine(const RunConfig& config, const SeriesCache& cache,
                                   const SegmentModel& model, const GapPrior& prior) {
    if (cache.n > config.recursions_max_n)
        std::cerr << "warning: n = " << cache.n
                  << " exceeds the recursions guard; the O(n^2) precompute and the "
                     "transition accumulation become unreliable at this scale -- the "
                     "adaptive sampler is the intended engine here\n";

    EngineOutput out;
    out.engine = Engine::Recursions;
    const auto t0 = std::chrono::steady_clock::now();
    const FilterTable table = compute_recursions(cache, model, prior, config.truncation);
    out.precompute_seconds = seconds_since(t0);
    out.log_evidence = table.log_q[1];
    out.has_evidence = true;

    Rng rng(config.sampler.seed);
    const auto samples =
        simulate_posterior(table, cache, model, prior, config.recursion_samples, rng);

    SummaryAccumulator acc(cache.n);
    for (const auto& positions : samples) {
        double lp = prior.log_prior_z(positions, cache.n);
        int start = 1;
        for (int pos : positions) {
            lp += model.log_marginal(cache, start, pos);
            start = pos + 1;
        }
        lp += model.log_marginal(cache, start, cache.n);
        acc.add(positions, lp);
    }
    out.summary = acc.finalize();
    out.engine_seconds = seconds_since(t0);
    return out;
}

void write_count_hist(const fs::path& path, const PosteriorSummary& summary) {
    auto out = open_out(path);
    out << "k\tprobability\n";
    int last = 0;
    for (int k = 0; k < summary.n; ++k)
        if (summary.count_hist[k] > 0.0) last = k;
    for (int k = 0; k <= last; ++k) out << k << '\t' << fmt(summary.count_hist[k]) << '\n';
}

void write_inclusion(const fs::path& path, const PosteriorSummary& summary) {
    auto out = open_out(path);
    out << "position\tprobability\n";
    for (int pos = 1; pos <= summary.n - 1; ++pos)
        out << pos << '\t' << fmt(summary.inclusion_prob[pos - 1]) << '\n';
}

void write_map(const fs::path& path, const PosteriorSummary& summary) {
    json j;
    j["log_post"] = summary.map_log_post;
    j["k"] = summary.map_positions.size();
    j["positions"] = summary.map_positions;
    open_out(path) << j.dump(2) << '\n';
}

void write_trace(const fs::path& path, const PosteriorSummary& summary) {
    auto out = open_out(path);
    out << "iteration\tseconds\tlog_post\n";
    for (const auto& pt : summary.map_trace)
        out << pt.iteration << '\t' << fmt(pt.seconds) << '\t' << fmt(pt.log_post) << '\n';
}

json engine_report(const EngineOutput& e) {
    json j;
    j["engine"] = to_string(e.engine);
    j["seconds"] = e.engine_seconds;
    j["n_samples"] = e.summary.n_samples;
    j["map_log_post"] = e.summary.map_log_post;
    j["acceptance_rates"] = {{"add", e.summary.add_moves.rate()},
                             {"delete", e.summary.delete_moves.rate()},
                             {"adjust", e.summary.adjust_moves.rate()}};
    if (e.engine == Engine::Recursions) {
        j["precompute_seconds"] = e.precompute_seconds;
        j["log_evidence"] = e.log_evidence;
    } else {
        j["iterations"] = e.iterations_run;
    }
    return j;
}

}  // namespace

EngineOutput run_engine(Engine engine, const RunConfig& config, const SeriesCache& cache,
                        const SegmentModel& model, const GapPrior& prior) {
    return engine == Engine::Recursions
               ? run_recursions_engine(config, cache, model, prior)
               : run_sampler_engine(engine, config, cache, model, prior);
}

ExecutionResult execute(const RunConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> y = ingest(config.input_path, config.column);
    config.validate(y);

    const SegmentModel model = config.make_model();
    const GapPrior prior = config.make_prior();
    const SeriesCache cache = build_cache(y, model);

    fs::path dir = config.output_dir;
    if (dir.empty()) {
        const char* env = std::getenv(kOutputDirEnv);
        dir = env && *env ? env : ".";
    }
    fs::create_directories(dir);

    ExecutionResult result;
    result.n = cache.n;
    result.output_dir = dir.string();
    result.primary = run_engine(config.engine, config, cache, model, prior);
    write_count_hist(dir / "count_hist.tsv", result.primary.summary);
    write_inclusion(dir / "inclusion_prob.tsv", result.primary.summary);
    write_map(dir / "map.json", result.primary.summary);
    if (config.emit_trace) write_trace(dir / "map_trace.tsv", result.primary.summary);

    if (config.compare) {
        result.comparison = run_engine(config.compare_engine, config, cache, model, prior);
        write_count_hist(dir / "compare_count_hist.tsv", result.comparison->summary);
        write_inclusion(dir / "compare_inclusion_prob.tsv", result.comparison->summary);
        write_map(dir / "compare_map.json", result.comparison->summary);
        result.d_primary_compare = divergence(result.primary.summary.count_hist,
                                              result.comparison->summary.count_hist,
                                              config.delta);
        result.d_compare_primary = divergence(result.comparison->summary.count_hist,
                                              result.primary.summary.count_hist,
                                              config.delta);
        auto out = open_out(dir / "divergence.tsv");
        const std::string a = to_string(config.engine);
        const std::string b = to_string(config.compare_engine);
        out << "delta\t" << fmt(config.delta) << '\n';
        out << "D(" << a << "||" << b << ")\t" << fmt(result.d_primary_compare) << '\n';
        out << "D(" << b << "||" << a << ")\t" << fmt(result.d_compare_primary) << '\n';
    }

    json manifest;
    manifest["tool"] = "cpmc";
    manifest["version"] = kToolVersion;
    manifest["created_unix"] = static_cast<std::int64_t>(std::time(nullptr));
    manifest["config"] = to_json(config);
    manifest["data"] = {{"path", config.input_path},
                        {"column", config.column},
                        {"n", cache.n}};
    manifest["results"]["primary"] = engine_report(result.primary);
    if (result.comparison) {
        manifest["results"]["comparison"] = engine_report(*result.comparison);
        manifest["results"]["divergence"] = {
            {"delta", config.delta},
            {"primary_vs_comparison", result.d_primary_compare},
            {"comparison_vs_primary", result.d_compare_primary}};
    }
    manifest["timings"]["total_seconds"] = seconds_since(t0);
    open_out(dir / "manifest.json") << manifest.dump(2) << '\n';

    std::cout << "engine " << to_string(config.engine) << ": n=" << cache.n
              << " samples=" << result.primary.summary.n_samples
              << " map=" << result.primary.summary.map_log_post << '\n';
    if (result.comparison)
        std::cout << "compare " << to_string(config.compare_engine)
                  << ": D=" << result.d_primary_compare << " / "
                  << result.d_compare_primary << '\n';
    std::cout << "artifacts in " << fs::absolute(dir).string() << '\n';
    return result;
}

}  // namespace cpmc::cli
