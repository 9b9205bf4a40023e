#include "cpmc/recursions.hpp"

#include <cmath>

#include "cpmc/carpenter.hpp"
#include "cpmc/errors.hpp"
#include "cpmc/numerics.hpp"

namespace cpmc {

FilterTable compute_recursions(const SeriesCache& cache, const SegmentModel& model,
                               const GapPrior& prior, double truncation_threshold) {
    if (cache.n < 2) throw DataError("recursions require n >= 2");
    if (truncation_threshold < 0.0)
        throw ConfigError("truncation threshold must be >= 0");

    const int n = cache.n;
    FilterTable table;
    table.n = n;
    table.truncation_threshold = truncation_threshold;
    table.log_q.assign(n + 1, 0.0);
    table.truncated_counts.assign(n + 1, 0);

    const double growth_floor = std::log1p(truncation_threshold);
    std::vector<double> terms;
    terms.reserve(n);

    for (int t = n; t >= 1; --t) {
        const double boundary = model.log_marginal(cache, t, n) + prior.log_survivor(n - t);
        if (truncation_threshold == 0.0) {
            terms.clear();
            for (int i = t; i <= n - 1; ++i)
                terms.push_back(prior.log_gap(i - t + 1) + model.log_marginal(cache, t, i) +
                                table.log_q[i + 1]);
            terms.push_back(boundary);
            table.log_q[t] = log_sum_exp(terms);
        } else {
            double acc = kNegInf;
            int i = t;
            for (; i <= n - 1; ++i) {
                const double term = prior.log_gap(i - t + 1) +
                                    model.log_marginal(cache, t, i) + table.log_q[i + 1];
                const double grown = log_add_exp(acc, term);
                if (acc != kNegInf && grown - acc < growth_floor) {
                    acc = grown;
                    ++i;
                    break;
                }
                acc = grown;
            }
            table.truncated_counts[t] = static_cast<std::int32_t>(n - i);
            table.log_q[t] = log_add_exp(acc, boundary);
        }
    }
    return table;
}

std::vector<double> transition_logprobs(const FilterTable& table, const SeriesCache& cache,
                                        const SegmentModel& model, const GapPrior& prior,
                                        int tau_prev) {
    const int n = table.n;
    if (tau_prev < 0 || tau_prev > n - 2)
        throw StateError("tau_prev must lie in [0, n-2]");

    std::vector<double> out;
    out.reserve(n - tau_prev);
    const double log_q_here = table.log_q[tau_prev + 1];
    for (int tau = tau_prev + 1; tau <= n - 1; ++tau) {
        out.push_back(model.log_marginal(cache, tau_prev + 1, tau) + table.log_q[tau + 1] +
                      prior.log_gap(tau - tau_prev) - log_q_here);
    }
    // Terminal mass: the final segment runs to n and the next gap clears the
    // remaining admissible positions.
    out.push_back(model.log_marginal(cache, tau_prev + 1, n) +
                  prior.log_survivor(n - 1 - tau_prev) - log_q_here);

    // Exact tables make these already normalized; truncated tables do not.
    // Either way, normalize once over the complete vector.
    const double lse = log_sum_exp(out);
    for (double& v : out) v -= lse;
    return out;
}

std::vector<std::vector<int>> simulate_posterior(const FilterTable& table,
                                                 const SeriesCache& cache,
                                                 const SegmentModel& model,
                                                 const GapPrior& prior,
                                                 std::size_t n_samples, Rng& rng) {
    if (n_samples == 0) throw DataError("simulate_posterior requires n_samples >= 1");
    const int n = table.n;

    std::vector<std::vector<int>> samples(n_samples);
    // pending[t]: chains whose last changepoint sits at t. A chain leaves the
    // queue by drawing the terminal outcome or a changepoint at n-1 (after
    // which no admissible position remains).
    std::vector<std::vector<std::uint32_t>> pending(n);
    pending[0].resize(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s)
        pending[0][s] = static_cast<std::uint32_t>(s);

    for (int t = 0; t <= n - 2; ++t) {
        std::vector<std::uint32_t> chains = std::move(pending[t]);
        if (chains.empty()) continue;

        const std::vector<double> logp = transition_logprobs(table, cache, model, prior, t);
        const int terminal = static_cast<int>(logp.size()) - 1;
        const auto draws = carpenter_sample(logp, chains.size(), rng);
        // carpenter_sample returns draws in sorted-uniform order; deal them to
        // the chains through a random permutation.
        rng.shuffle(std::span<std::uint32_t>(chains));
        for (std::size_t j = 0; j < chains.size(); ++j) {
            if (draws[j] == terminal) continue;
            const int tau = t + 1 + draws[j];
            samples[chains[j]].push_back(tau);
            if (tau <= n - 2) pending[tau].push_back(chains[j]);
        }
    }
    return samples;
}

}  // namespace cpmc
