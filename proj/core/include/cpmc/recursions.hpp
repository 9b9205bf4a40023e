#ifndef CPMC_RECURSIONS_HPP
#define CPMC_RECURSIONS_HPP

#include <cstdint>
#include <vector>

#include "cpmc/gap_prior.hpp"
#include "cpmc/rng.hpp"
#include "cpmc/segment_model.hpp"

namespace cpmc {

// Backward filtering quantities in log space:
//   Q(t) = P(y_t..y_n | changepoint at t-1),  Q(1) = P(y_1..y_n).
// With truncation_threshold = 0 the table is exact and exp(log_q[1]) is the
// model evidence; a positive threshold stops each inner sum early once a term
// stops growing it, trading accuracy for an approximately linear build.
struct FilterTable {
    int n = 0;
    double truncation_threshold = 0.0;
    std::vector<double> log_q;              // index 1..n, [0] unused
    std::vector<std::int32_t> truncated_counts;  // inner-sum terms dropped per t

    std::int64_t total_truncated() const {
        std::int64_t acc = 0;
        for (auto c : truncated_counts) acc += c;
        return acc;
    }
};

// O(n^2) backward pass (exact mode); each inner sum accumulates
//   g(i-t+1) P(t,i) Q(i+1)  for i = t..n-1,  plus  P(t,n) (1 - G(n-t)).
// Exact mode folds every complete term vector with a max-shifted log-sum-exp.
// Truncated mode scans in increasing i and abandons the remainder of the sum
// the first time a term grows the running total by less than
// log1p(truncation_threshold); the boundary term is always included.
FilterTable compute_recursions(const SeriesCache& cache, const SegmentModel& model,
                               const GapPrior& prior, double truncation_threshold = 0.0);

// Normalized log distribution of the next changepoint given the last one at
// tau_prev (0 = series start): entries for tau = tau_prev+1 .. n-1, then one
// terminal entry for "no further changepoint". All terms are accumulated
// before anything is exponentiated, then normalized in one log-sum-exp pass.
std::vector<double> transition_logprobs(const FilterTable& table, const SeriesCache& cache,
                                        const SegmentModel& model, const GapPrior& prior,
                                        int tau_prev);

// Perfect simulation: n_samples independent draws from the changepoint
// posterior via the grouped forward pass. All chains start at tau = 0; for
// each last-changepoint value t the pending chains draw their next positions
// together through carpenter_sample, and the draws are dealt back to the
// chains through a random permutation.
std::vector<std::vector<int>> simulate_posterior(const FilterTable& table,
                                                 const SeriesCache& cache,
                                                 const SegmentModel& model,
                                                 const GapPrior& prior,
                                                 std::size_t n_samples, Rng& rng);

}  // namespace cpmc

#endif
