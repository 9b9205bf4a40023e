#ifndef CPMC_SUMMARY_HPP
#define CPMC_SUMMARY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "cpmc/changepoint_state.hpp"

namespace cpmc {

struct MapTracePoint {
    std::uint64_t iteration;
    double seconds;   // wall clock since run start; informational only
    double log_post;  // running maximum, non-decreasing along the trace
};

struct AcceptanceCounter {
    std::uint64_t attempts = 0;
    std::uint64_t accepts = 0;
    double rate() const {
        return attempts == 0 ? 0.0 : static_cast<double>(accepts) / static_cast<double>(attempts);
    }
};

// Posterior summaries accumulated in a streaming fashion: changepoint-count
// histogram, per-position inclusion probabilities and the best configuration
// seen. Nothing about a full trajectory is retained.
struct PosteriorSummary {
    int n = 0;
    std::uint64_t n_samples = 0;
    std::vector<double> count_hist;       // probability of k changepoints, k = 0..n-1
    std::vector<double> inclusion_prob;   // index j -> position j+1
    double map_log_post = 0.0;
    std::vector<int> map_positions;
    std::vector<MapTracePoint> map_trace;
    AcceptanceCounter add_moves, delete_moves, adjust_moves;
};

// Combine summaries from disjoint chains: histograms and inclusion counts
// add (weighted by sample counts, which reconstruct the underlying integer
// tallies exactly), acceptance counters add, the MAP takes the maximum and
// the traces interleave by iteration keeping the running maximum.
PosteriorSummary merge_summaries(const PosteriorSummary& a, const PosteriorSummary& b);

// Mergeable accumulator behind PosteriorSummary. Counts are integers, so
// merging is associative and independent of chain completion order.
class SummaryAccumulator {
public:
    explicit SummaryAccumulator(int n);

    void add(const ChangepointState& state) { add(state.positions(), state.log_post()); }
    void add(std::span<const int> positions, double log_post);

    void record_map_candidate(std::uint64_t iteration, double seconds, double log_post,
                              std::span<const int> positions);

    void merge(const SummaryAccumulator& other);

    std::uint64_t n_samples() const { return n_samples_; }
    const std::vector<std::uint64_t>& count_histogram() const { return count_hist_; }
    const std::vector<std::uint64_t>& inclusion_counts() const { return inclusion_; }

    // Throws DataError when no samples were accumulated.
    PosteriorSummary finalize() const;

    AcceptanceCounter add_moves, delete_moves, adjust_moves;

private:
    int n_;
    std::uint64_t n_samples_ = 0;
    std::vector<std::uint64_t> count_hist_;
    std::vector<std::uint64_t> inclusion_;
    bool have_map_ = false;
    double map_log_post_ = 0.0;
    std::vector<int> map_positions_;
    std::vector<MapTracePoint> map_trace_;
};

}  // namespace cpmc

#endif
