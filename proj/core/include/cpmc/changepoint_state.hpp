#ifndef CPMC_CHANGEPOINT_STATE_HPP
#define CPMC_CHANGEPOINT_STATE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "cpmc/errors.hpp"
#include "cpmc/gap_prior.hpp"
#include "cpmc/segment_model.hpp"

namespace cpmc {

// Changepoint indicator state: a bit vector for O(1) membership plus the
// ordered position list for predecessor/successor lookup and cheap iteration
// over the k current changepoints. The cached unnormalized log posterior is
// maintained incrementally by the sampler via apply_toggle deltas.
class ChangepointState {
public:
    explicit ChangepointState(int n);
    ChangepointState(int n, std::vector<int> positions);

    int n() const { return n_; }
    int k() const { return static_cast<int>(positions_.size()); }
    bool is_changepoint(int pos) const { return is_cp_[pos] != 0; }
    const std::vector<int>& positions() const { return positions_; }

    // (largest changepoint < pos or 0, smallest changepoint > pos or n).
    std::pair<int, int> neighbors(int pos) const;

    double log_post() const { return log_post_; }
    void set_log_post(double v) { log_post_ = v; }

    // Flip z at pos and fold the move's posterior delta into the cache.
    void apply_toggle(int pos, double delta_log_post);

    // Move an existing changepoint to a new position in the same segment.
    void apply_shift(int from, int to, double delta_log_post);

    std::uint64_t toggles() const { return toggles_; }

private:
    void check_pos(int pos) const;

    int n_;
    std::vector<std::uint8_t> is_cp_;  // indexed by position, entries 1..n-1 used
    std::vector<int> positions_;       // sorted ascending
    double log_post_ = 0.0;
    std::uint64_t toggles_ = 0;
};

// Full O(k) recomputation of the unnormalized log posterior
// log pi(z) + sum_j log P(tau_{j-1}+1, tau_j); used for initialization and
// as a drift check against the incrementally maintained cache.
double log_posterior(const ChangepointState& state, const SeriesCache& cache,
                     const SegmentModel& model, const GapPrior& prior);

}  // namespace cpmc

#endif
