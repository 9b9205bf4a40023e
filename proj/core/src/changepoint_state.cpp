#include "cpmc/changepoint_state.hpp"

#include <algorithm>
#include <string>

namespace cpmc {

ChangepointState::ChangepointState(int n) : n_(n), is_cp_(n, 0) {
    if (n < 2) throw StateError("changepoint state requires n >= 2");
}

ChangepointState::ChangepointState(int n, std::vector<int> positions) : ChangepointState(n) {
    int prev = 0;
    for (int pos : positions) {
        if (pos <= prev || pos > n - 1)
            throw StateError("initial changepoints must be strictly increasing in [1, n-1]");
        is_cp_[pos] = 1;
        prev = pos;
    }
    positions_ = std::move(positions);
}

void ChangepointState::check_pos(int pos) const {
    if (pos < 1 || pos > n_ - 1)
        throw StateError("position " + std::to_string(pos) + " outside [1, n-1]");
}

std::pair<int, int> ChangepointState::neighbors(int pos) const {
    check_pos(pos);
    auto it = std::lower_bound(positions_.begin(), positions_.end(), pos);
    const int before = it == positions_.begin() ? 0 : *(it - 1);
    if (it != positions_.end() && *it == pos) ++it;  // strict: skip pos itself
    const int after = it == positions_.end() ? n_ : *it;
    return {before, after};
}

void ChangepointState::apply_toggle(int pos, double delta_log_post) {
    check_pos(pos);
    auto it = std::lower_bound(positions_.begin(), positions_.end(), pos);
    if (is_cp_[pos]) {
        is_cp_[pos] = 0;
        positions_.erase(it);
    } else {
        is_cp_[pos] = 1;
        positions_.insert(it, pos);
    }
    log_post_ += delta_log_post;
    ++toggles_;
}

void ChangepointState::apply_shift(int from, int to, double delta_log_post) {
    check_pos(from);
    check_pos(to);
    if (!is_cp_[from] || (is_cp_[to] && to != from))
        throw StateError("shift requires an existing changepoint and a free target");
    if (to != from) {
        auto it = std::lower_bound(positions_.begin(), positions_.end(), from);
        *it = to;  // neighbors bracket both endpoints, so ordering is preserved
        is_cp_[from] = 0;
        is_cp_[to] = 1;
    }
    log_post_ += delta_log_post;
    ++toggles_;
}

double log_posterior(const ChangepointState& state, const SeriesCache& cache,
                     const SegmentModel& model, const GapPrior& prior) {
    double acc = prior.log_prior_z(state.positions(), state.n());
    int seg_start = 1;
    for (int pos : state.positions()) {
        acc += model.log_marginal(cache, seg_start, pos);
        seg_start = pos + 1;
    }
    return acc + model.log_marginal(cache, seg_start, state.n());
}

}  // namespace cpmc
