#include "cpmc/selection_weights.hpp"

#include <algorithm>
#include <cmath>

#include "cpmc/errors.hpp"

namespace cpmc {

SelectionWeights::SelectionWeights(const ChangepointState& state, WeightConfig cfg)
    : n_(state.n()), cfg_(cfg) {
    if (!(cfg_.log_floor < cfg_.log_ceil))
        throw ConfigError("weight clamp requires log_floor < log_ceil");
    if (!(cfg_.initial_weight > 0.0) || !std::isfinite(cfg_.initial_weight))
        throw ConfigError("initial weight must be positive and finite");
    if (cfg_.thresholding && !(cfg_.a_inactive > 0.0 && cfg_.a_inactive < cfg_.a_cutoff))
        throw ConfigError("thresholding requires 0 < a_inactive < a_cutoff");

    const double w0 = std::clamp(std::log(cfg_.initial_weight), cfg_.log_floor, cfg_.log_ceil);
    log_a_.assign(n_, w0);
    log_d_.assign(n_, w0);
    a_.assign(n_, std::exp(w0));
    d_.assign(n_, std::exp(w0));
    log_a_[0] = log_d_[0] = 0.0;  // slot 0 unused
    a_[0] = d_[0] = 0.0;
    active_slot_.assign(n_, -1);
    if (cfg_.thresholding && std::exp(w0) > cfg_.a_cutoff) {
        for (int pos = 1; pos < n_; ++pos) activate(pos);
    }
    recompute_sums(state);
}

void SelectionWeights::activate(int pos) {
    active_slot_[pos] = static_cast<std::int32_t>(active_list_.size());
    active_list_.push_back(static_cast<std::int32_t>(pos));
}

void SelectionWeights::deactivate(int pos) {
    const std::int32_t slot = active_slot_[pos];
    const std::int32_t last = active_list_.back();
    active_list_[slot] = last;
    active_slot_[last] = slot;
    active_list_.pop_back();
    active_slot_[pos] = -1;
}

void SelectionWeights::bump(const ChangepointState& state) {
    if (++mutations_ % kRecomputeEvery == 0) recompute_sums(state);
}

void SelectionWeights::recompute_sums(const ChangepointState& state) {
    a_sum_zero_ = 0.0;
    a_active_zero_ = 0.0;
    n_inactive_zero_ = 0;
    d_sum_one_ = 0.0;
    for (int pos = 1; pos < n_; ++pos) {
        if (state.is_changepoint(pos)) {
            d_sum_one_ += d_[pos];
        } else if (cfg_.thresholding) {
            if (active_slot_[pos] >= 0)
                a_active_zero_ += a_[pos];
            else
                ++n_inactive_zero_;
        } else {
            a_sum_zero_ += a_[pos];
        }
    }
}

void SelectionWeights::set_log_a(int pos, double value, const ChangepointState& state) {
    value = std::clamp(value, cfg_.log_floor, cfg_.log_ceil);
    const double old = a_[pos];
    log_a_[pos] = value;
    a_[pos] = std::exp(value);
    const bool z0 = !state.is_changepoint(pos);

    if (cfg_.thresholding) {
        const bool was = active_slot_[pos] >= 0;
        const bool now = a_[pos] > cfg_.a_cutoff;
        if (was != now) {
            if (now) {
                activate(pos);
                if (z0) {
                    --n_inactive_zero_;
                    a_active_zero_ += a_[pos];
                }
            } else {
                deactivate(pos);
                if (z0) {
                    a_active_zero_ -= old;
                    ++n_inactive_zero_;
                }
            }
            table_stale_ = true;
        } else if (now) {
            if (z0) a_active_zero_ += a_[pos] - old;
            table_stale_ = true;
        }
        // inactive -> inactive: sampled at the flat weight, nothing to update
    } else {
        if (z0) a_sum_zero_ += a_[pos] - old;
        table_stale_ = true;
    }
    bump(state);
}

void SelectionWeights::set_log_d(int pos, double value, const ChangepointState& state) {
    value = std::clamp(value, cfg_.log_floor, cfg_.log_ceil);
    const double old = d_[pos];
    log_d_[pos] = value;
    d_[pos] = std::exp(value);
    if (state.is_changepoint(pos)) d_sum_one_ += d_[pos] - old;
    bump(state);
}

void SelectionWeights::on_toggle(int pos, const ChangepointState& state) {
    const bool now_cp = state.is_changepoint(pos);
    const double sign = now_cp ? -1.0 : 1.0;  // leaving/joining the add pool
    d_sum_one_ += -sign * d_[pos];
    if (cfg_.thresholding) {
        if (active_slot_[pos] >= 0)
            a_active_zero_ += sign * a_[pos];
        else
            n_inactive_zero_ += now_cp ? -1 : 1;
    } else {
        a_sum_zero_ += sign * a_[pos];
    }
    bump(state);
}

void SelectionWeights::ensure_table(const ChangepointState&) {
    if (!table_stale_) return;
    if (cfg_.thresholding) {
        table_weights_.resize(active_list_.size());
        for (std::size_t i = 0; i < active_list_.size(); ++i)
            table_weights_[i] = a_[active_list_[i]];
        if (!table_weights_.empty()) table_.build(table_weights_);
    } else {
        table_weights_.assign(a_.begin() + 1, a_.end());
        table_.build(table_weights_);
    }
    table_stale_ = false;
}

int SelectionWeights::fallback_add_scan(const ChangepointState& state, Rng& rng,
                                        bool active_group) {
    // Direct normalization over the relevant group; exact and O(n), used only
    // after kMaxRedraws consecutive occupied draws.
    if (cfg_.thresholding && active_group) {
        double total = 0.0;
        for (std::int32_t pos : active_list_)
            if (!state.is_changepoint(pos)) total += a_[pos];
        double u = rng.uniform() * total;
        int chosen = -1;
        for (std::int32_t pos : active_list_) {
            if (state.is_changepoint(pos)) continue;
            chosen = pos;
            u -= a_[pos];
            if (u < 0.0) break;
        }
        return chosen;
    }
    if (cfg_.thresholding) {
        // Uniform over inactive non-changepoints via the exact count.
        std::int64_t target = static_cast<std::int64_t>(rng.uniform_int(n_inactive_zero_));
        for (int pos = 1; pos < n_; ++pos) {
            if (active_slot_[pos] >= 0 || state.is_changepoint(pos)) continue;
            if (target-- == 0) return pos;
        }
        return -1;
    }
    double total = 0.0;
    for (int pos = 1; pos < n_; ++pos)
        if (!state.is_changepoint(pos)) total += a_[pos];
    double u = rng.uniform() * total;
    int chosen = -1;
    for (int pos = 1; pos < n_; ++pos) {
        if (state.is_changepoint(pos)) continue;
        chosen = pos;
        u -= a_[pos];
        if (u < 0.0) break;
    }
    return chosen;
}

AddProposal SelectionWeights::sample_add_position(const ChangepointState& state, Rng& rng) {
    if (state.k() >= n_ - 1) throw StateError("no addable positions: all z_i = 1");

    const double total = add_mass();
    int pos = -1;
    double ahat = 0.0;

    if (cfg_.thresholding) {
        const double inact_mass = cfg_.a_inactive * static_cast<double>(n_inactive_zero_);
        // Pick the group once; redraw only within it. Re-picking the group on
        // rejection would weight each group by its internal acceptance rate
        // and no longer realize the thresholded proposal law.
        if (active_list_.empty() || rng.uniform() * total < inact_mass) {
            for (int tries = 0; tries < kMaxRedraws && pos < 0; ++tries) {
                const int cand = 1 + static_cast<int>(rng.uniform_int(n_ - 1));
                if (active_slot_[cand] < 0 && !state.is_changepoint(cand)) pos = cand;
            }
            if (pos < 0) pos = fallback_add_scan(state, rng, false);
            if (pos < 0) throw StateError("add proposal failed to locate a free position");
            ahat = cfg_.a_inactive;
        } else {
            ensure_table(state);
            for (int tries = 0; tries < kMaxRedraws && pos < 0; ++tries) {
                const int cand = active_list_[table_.sample(rng)];
                if (!state.is_changepoint(cand)) pos = cand;
            }
            if (pos < 0) pos = fallback_add_scan(state, rng, true);
            if (pos < 0) throw StateError("add proposal failed to locate a free position");
            ahat = a_[pos];
        }
    } else {
        ensure_table(state);
        for (int tries = 0; tries < kMaxRedraws && pos < 0; ++tries) {
            const int cand = 1 + table_.sample(rng);
            if (!state.is_changepoint(cand)) pos = cand;
        }
        if (pos < 0) pos = fallback_add_scan(state, rng, false);
        if (pos < 0) throw StateError("add proposal failed to locate a free position");
        ahat = a_[pos];
    }

    return AddProposal{pos, std::log(ahat) - std::log(total), log_rev_delete_prob(pos)};
}

DeleteProposal SelectionWeights::sample_delete_position(const ChangepointState& state,
                                                        Rng& rng) {
    const auto& positions = state.positions();
    if (positions.empty()) throw StateError("no changepoints to delete");

    double u = rng.uniform() * d_sum_one_;
    int chosen = positions.back();
    for (int pos : positions) {
        u -= d_[pos];
        if (u < 0.0) {
            chosen = pos;
            break;
        }
    }
    return DeleteProposal{chosen, std::log(d_[chosen]) - std::log(d_sum_one_),
                          log_rev_add_prob(chosen)};
}

double SelectionWeights::log_rev_delete_prob(int pos) const {
    return std::log(d_[pos]) - std::log(d_[pos] + d_sum_one_);
}

double SelectionWeights::log_rev_add_prob(int pos) const {
    const double ahat =
        cfg_.thresholding ? (active_slot_[pos] >= 0 ? a_[pos] : cfg_.a_inactive) : a_[pos];
    return std::log(ahat) - std::log(add_mass() + ahat);
}

double SelectionWeights::log_add_proposal_prob(const ChangepointState& state, int pos) const {
    if (state.is_changepoint(pos))
        throw StateError("add proposal probability queried at an occupied position");
    if (cfg_.thresholding) {
        double act = 0.0;
        std::int64_t inact = 0;
        for (int j = 1; j < n_; ++j) {
            if (state.is_changepoint(j)) continue;
            if (active_slot_[j] >= 0)
                act += a_[j];
            else
                ++inact;
        }
        const double ahat = active_slot_[pos] >= 0 ? a_[pos] : cfg_.a_inactive;
        return std::log(ahat) -
               std::log(act + cfg_.a_inactive * static_cast<double>(inact));
    }
    double total = 0.0;
    for (int j = 1; j < n_; ++j)
        if (!state.is_changepoint(j)) total += a_[j];
    return std::log(a_[pos]) - std::log(total);
}

double SelectionWeights::log_delete_proposal_prob(const ChangepointState& state,
                                                  int pos) const {
    if (!state.is_changepoint(pos))
        throw StateError("delete proposal probability queried at an empty position");
    double total = 0.0;
    for (int j : state.positions()) total += d_[j];
    return std::log(d_[pos]) - std::log(total);
}

}  // namespace cpmc
