#ifndef CPMC_SELECTION_WEIGHTS_HPP
#define CPMC_SELECTION_WEIGHTS_HPP

#include <cstdint>
#include <vector>

#include "cpmc/alias_table.hpp"
#include "cpmc/changepoint_state.hpp"
#include "cpmc/rng.hpp"

namespace cpmc {

struct WeightConfig {
    bool thresholding = false;
    double initial_weight = 1.0;
    // Defaults keep untouched positions indistinguishable from the
    // non-thresholded sampler: everything starts inactive at the flat weight.
    double a_cutoff = 2.718281828459045;  // e * initial weight
    double a_inactive = 1.0;
    double log_floor = -30.0;
    double log_ceil = 30.0;
};

struct AddProposal {
    int position;
    double log_q_fwd;  // log probability of selecting `position` for addition
    double log_q_rev;  // log probability the reverse delete would select it
};

struct DeleteProposal {
    int position;
    double log_q_fwd;
    double log_q_rev;
};

// Per-position add/delete selection weights with the bookkeeping that makes
// proposals O(1): maintained group masses, an alias table over the active
// group (or over all positions when thresholding is off) rebuilt lazily when
// weights change, and rejection of drawn positions whose indicator does not
// match the move. Weights are clamped to [log_floor, log_ceil] so every
// proposal probability stays bounded away from zero.
//
// Owned by a single chain; the ChangepointState it serves is passed into each
// call rather than stored, and the caller keeps the two in sync via on_toggle.
class SelectionWeights {
public:
    SelectionWeights(const ChangepointState& state, WeightConfig cfg = {});

    int n() const { return n_; }
    const WeightConfig& config() const { return cfg_; }

    double log_a(int pos) const { return log_a_[pos]; }
    double log_d(int pos) const { return log_d_[pos]; }
    double a(int pos) const { return a_[pos]; }
    double d(int pos) const { return d_[pos]; }
    bool is_active(int pos) const { return active_slot_[pos] >= 0; }
    const std::vector<std::int32_t>& active_set() const { return active_list_; }

    // Clamped writes; aggregates and active membership follow the new value.
    void set_log_a(int pos, double value, const ChangepointState& state);
    void set_log_d(int pos, double value, const ChangepointState& state);

    // Must be called right after state.apply_toggle(pos, ...).
    void on_toggle(int pos, const ChangepointState& state);

    // Draw an add position (requires at least one z_i = 0) or a delete
    // position (requires k >= 1), along with the forward selection
    // probability and the matching reverse-move selection probability.
    AddProposal sample_add_position(const ChangepointState& state, Rng& rng);
    DeleteProposal sample_delete_position(const ChangepointState& state, Rng& rng);

    // Total mass of the add-proposal denominator over {i : z_i = 0}.
    double add_mass() const {
        return cfg_.thresholding
                   ? a_active_zero_ + cfg_.a_inactive * static_cast<double>(n_inactive_zero_)
                   : a_sum_zero_;
    }
    double delete_mass() const { return d_sum_one_; }

    // Reverse-move selection probabilities from the current state: the delete
    // that would undo an add at pos (z_pos = 0), and the add that would undo a
    // delete at pos (z_pos = 1). In both cases pos joins the opposite pool, so
    // its own weight enters the denominator.
    double log_rev_delete_prob(int pos) const;
    double log_rev_add_prob(int pos) const;

    // Reference implementations by full scan, used by tests and the
    // detailed-balance checks; exact for the current weights and state.
    double log_add_proposal_prob(const ChangepointState& state, int pos) const;
    double log_delete_proposal_prob(const ChangepointState& state, int pos) const;

    // Rebuild the maintained masses from scratch (kills float drift; also
    // run periodically from the mutation counter).
    void recompute_sums(const ChangepointState& state);

private:
    void activate(int pos);
    void deactivate(int pos);
    void bump(const ChangepointState& state);
    void ensure_table(const ChangepointState& state);
    int fallback_add_scan(const ChangepointState& state, Rng& rng, bool active_group);

    int n_;  // series length; valid positions are 1..n-1
    WeightConfig cfg_;
    std::vector<double> log_a_, log_d_;
    std::vector<double> a_, d_;  // linear mirrors of the log weights

    // Maintained aggregates (see add_mass / delete_mass).
    double a_sum_zero_ = 0.0;
    double a_active_zero_ = 0.0;
    std::int64_t n_inactive_zero_ = 0;
    double d_sum_one_ = 0.0;

    std::vector<std::int32_t> active_list_;
    std::vector<std::int32_t> active_slot_;  // -1 when inactive

    AliasTable table_;
    bool table_stale_ = true;
    std::vector<double> table_weights_;  // scratch for rebuilds

    std::uint64_t mutations_ = 0;

    static constexpr int kMaxRedraws = 50;
    static constexpr std::uint64_t kRecomputeEvery = 1u << 20;
};

}  // namespace cpmc

#endif
