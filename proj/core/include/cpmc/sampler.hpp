#ifndef CPMC_SAMPLER_HPP
#define CPMC_SAMPLER_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

#include "cpmc/changepoint_state.hpp"
#include "cpmc/gap_prior.hpp"
#include "cpmc/rng.hpp"
#include "cpmc/segment_model.hpp"
#include "cpmc/selection_weights.hpp"
#include "cpmc/summary.hpp"

namespace cpmc {

enum class MoveKind { Add, Delete, Adjust };

struct MoveRecord {
    std::uint64_t iteration = 0;
    MoveKind kind = MoveKind::Add;
    int position = 0;   // toggled position, or the proposed target for Adjust
    int from = -1;      // previous position (Adjust only)
    bool accepted = false;
    double alpha_fwd = 0.0;  // acceptance probability of the move
    double alpha_rev = 0.0;  // acceptance probability of the reverse move
};

struct SamplerConfig {
    double p_add = 0.5;         // probability of proposing an add move
    double alpha_target = 0.15; // target acceptance rate for adaptation
    double h = 0.01;            // initial adaptation intensity
    bool adaptation_enabled = true;
    bool adjust_enabled = false;
    bool thresholding_enabled = false;
    bool dual_adaptation_enabled = false;
    double dual_weight = 0.5;

    std::uint64_t iterations = 0;
    std::uint64_t burn_in = 0;
    std::uint64_t thin = 0;  // 0: pick the smallest thin keeping <= 1e6 retained samples
    std::uint64_t seed = 1;
    double time_budget_seconds = 0.0;  // > 0: stop on wall clock instead of iterations

    double a_cutoff = 2.718281828459045;
    double a_inactive = 1.0;
    double log_floor = -30.0;
    double log_ceil = 30.0;

    WeightConfig weight_config() const {
        WeightConfig w;
        w.thresholding = thresholding_enabled;
        w.a_cutoff = a_cutoff;
        w.a_inactive = a_inactive;
        w.log_floor = log_floor;
        w.log_ceil = log_ceil;
        return w;
    }

    void validate() const;
};

struct MoveStats {
    AcceptanceCounter add_moves, delete_moves, adjust_moves;
    std::uint64_t adaptation_steps = 0;
    std::uint64_t adaptation_bound_violations = 0;
    std::uint64_t log_post_recomputes = 0;
    double max_cache_drift = 0.0;
};

struct RunResult {
    PosteriorSummary summary;
    MoveStats stats;
    ChangepointState final_state;
    std::uint64_t iterations_run = 0;
    double wall_seconds = 0.0;
    // Extremes over every selection weight at termination; inside
    // [log_floor, log_ceil] by the clamp, recorded so callers can audit it.
    double final_min_log_weight = 0.0;
    double final_max_log_weight = 0.0;
};

// Gap-prior factor for the stretch between changepoint x (0 for the series
// start) and the next changepoint y, with y == n meaning "no further
// changepoint": the survivor mass past the last admissible position n-1.
inline double log_gap_factor(const GapPrior& prior, int x, int y, int n) {
    return y < n ? prior.log_gap(y - x) : prior.log_survivor(n - 1 - x);
}

// Prior and evidence deltas for splitting the segment (a, b] at i. Deleting a
// changepoint at i is the negation with the same neighbors.
inline double split_delta_log_prior(const GapPrior& prior, int a, int i, int b, int n) {
    return log_gap_factor(prior, a, i, n) + log_gap_factor(prior, i, b, n) -
           log_gap_factor(prior, a, b, n);
}

inline double split_delta_log_marginal(const SeriesCache& cache, const SegmentModel& model,
                                       int a, int i, int b) {
    return model.log_marginal(cache, a + 1, i) + model.log_marginal(cache, i + 1, b) -
           model.log_marginal(cache, a + 1, b);
}

// Unclamped log MH ratios assembled from the posterior deltas, the move-type
// odds and the selection probabilities of the forward move and its reversal.
inline double log_ratio_add(double delta_prior, double delta_marg, double p_add,
                            double log_q_fwd, double log_q_rev) {
    return delta_prior + delta_marg + std::log1p(-p_add) - std::log(p_add) + log_q_rev -
           log_q_fwd;
}

inline double log_ratio_delete(double delta_prior, double delta_marg, double p_add,
                               double log_q_fwd, double log_q_rev) {
    return -delta_prior - delta_marg + std::log(p_add) - std::log1p(-p_add) + log_q_rev -
           log_q_fwd;
}

// Acceptance probabilities for toggling position i from the current state,
// with selection probabilities evaluated exactly (full scan) from the given
// weights. These are the reference forms; the run loop assembles the same
// quantities from the proposal it actually drew.
double log_accept_ratio_add(const ChangepointState& state, int pos, const SeriesCache& cache,
                            const SegmentModel& model, const GapPrior& prior,
                            const SelectionWeights& weights, const SamplerConfig& cfg);
double log_accept_ratio_delete(const ChangepointState& state, int pos,
                               const SeriesCache& cache, const SegmentModel& model,
                               const GapPrior& prior, const SelectionWeights& weights,
                               const SamplerConfig& cfg);

inline double mh_ratio_add(const ChangepointState& state, int pos, const SeriesCache& cache,
                           const SegmentModel& model, const GapPrior& prior,
                           const SelectionWeights& weights, const SamplerConfig& cfg) {
    return std::min(1.0, std::exp(log_accept_ratio_add(state, pos, cache, model, prior,
                                                       weights, cfg)));
}

inline double mh_ratio_delete(const ChangepointState& state, int pos,
                              const SeriesCache& cache, const SegmentModel& model,
                              const GapPrior& prior, const SelectionWeights& weights,
                              const SamplerConfig& cfg) {
    return std::min(1.0, std::exp(log_accept_ratio_delete(state, pos, cache, model, prior,
                                                          weights, cfg)));
}

// Pick a changepoint uniformly and propose a uniform relocation strictly
// between its neighboring changepoints (the current position included, so a
// gap of width one is a guaranteed self-move). Symmetric proposal, no
// correction term. No-op when k = 0. Mutates the state on acceptance; the
// caller refreshes any SelectionWeights bookkeeping for the moved indicator.
MoveRecord adjust_move(ChangepointState& state, const SeriesCache& cache,
                       const SegmentModel& model, const GapPrior& prior, Rng& rng,
                       std::uint64_t iteration = 0);

// Selection-weight update from an accepted add/delete move at Monte Carlo
// time (t+1)/n: the step size h*n/(t+1) vanishes in t, which is what keeps
// the adaptation diminishing. Dual adaptation moves both vectors using the
// forward and reverse acceptance probabilities. Every step is checked against
// the bound h*n/(t+1) * max(alpha_target, 1-alpha_target); violations are
// counted in stats and cannot happen unless the update formulas change.
void adapt_weights(SelectionWeights& weights, const MoveRecord& record, std::uint64_t t,
                   const SamplerConfig& cfg, const ChangepointState& state,
                   MoveStats* stats = nullptr);

// Adaptive MCMC changepoint sampler over the collapsed posterior. One
// instance per chain; the shared cache/model/prior are read-only.
class Sampler {
public:
    using RetainedCallback = std::function<void(const ChangepointState&)>;

    Sampler(const SeriesCache& cache, const SegmentModel& model, const GapPrior& prior,
            SamplerConfig cfg);

    // Observer invoked on every retained (post burn-in, thinned) state.
    void set_retained_callback(RetainedCallback cb) { on_retained_ = std::move(cb); }

    RunResult run() { return run(ChangepointState(cache_.n)); }
    RunResult run(const ChangepointState& init);

private:
    const SeriesCache& cache_;
    const SegmentModel& model_;
    const GapPrior& prior_;
    SamplerConfig cfg_;
    RetainedCallback on_retained_;
};

}  // namespace cpmc

#endif
