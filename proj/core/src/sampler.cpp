#include "cpmc/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace cpmc {

namespace {

constexpr std::uint64_t kLogPostRecomputeEvery = 1'000'000;  // accepted moves
constexpr std::uint64_t kClockCheckMask = 0xFFFF;            // budget polls
// Ignore sub-noise "improvements" so cache drift cannot grow the MAP trace.
constexpr double kMapImprovementEps = 1e-9;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void SamplerConfig::validate() const {
    if (!(p_add > 0.0 && p_add < 1.0)) throw ConfigError("p_add must be in (0, 1)");
    if (!(alpha_target > 0.0 && alpha_target < 1.0))
        throw ConfigError("alpha_target must be in (0, 1)");
    if (!(h > 0.0)) throw ConfigError("adaptation intensity h must be > 0");
    if (!(dual_weight >= 0.0 && dual_weight <= 1.0))
        throw ConfigError("dual adaptation weight must be in [0, 1]");
    if (iterations > 0 && burn_in >= iterations)
        throw ConfigError("burn_in must be smaller than iterations");
    if (time_budget_seconds < 0.0) throw ConfigError("time budget must be >= 0");
}

double log_accept_ratio_add(const ChangepointState& state, int pos, const SeriesCache& cache,
                            const SegmentModel& model, const GapPrior& prior,
                            const SelectionWeights& weights, const SamplerConfig& cfg) {
    const auto [a, b] = state.neighbors(pos);
    return log_ratio_add(split_delta_log_prior(prior, a, pos, b, state.n()),
                         split_delta_log_marginal(cache, model, a, pos, b), cfg.p_add,
                         weights.log_add_proposal_prob(state, pos),
                         weights.log_rev_delete_prob(pos));
}

double log_accept_ratio_delete(const ChangepointState& state, int pos,
                               const SeriesCache& cache, const SegmentModel& model,
                               const GapPrior& prior, const SelectionWeights& weights,
                               const SamplerConfig& cfg) {
    const auto [a, b] = state.neighbors(pos);
    return log_ratio_delete(split_delta_log_prior(prior, a, pos, b, state.n()),
                            split_delta_log_marginal(cache, model, a, pos, b), cfg.p_add,
                            weights.log_delete_proposal_prob(state, pos),
                            weights.log_rev_add_prob(pos));
}

MoveRecord adjust_move(ChangepointState& state, const SeriesCache& cache,
                       const SegmentModel& model, const GapPrior& prior, Rng& rng,
                       std::uint64_t iteration) {
    MoveRecord rec;
    rec.iteration = iteration;
    rec.kind = MoveKind::Adjust;
    const int k = state.k();
    if (k == 0) return rec;  // cannot be attempted

    const int from = state.positions()[rng.uniform_int(k)];
    const auto [a, b] = state.neighbors(from);
    const int to = a + 1 + static_cast<int>(rng.uniform_int(b - a - 1));
    rec.from = from;
    rec.position = to;
    if (to == from) {
        rec.accepted = true;
        rec.alpha_fwd = 1.0;
        rec.alpha_rev = 1.0;
        return rec;
    }

    const int n = state.n();
    const double delta = split_delta_log_prior(prior, a, to, b, n) -
                         split_delta_log_prior(prior, a, from, b, n) +
                         split_delta_log_marginal(cache, model, a, to, b) -
                         split_delta_log_marginal(cache, model, a, from, b);
    rec.alpha_fwd = std::min(1.0, std::exp(delta));
    rec.alpha_rev = std::min(1.0, std::exp(-delta));
    if (rng.uniform() < rec.alpha_fwd) {
        state.apply_shift(from, to, delta);
        rec.accepted = true;
    }
    return rec;
}

void adapt_weights(SelectionWeights& weights, const MoveRecord& record, std::uint64_t t,
                   const SamplerConfig& cfg, const ChangepointState& state,
                   MoveStats* stats) {
    if (!record.accepted || record.kind == MoveKind::Adjust) return;

    const double eta =
        cfg.h * static_cast<double>(state.n()) / (static_cast<double>(t) + 1.0);
    const double bound = eta * std::max(cfg.alpha_target, 1.0 - cfg.alpha_target);
    const int pos = record.position;

    auto checked = [&](double delta) {
        if (stats) {
            ++stats->adaptation_steps;
            if (std::abs(delta) > bound * (1.0 + 1e-12))
                ++stats->adaptation_bound_violations;
        }
        return delta;
    };

    if (!cfg.dual_adaptation_enabled) {
        const double delta = checked(eta * (record.alpha_fwd - cfg.alpha_target));
        if (record.kind == MoveKind::Add)
            weights.set_log_a(pos, weights.log_a(pos) + delta, state);
        else
            weights.set_log_d(pos, weights.log_d(pos) + delta, state);
        return;
    }

    const double fwd = checked(eta * (record.alpha_fwd - cfg.alpha_target) *
                               (1.0 - cfg.dual_weight * record.alpha_fwd));
    const double rev =
        checked(eta * (record.alpha_rev - cfg.alpha_target) * record.alpha_fwd);
    if (record.kind == MoveKind::Add) {
        weights.set_log_a(pos, weights.log_a(pos) + fwd, state);
        weights.set_log_d(pos, weights.log_d(pos) + rev, state);
    } else {
        weights.set_log_d(pos, weights.log_d(pos) + fwd, state);
        weights.set_log_a(pos, weights.log_a(pos) + rev, state);
    }
}

Sampler::Sampler(const SeriesCache& cache, const SegmentModel& model, const GapPrior& prior,
                 SamplerConfig cfg)
    : cache_(cache), model_(model), prior_(prior), cfg_(cfg) {
    cfg_.validate();
}

RunResult Sampler::run(const ChangepointState& init) {
    if (init.n() != cache_.n)
        throw StateError("initial state length does not match the series");

    ChangepointState state = init;
    state.set_log_post(log_posterior(state, cache_, model_, prior_));

    SelectionWeights weights(state, cfg_.weight_config());
    Rng rng(cfg_.seed);
    SummaryAccumulator acc(cache_.n);
    MoveStats stats;

    const int n = cache_.n;
    const std::uint64_t max_iters =
        cfg_.iterations > 0
            ? cfg_.iterations
            : (cfg_.time_budget_seconds > 0.0 ? UINT64_MAX / 2 : 0);
    std::uint64_t thin = cfg_.thin;
    if (thin == 0) {
        const std::uint64_t span = max_iters > cfg_.burn_in ? max_iters - cfg_.burn_in : 1;
        thin = std::max<std::uint64_t>(1, (span + 999'999) / 1'000'000);
    }

    const auto t0 = std::chrono::steady_clock::now();
    double best = state.log_post();
    acc.record_map_candidate(0, 0.0, best, state.positions());

    std::uint64_t accepted_since_check = 0;
    auto note_acceptance = [&](std::uint64_t t) {
        if (state.log_post() > best + kMapImprovementEps) {
            best = state.log_post();
            acc.record_map_candidate(t + 1, seconds_since(t0), best, state.positions());
        }
        if (++accepted_since_check >= kLogPostRecomputeEvery) {
            accepted_since_check = 0;
            const double fresh = log_posterior(state, cache_, model_, prior_);
            stats.max_cache_drift =
                std::max(stats.max_cache_drift, std::abs(fresh - state.log_post()));
            state.set_log_post(fresh);
            ++stats.log_post_recomputes;
        }
    };

    std::uint64_t t = 0;
    for (; t < max_iters; ++t) {
        if (cfg_.time_budget_seconds > 0.0 && (t & kClockCheckMask) == 0 && t != 0 &&
            seconds_since(t0) >= cfg_.time_budget_seconds)
            break;

        if (rng.uniform() < cfg_.p_add) {
            ++stats.add_moves.attempts;
            // A saturated state leaves nothing to add: automatic rejection.
            if (state.k() < n - 1) {
                const AddProposal prop = weights.sample_add_position(state, rng);
                const auto [a, b] = state.neighbors(prop.position);
                const double split_p = split_delta_log_prior(prior_, a, prop.position, b, n);
                const double split_m =
                    split_delta_log_marginal(cache_, model_, a, prop.position, b);
                const double delta = split_p + split_m;
                const double log_r = log_ratio_add(split_p, split_m, cfg_.p_add,
                                                   prop.log_q_fwd, prop.log_q_rev);
                const double alpha = log_r >= 0.0 ? 1.0 : std::exp(log_r);
                if (rng.uniform() < alpha) {
                    ++stats.add_moves.accepts;
                    state.apply_toggle(prop.position, delta);
                    weights.on_toggle(prop.position, state);
                    if (cfg_.adaptation_enabled) {
                        MoveRecord rec{t, MoveKind::Add, prop.position, -1, true, alpha,
                                       std::min(1.0, std::exp(-log_r))};
                        adapt_weights(weights, rec, t, cfg_, state, &stats);
                    }
                    note_acceptance(t);
                }
            }
        } else {
            ++stats.delete_moves.attempts;
            // Deleting from an empty configuration is an automatic rejection.
            if (state.k() > 0) {
                const DeleteProposal prop = weights.sample_delete_position(state, rng);
                const auto [a, b] = state.neighbors(prop.position);
                const double split_p = split_delta_log_prior(prior_, a, prop.position, b, n);
                const double split_m =
                    split_delta_log_marginal(cache_, model_, a, prop.position, b);
                const double delta = -(split_p + split_m);
                const double log_r = log_ratio_delete(split_p, split_m, cfg_.p_add,
                                                      prop.log_q_fwd, prop.log_q_rev);
                const double alpha = log_r >= 0.0 ? 1.0 : std::exp(log_r);
                if (rng.uniform() < alpha) {
                    ++stats.delete_moves.accepts;
                    state.apply_toggle(prop.position, delta);
                    weights.on_toggle(prop.position, state);
                    if (cfg_.adaptation_enabled) {
                        MoveRecord rec{t, MoveKind::Delete, prop.position, -1, true, alpha,
                                       std::min(1.0, std::exp(-log_r))};
                        adapt_weights(weights, rec, t, cfg_, state, &stats);
                    }
                    note_acceptance(t);
                }
            }
        }

        if (cfg_.adjust_enabled) {
            ++stats.adjust_moves.attempts;
            const MoveRecord rec = adjust_move(state, cache_, model_, prior_, rng, t);
            if (rec.accepted) {
                ++stats.adjust_moves.accepts;
                if (rec.position != rec.from) {
                    weights.on_toggle(rec.from, state);
                    weights.on_toggle(rec.position, state);
                    note_acceptance(t);
                }
            }
        }

        if (t >= cfg_.burn_in && (t - cfg_.burn_in) % thin == 0) {
            acc.add(state);
            if (on_retained_) on_retained_(state);
        }
    }

    if (max_iters == 0) {
        // Degenerate run: the summary is the initial state's point mass.
        acc.add(state);
        if (on_retained_) on_retained_(state);
    }

    acc.add_moves = stats.add_moves;
    acc.delete_moves = stats.delete_moves;
    acc.adjust_moves = stats.adjust_moves;

    double lo = weights.log_a(1), hi = lo;
    for (int pos = 1; pos <= n - 1; ++pos) {
        lo = std::min({lo, weights.log_a(pos), weights.log_d(pos)});
        hi = std::max({hi, weights.log_a(pos), weights.log_d(pos)});
    }

    RunResult result{acc.finalize(), stats,        std::move(state), t,
                     seconds_since(t0), lo, hi};
    return result;
}

}  // namespace cpmc
