#include "cpmc/summary.hpp"

#include <algorithm>
#include <cmath>

#include "cpmc/errors.hpp"

namespace cpmc {

SummaryAccumulator::SummaryAccumulator(int n)
    : n_(n), count_hist_(n, 0), inclusion_(n - 1, 0) {
    if (n < 2) throw StateError("summary requires n >= 2");
}

void SummaryAccumulator::add(std::span<const int> positions, double log_post) {
    ++n_samples_;
    ++count_hist_[positions.size()];
    for (int pos : positions) ++inclusion_[pos - 1];
    // Keeps the running MAP for sample-fed summaries; a no-op when the caller
    // already records candidates itself (a retained state can tie the cached
    // maximum but never beat it).
    record_map_candidate(n_samples_, 0.0, log_post, positions);
}

void SummaryAccumulator::record_map_candidate(std::uint64_t iteration, double seconds,
                                              double log_post,
                                              std::span<const int> positions) {
    if (have_map_ && log_post <= map_log_post_) return;
    have_map_ = true;
    map_log_post_ = log_post;
    map_positions_.assign(positions.begin(), positions.end());
    map_trace_.push_back({iteration, seconds, log_post});
}

void SummaryAccumulator::merge(const SummaryAccumulator& other) {
    if (other.n_ != n_) throw StateError("cannot merge summaries of different lengths");
    n_samples_ += other.n_samples_;
    for (int k = 0; k < n_; ++k) count_hist_[k] += other.count_hist_[k];
    for (int j = 0; j + 1 < n_; ++j) inclusion_[j] += other.inclusion_[j];
    add_moves.attempts += other.add_moves.attempts;
    add_moves.accepts += other.add_moves.accepts;
    delete_moves.attempts += other.delete_moves.attempts;
    delete_moves.accepts += other.delete_moves.accepts;
    adjust_moves.attempts += other.adjust_moves.attempts;
    adjust_moves.accepts += other.adjust_moves.accepts;
    if (other.have_map_ && (!have_map_ || other.map_log_post_ > map_log_post_)) {
        have_map_ = true;
        map_log_post_ = other.map_log_post_;
        map_positions_ = other.map_positions_;
    }
    // Merge traces by iteration and keep the running maximum so the combined
    // trace is still non-decreasing.
    std::vector<MapTracePoint> merged;
    merged.reserve(map_trace_.size() + other.map_trace_.size());
    std::merge(map_trace_.begin(), map_trace_.end(), other.map_trace_.begin(),
               other.map_trace_.end(), std::back_inserter(merged),
               [](const MapTracePoint& a, const MapTracePoint& b) {
                   return a.iteration < b.iteration;
               });
    map_trace_.clear();
    for (const MapTracePoint& pt : merged) {
        if (map_trace_.empty() || pt.log_post > map_trace_.back().log_post)
            map_trace_.push_back(pt);
    }
}

PosteriorSummary merge_summaries(const PosteriorSummary& a, const PosteriorSummary& b) {
    if (a.n != b.n) throw StateError("cannot merge summaries of different lengths");
    PosteriorSummary out;
    out.n = a.n;
    out.n_samples = a.n_samples + b.n_samples;
    const double an = static_cast<double>(a.n_samples);
    const double bn = static_cast<double>(b.n_samples);
    const double inv = 1.0 / static_cast<double>(out.n_samples);
    out.count_hist.resize(a.n);
    out.inclusion_prob.resize(a.n - 1);
    // prob * n_samples is an integer tally; round() recovers it exactly.
    for (int k = 0; k < a.n; ++k)
        out.count_hist[k] =
            (std::round(a.count_hist[k] * an) + std::round(b.count_hist[k] * bn)) * inv;
    for (int j = 0; j + 1 < a.n; ++j)
        out.inclusion_prob[j] =
            (std::round(a.inclusion_prob[j] * an) + std::round(b.inclusion_prob[j] * bn)) *
            inv;

    const bool a_wins = a.map_log_post >= b.map_log_post;
    out.map_log_post = a_wins ? a.map_log_post : b.map_log_post;
    out.map_positions = a_wins ? a.map_positions : b.map_positions;

    std::merge(a.map_trace.begin(), a.map_trace.end(), b.map_trace.begin(),
               b.map_trace.end(), std::back_inserter(out.map_trace),
               [](const MapTracePoint& x, const MapTracePoint& y) {
                   return x.iteration < y.iteration;
               });
    std::vector<MapTracePoint> pruned;
    for (const MapTracePoint& pt : out.map_trace)
        if (pruned.empty() || pt.log_post > pruned.back().log_post) pruned.push_back(pt);
    out.map_trace = std::move(pruned);

    auto add_counts = [](AcceptanceCounter x, const AcceptanceCounter& y) {
        x.attempts += y.attempts;
        x.accepts += y.accepts;
        return x;
    };
    out.add_moves = add_counts(a.add_moves, b.add_moves);
    out.delete_moves = add_counts(a.delete_moves, b.delete_moves);
    out.adjust_moves = add_counts(a.adjust_moves, b.adjust_moves);
    return out;
}

PosteriorSummary SummaryAccumulator::finalize() const {
    if (n_samples_ == 0) throw DataError("no retained samples to summarize");
    PosteriorSummary out;
    out.n = n_;
    out.n_samples = n_samples_;
    const double inv = 1.0 / static_cast<double>(n_samples_);
    out.count_hist.resize(n_);
    for (int k = 0; k < n_; ++k)
        out.count_hist[k] = static_cast<double>(count_hist_[k]) * inv;
    out.inclusion_prob.resize(n_ - 1);
    for (int j = 0; j + 1 < n_; ++j)
        out.inclusion_prob[j] = static_cast<double>(inclusion_[j]) * inv;
    out.map_log_post = map_log_post_;
    out.map_positions = map_positions_;
    out.map_trace = map_trace_;
    out.add_moves = add_moves;
    out.delete_moves = delete_moves;
    out.adjust_moves = adjust_moves;
    return out;
}

}  // namespace cpmc
