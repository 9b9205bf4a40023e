#ifndef CPMC_GAP_PRIOR_HPP
#define CPMC_GAP_PRIOR_HPP

#include <span>
#include <string>

#include "cpmc/errors.hpp"

namespace cpmc {

enum class GapKind { Geometric, NegativeBinomial };

std::string to_string(GapKind kind);

// Prior on the gap length between successive changepoints. g(t) is the gap
// pmf on t = 1, 2, ...; the survivor function 1 - G(t) carries the final
// segment past the end of the series. Changepoint positions live in
// {1, ..., n-1}, so the last factor of the prior is the probability that the
// next gap clears the remaining n-1-tau_k admissible positions, and the
// empty configuration has prior 1 - G(n-1). Under this convention the prior
// over all 2^(n-1) indicator vectors sums to exactly 1 and matches the
// filtering recursion's boundary term.
class GapPrior {
public:
    static GapPrior geometric(double p);
    static GapPrior negative_binomial(int k, double p);

    GapKind kind() const { return kind_; }
    double p() const { return p_; }
    int nb_k() const { return nb_k_; }

    // log g(t), t >= 1.
    double log_gap(int t) const {
        if (t < 1) throw StateError("gap length must be >= 1, got " + std::to_string(t));
        if (kind_ == GapKind::Geometric) return log_p_ + (t - 1) * log_1mp_;
        return nb_log_gap(t);
    }

    // log(1 - G(t)) = log P(gap > t), t >= 0. Non-increasing in t.
    double log_survivor(int t) const {
        if (t <= 0) return 0.0;
        if (kind_ == GapKind::Geometric) return t * log_1mp_;
        return nb_log_survivor(t);
    }

    // Log prior of an ordered changepoint configuration; g0 = g.
    double log_prior_z(std::span<const int> positions, int n) const;

private:
    GapPrior(GapKind kind, double p, int k);

    double nb_log_gap(int t) const;
    double nb_log_survivor(int t) const;

    GapKind kind_;
    double p_;
    int nb_k_;
    double log_p_, log_1mp_;
};

}  // namespace cpmc

#endif
