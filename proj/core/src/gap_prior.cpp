#include "cpmc/gap_prior.hpp"

#include <cmath>

#include "cpmc/numerics.hpp"

namespace cpmc {

std::string to_string(GapKind kind) {
    return kind == GapKind::Geometric ? "geometric" : "negative-binomial";
}

GapPrior::GapPrior(GapKind kind, double p, int k)
    : kind_(kind), p_(p), nb_k_(k), log_p_(std::log(p)), log_1mp_(std::log1p(-p)) {}

GapPrior GapPrior::geometric(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw ConfigError("geometric prior requires 0 < p < 1");
    return GapPrior(GapKind::Geometric, p, 1);
}

GapPrior GapPrior::negative_binomial(int k, double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw ConfigError("negative binomial prior requires 0 < p < 1");
    if (k < 1) throw ConfigError("negative binomial prior requires k >= 1");
    return GapPrior(GapKind::NegativeBinomial, p, k);
}

double GapPrior::nb_log_gap(int t) const {
    // g(t) = C(t-1, k-1) p^k (1-p)^(t-k), supported on t >= k.
    if (t < nb_k_) return kNegInf;
    const double log_choose =
        std::lgamma(t) - std::lgamma(nb_k_) - std::lgamma(t - nb_k_ + 1);
    return log_choose + nb_k_ * log_p_ + (t - nb_k_) * log_1mp_;
}

double GapPrior::nb_log_survivor(int t) const {
    // P(gap > t) = P(fewer than k successes in t Bernoulli(p) trials).
    if (t < nb_k_) return 0.0;
    double acc = kNegInf;
    for (int j = 0; j < nb_k_; ++j) {
        const double log_choose =
            std::lgamma(t + 1.0) - std::lgamma(j + 1.0) - std::lgamma(t - j + 1.0);
        acc = log_add_exp(acc, log_choose + j * log_p_ + (t - j) * log_1mp_);
    }
    return acc;
}

double GapPrior::log_prior_z(std::span<const int> positions, int n) const {
    if (n < 2) throw StateError("series length must be >= 2");
    if (positions.empty()) return log_survivor(n - 1);
    int prev = 0;
    double acc = 0.0;
    for (int pos : positions) {
        if (pos <= prev || pos > n - 1)
            throw StateError("changepoint positions must be strictly increasing in [1, n-1]");
        acc += log_gap(pos - prev);
        prev = pos;
    }
    return acc + log_survivor(n - 1 - prev);
}

}  // namespace cpmc
