#ifndef CPMC_SEGMENT_MODEL_HPP
#define CPMC_SEGMENT_MODEL_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "cpmc/errors.hpp"
#include "cpmc/numerics.hpp"

namespace cpmc {

class SegmentModel;

// Observations plus prefix statistics. Segment marginal likelihoods reduce to
// prefix differences, so every P(a,b) evaluation is O(1) after an O(n) build.
// Immutable after construction; safe to share across chains.
struct SeriesCache {
    int n = 0;
    std::vector<double> y;               // 1-based, y[0] = 0 padding
    std::vector<double> prefix_sum;      // prefix_sum[t] = sum of y[1..t], t = 0..n
    std::vector<double> prefix_sumsq;
    std::vector<double> prefix_logfact;  // sum of log(y_i!), integer-data models only

    bool has_logfact() const { return !prefix_logfact.empty(); }

    double seg_sum(int a, int b) const { return prefix_sum[b] - prefix_sum[a - 1]; }
    double seg_sumsq(int a, int b) const { return prefix_sumsq[b] - prefix_sumsq[a - 1]; }
    double seg_logfact(int a, int b) const { return prefix_logfact[b] - prefix_logfact[a - 1]; }
};

enum class ModelKind { PoissonGamma, GaussianMean, GaussianPrecision };

std::string to_string(ModelKind kind);

// Conjugate within-segment likelihood model. log_marginal(a, b) is the log
// evidence for the observations y_a..y_b under a single segment parameter
// integrated against its prior, computed entirely in log space.
class SegmentModel {
public:
    static SegmentModel poisson_gamma(double alpha, double beta);
    static SegmentModel gaussian_mean(double prior_mean, double sigma2, double tau2);
    static SegmentModel gaussian_precision(double mu, double alpha0, double beta0);

    ModelKind kind() const { return kind_; }
    bool requires_integer_data() const { return kind_ == ModelKind::PoissonGamma; }

    // Poisson-Gamma
    double alpha() const { return shape_; }
    double beta() const { return rate_; }
    // Gaussian mean
    double prior_mean() const { return mean_; }
    double sigma2() const { return sigma2_; }
    double tau2() const { return tau2_; }
    // Gaussian precision
    double mu() const { return mean_; }
    double alpha0() const { return shape_; }
    double beta0() const { return rate_; }

    double log_marginal(const SeriesCache& cache, int a, int b) const {
        if (a < 1 || b > cache.n || a > b)
            throw StateError("log_marginal: segment [" + std::to_string(a) + "," +
                             std::to_string(b) + "] out of range for n=" + std::to_string(cache.n));
        const double k = static_cast<double>(b - a + 1);
        switch (kind_) {
        case ModelKind::PoissonGamma: {
            const double s = cache.seg_sum(a, b);
            return log_norm_ - cache.seg_logfact(a, b) + std::lgamma(s + shape_) -
                   (s + shape_) * std::log(k + rate_);
        }
        case ModelKind::GaussianMean: {
            const double s1 = cache.seg_sum(a, b);
            const double s2 = cache.seg_sumsq(a, b);
            // Sum of squared deviations from the segment mean; clamp the tiny
            // negative values cancellation can produce.
            double ssd = s2 - s1 * s1 / k;
            if (ssd < 0.0) ssd = 0.0;
            const double dev = mean_ - s1 / k;
            return -0.5 * k * log_norm_ - 0.5 * std::log(k * tau2_ + 1.0) -
                   (ssd + k / (k * tau2_ + 1.0) * dev * dev) / (2.0 * sigma2_);
        }
        case ModelKind::GaussianPrecision: {
            const double s1 = cache.seg_sum(a, b);
            const double s2 = cache.seg_sumsq(a, b);
            double ss = s2 - 2.0 * mean_ * s1 + k * mean_ * mean_;
            if (ss < 0.0) ss = 0.0;
            return -0.5 * k * kLog2Pi + std::lgamma(0.5 * k + shape_) + log_norm_ -
                   (shape_ + 0.5 * k) * std::log(rate_ + 0.5 * ss);
        }
        }
        return kNegInf;  // unreachable
    }

private:
    SegmentModel(ModelKind kind, double shape, double rate, double mean, double sigma2,
                 double tau2, double log_norm)
        : kind_(kind), shape_(shape), rate_(rate), mean_(mean), sigma2_(sigma2), tau2_(tau2),
          log_norm_(log_norm) {}

    ModelKind kind_;
    double shape_, rate_;   // (alpha, beta) or (alpha0, beta0)
    double mean_;           // m or mu
    double sigma2_, tau2_;
    double log_norm_;       // kind-specific precomputed constant
};

SeriesCache build_cache(std::span<const double> y, const SegmentModel& model);

}  // namespace cpmc

#endif
