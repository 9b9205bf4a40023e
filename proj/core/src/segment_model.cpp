#include "cpmc/segment_model.hpp"

#include <cmath>

namespace cpmc {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(std::string(name) + " must be a positive finite real");
}

}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::PoissonGamma: return "poisson-gamma";
    case ModelKind::GaussianMean: return "gaussian-mean";
    case ModelKind::GaussianPrecision: return "gaussian-precision";
    }
    return "?";
}

SegmentModel SegmentModel::poisson_gamma(double alpha, double beta) {
    require_positive(alpha, "alpha");
    require_positive(beta, "beta");
    const double log_norm = alpha * std::log(beta) - std::lgamma(alpha);
    return SegmentModel(ModelKind::PoissonGamma, alpha, beta, 0.0, 0.0, 0.0, log_norm);
}

SegmentModel SegmentModel::gaussian_mean(double prior_mean, double sigma2, double tau2) {
    require_positive(sigma2, "sigma2");
    require_positive(tau2, "tau2");
    if (!std::isfinite(prior_mean)) throw ConfigError("prior mean must be finite");
    const double log_norm = std::log(2.0 * M_PI * sigma2);
    return SegmentModel(ModelKind::GaussianMean, 0.0, 0.0, prior_mean, sigma2, tau2, log_norm);
}

SegmentModel SegmentModel::gaussian_precision(double mu, double alpha0, double beta0) {
    require_positive(alpha0, "alpha0");
    require_positive(beta0, "beta0");
    if (!std::isfinite(mu)) throw ConfigError("mu must be finite");
    const double log_norm = alpha0 * std::log(beta0) - std::lgamma(alpha0);
    return SegmentModel(ModelKind::GaussianPrecision, alpha0, beta0, mu, 0.0, 0.0, log_norm);
}

SeriesCache build_cache(std::span<const double> y, const SegmentModel& model) {
    const int n = static_cast<int>(y.size());
    if (n < 2) throw DataError("series must contain at least 2 observations");

    SeriesCache cache;
    cache.n = n;
    cache.y.assign(n + 1, 0.0);
    cache.prefix_sum.assign(n + 1, 0.0);
    cache.prefix_sumsq.assign(n + 1, 0.0);
    const bool integer_data = model.requires_integer_data();
    if (integer_data) cache.prefix_logfact.assign(n + 1, 0.0);

    // Accumulate in extended precision; the stored prefix arrays are doubles
    // but their build-up should not compound rounding over long series.
    long double sum = 0.0L, sumsq = 0.0L, logfact = 0.0L;
    for (int t = 1; t <= n; ++t) {
        const double v = y[t - 1];
        if (!std::isfinite(v))
            throw DataError("observation " + std::to_string(t) + " is not finite");
        if (integer_data) {
            if (v < 0.0 || v != std::floor(v))
                throw DataError("poisson-gamma model requires non-negative integer data; "
                                "observation " + std::to_string(t) + " = " + std::to_string(v));
            logfact += std::lgamma(static_cast<long double>(v) + 1.0L);
            cache.prefix_logfact[t] = static_cast<double>(logfact);
        }
        cache.y[t] = v;
        sum += v;
        sumsq += static_cast<long double>(v) * v;
        cache.prefix_sum[t] = static_cast<double>(sum);
        cache.prefix_sumsq[t] = static_cast<double>(sumsq);
    }
    return cache;
}

}  // namespace cpmc
