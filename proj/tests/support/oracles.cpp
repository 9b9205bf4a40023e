#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cpmc/numerics.hpp"

namespace cpmc::oracle {

namespace {

// log of Simpson-rule integral of exp(log_f) over [lo, hi].
template <typename LogF>
double log_simpson(LogF log_f, double lo, double hi, int intervals) {
    const double h = (hi - lo) / intervals;
    std::vector<double> terms(intervals + 1);
    for (int i = 0; i <= intervals; ++i) {
        const double coef = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        terms[i] = log_f(lo + i * h) + std::log(coef);
    }
    return log_sum_exp(terms) + std::log(h / 3.0);
}

double log_normal_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * std::log(2.0 * M_PI * var) - d * d / (2.0 * var);
}

}  // namespace

double quadrature_log_marginal(std::span<const double> y, const SegmentModel& model,
                               int a, int b) {
    const int k = b - a + 1;
    double s1 = 0.0, s2 = 0.0, lfact = 0.0;
    for (int i = a; i <= b; ++i) {
        s1 += y[i - 1];
        s2 += y[i - 1] * y[i - 1];
        lfact += std::lgamma(y[i - 1] + 1.0);
    }

    switch (model.kind()) {
    case ModelKind::PoissonGamma: {
        // theta = exp(u) substitution; integrand is gamma-shaped in theta.
        const double alpha = model.alpha(), beta = model.beta();
        const double shape = alpha + s1;
        const double peak = std::log(shape / (beta + k));
        const double sd = 1.0 / std::sqrt(shape);
        auto log_f = [&](double u) {
            return alpha * std::log(beta) - std::lgamma(alpha) - lfact + (alpha + s1) * u -
                   (beta + k) * std::exp(u);
        };
        return log_simpson(log_f, peak - 40.0 * sd - 8.0, peak + 40.0 * sd + 4.0, 40000);
    }
    case ModelKind::GaussianMean: {
        const double s2v = model.sigma2();
        const double prec = k / s2v + 1.0 / (model.tau2() * s2v);
        const double center = (s1 / s2v + model.prior_mean() / (model.tau2() * s2v)) / prec;
        const double sd = std::sqrt(1.0 / prec);
        auto log_f = [&](double mu) {
            double acc = log_normal_pdf(mu, model.prior_mean(), model.tau2() * s2v);
            for (int i = a; i <= b; ++i) acc += log_normal_pdf(y[i - 1], mu, s2v);
            return acc;
        };
        return log_simpson(log_f, center - 15.0 * sd, center + 15.0 * sd, 20000);
    }
    case ModelKind::GaussianPrecision: {
        const double a0 = model.alpha0(), b0 = model.beta0(), mu = model.mu();
        const double ss = s2 - 2.0 * mu * s1 + k * mu * mu;
        const double shape = a0 + 0.5 * k;
        const double rate = b0 + 0.5 * ss;
        const double peak = std::log(shape / rate);
        const double sd = 1.0 / std::sqrt(shape);
        auto log_f = [&](double u) {
            const double lambda = std::exp(u);
            // Gamma prior density, likelihood, and the e^u Jacobian.
            return a0 * std::log(b0) - std::lgamma(a0) + (a0 - 1.0) * u - b0 * lambda +
                   0.5 * k * (u - kLog2Pi) - 0.5 * ss * lambda + u;
        };
        return log_simpson(log_f, peak - 40.0 * sd - 8.0, peak + 40.0 * sd + 4.0, 40000);
    }
    }
    throw std::logic_error("unknown model kind");
}

double direct_log_marginal(std::span<const double> y, const SegmentModel& model,
                           int a, int b) {
    const double k = b - a + 1;
    double s1 = 0.0, s2 = 0.0, lfact = 0.0;
    for (int i = a; i <= b; ++i) {
        s1 += y[i - 1];
        s2 += y[i - 1] * y[i - 1];
        lfact += std::lgamma(y[i - 1] + 1.0);
    }
    switch (model.kind()) {
    case ModelKind::PoissonGamma:
        return model.alpha() * std::log(model.beta()) - std::lgamma(model.alpha()) - lfact +
               std::lgamma(s1 + model.alpha()) -
               (s1 + model.alpha()) * std::log(k + model.beta());
    case ModelKind::GaussianMean: {
        const double ssd = s2 - s1 * s1 / k;
        const double dev = model.prior_mean() - s1 / k;
        return -0.5 * k * std::log(2.0 * M_PI * model.sigma2()) -
               0.5 * std::log(k * model.tau2() + 1.0) -
               (ssd + k / (k * model.tau2() + 1.0) * dev * dev) / (2.0 * model.sigma2());
    }
    case ModelKind::GaussianPrecision: {
        const double ss = s2 - 2.0 * model.mu() * s1 + k * model.mu() * model.mu();
        return -0.5 * k * kLog2Pi + std::lgamma(0.5 * k + model.alpha0()) -
               std::lgamma(model.alpha0()) + model.alpha0() * std::log(model.beta0()) -
               (model.alpha0() + 0.5 * k) * std::log(model.beta0() + 0.5 * ss);
    }
    }
    throw std::logic_error("unknown model kind");
}

namespace {

// Gap pmf in linear space, straight from the definitions.
double gap_pmf(const GapPrior& prior, int t) {
    if (prior.kind() == GapKind::Geometric)
        return prior.p() * std::pow(1.0 - prior.p(), t - 1);
    const int k = prior.nb_k();
    if (t < k) return 0.0;
    double choose = 1.0;  // C(t-1, k-1) by incremental products
    for (int j = 1; j <= k - 1; ++j) choose *= static_cast<double>(t - k + j) / j;
    return choose * std::pow(prior.p(), k) * std::pow(1.0 - prior.p(), t - k);
}

// P(gap > t) by brute-force summation of the tail mass.
double gap_tail(const GapPrior& prior, int t) {
    double acc = 0.0;
    double tail = 1.0;
    for (int j = 1; j <= t; ++j) acc += gap_pmf(prior, j);
    tail = 1.0 - acc;
    return tail < 0.0 ? 0.0 : tail;
}

}  // namespace

double direct_log_prior(std::span<const int> positions, int n, const GapPrior& prior) {
    if (positions.empty()) return std::log(gap_tail(prior, n - 1));
    double prob = 1.0;
    int prev = 0;
    for (int pos : positions) {
        prob *= gap_pmf(prior, pos - prev);
        prev = pos;
    }
    prob *= gap_tail(prior, n - 1 - prev);
    return std::log(prob);
}

std::uint32_t positions_to_mask(std::span<const int> positions) {
    std::uint32_t mask = 0;
    for (int pos : positions) mask |= 1u << (pos - 1);
    return mask;
}

std::vector<int> mask_to_positions(std::uint32_t mask, int n) {
    std::vector<int> out;
    for (int pos = 1; pos <= n - 1; ++pos)
        if (mask & (1u << (pos - 1))) out.push_back(pos);
    return out;
}

Enumeration enumerate_posterior(std::span<const double> y, const SegmentModel& model,
                                const GapPrior& prior) {
    const int n = static_cast<int>(y.size());
    const std::uint32_t count = 1u << (n - 1);
    Enumeration out;
    out.n = n;
    out.log_weights.resize(count);
    for (std::uint32_t mask = 0; mask < count; ++mask) {
        const std::vector<int> positions = mask_to_positions(mask, n);
        double lw = prior.log_prior_z(positions, n);
        int start = 1;
        for (int pos : positions) {
            lw += direct_log_marginal(y, model, start, pos);
            start = pos + 1;
        }
        lw += direct_log_marginal(y, model, start, n);
        out.log_weights[mask] = lw;
    }
    out.log_evidence = log_sum_exp(out.log_weights);
    out.probs.resize(count);
    for (std::uint32_t mask = 0; mask < count; ++mask)
        out.probs[mask] = std::exp(out.log_weights[mask] - out.log_evidence);
    return out;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
    return 0.5 * acc;
}

int inverse_cdf_sample(std::span<const double> probs, Rng& rng) {
    const double u = rng.uniform();
    double cdf = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cdf += probs[i];
        if (u < cdf) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
}

double chi2_statistic(std::span<const std::uint64_t> counts, std::span<const double> probs,
                      double total) {
    double stat = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = total * probs[i];
        if (expected < 1e-12) {
            if (counts[i] != 0) return std::numeric_limits<double>::infinity();
            continue;
        }
        const double d = static_cast<double>(counts[i]) - expected;
        stat += d * d / expected;
    }
    return stat;
}

double chi2_quantile_9999(int df) {
    switch (df) {
    case 1: return 15.13670523;
    case 2: return 18.42068074;
    case 3: return 21.10751347;
    case 4: return 23.51274244;
    default: break;
    }
    const double z = 3.71901648545568;  // standard normal upper 1e-4 quantile
    const double c = 2.0 / (9.0 * df);
    const double base = 1.0 - c + z * std::sqrt(c);
    return df * base * base * base;
}

std::vector<double> piecewise_gaussian(int n, std::span<const int> cps,
                                       std::span<const double> means, double sigma,
                                       Rng& rng) {
    std::vector<double> y(n);
    std::size_t seg = 0;
    for (int t = 1; t <= n; ++t) {
        if (seg < cps.size() && t > cps[seg]) ++seg;
        y[t - 1] = means[seg] + sigma * rng.normal();
    }
    return y;
}

std::vector<double> piecewise_poisson(int n, std::span<const int> cps,
                                      std::span<const double> rates, Rng& rng) {
    std::vector<double> y(n);
    std::size_t seg = 0;
    for (int t = 1; t <= n; ++t) {
        if (seg < cps.size() && t > cps[seg]) ++seg;
        // Knuth's product method; rates stay small at desk scale.
        const double limit = std::exp(-rates[seg]);
        int count = -1;
        double prod = 1.0;
        do {
            ++count;
            prod *= rng.uniform_pos();
        } while (prod > limit);
        y[t - 1] = count;
    }
    return y;
}

SmallInstance random_instance(ModelKind kind, int n, Rng& rng) {
    // One planted shift somewhere in the middle, random prior success rate.
    const int cp = n <= 3 ? n - 1 : 2 + static_cast<int>(rng.uniform_int(n - 3));
    const std::vector<int> cps{cp};
    const double p = 0.05 + 0.3 * rng.uniform();
    switch (kind) {
    case ModelKind::PoissonGamma: {
        const std::vector<double> rates{1.0 + 3.0 * rng.uniform(), 4.0 + 6.0 * rng.uniform()};
        return {piecewise_poisson(n, cps, rates, rng),
                SegmentModel::poisson_gamma(0.5 + 2.0 * rng.uniform(), 0.5 + rng.uniform()),
                GapPrior::geometric(p)};
    }
    case ModelKind::GaussianMean: {
        const std::vector<double> means{-1.0 - rng.uniform(), 1.0 + 2.0 * rng.uniform()};
        return {piecewise_gaussian(n, cps, means, 1.0, rng),
                SegmentModel::gaussian_mean(0.0, 0.5 + rng.uniform(), 1.0 + 3.0 * rng.uniform()),
                GapPrior::geometric(p)};
    }
    case ModelKind::GaussianPrecision: {
        const std::vector<double> means{0.0, 0.0};
        std::vector<double> y = piecewise_gaussian(n, cps, means, 0.5, rng);
        for (int t = cp; t < n; ++t) y[t] *= 4.0 + 4.0 * rng.uniform();
        return {std::move(y),
                SegmentModel::gaussian_precision(0.0, 1.0 + 2.0 * rng.uniform(),
                                                 0.5 + rng.uniform()),
                GapPrior::geometric(p)};
    }
    }
    throw std::logic_error("unknown model kind");
}

}  // namespace cpmc::oracle
