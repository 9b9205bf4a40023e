#include "cpmc/carpenter.hpp"

#include <cmath>

#include "cpmc/errors.hpp"
#include "cpmc/numerics.hpp"

namespace cpmc {

std::vector<std::int32_t> carpenter_sample(std::span<const double> log_probs,
                                           std::size_t n_draws, Rng& rng) {
    const std::size_t m = log_probs.size();
    if (m == 0) throw DataError("carpenter_sample: empty distribution");
    if (n_draws == 0) throw DataError("carpenter_sample: need at least one draw");

    // Normalize with a single max-shifted pass over the complete vector before
    // any probability is exponentiated.
    const double lse = log_sum_exp(log_probs);
    if (lse == kNegInf)
        throw DataError("carpenter_sample: all categories have zero probability");

    // Sorted uniforms from exponential spacings: u_j = cum_j / cum_{n+1}.
    std::vector<double> cum(n_draws + 1);
    double acc = 0.0;
    for (std::size_t j = 0; j <= n_draws; ++j) {
        acc += rng.exponential();
        cum[j] = acc;
    }
    const double denom = cum[n_draws];

    std::vector<std::int32_t> out;
    out.reserve(n_draws);
    std::size_t cat = 0;
    double cdf = std::exp(log_probs[0] - lse);
    for (std::size_t j = 0; j < n_draws; ++j) {
        const double u = cum[j] / denom;
        while (u >= cdf && cat + 1 < m) {
            ++cat;
            cdf += std::exp(log_probs[cat] - lse);
        }
        out.push_back(static_cast<std::int32_t>(cat));
    }
    return out;
}

}  // namespace cpmc
