#ifndef CPMC_NUMERICS_HPP
#define CPMC_NUMERICS_HPP

#include <cmath>
#include <limits>
#include <span>

namespace cpmc {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

// log(e^a + e^b), tolerating -inf on either side.
inline double log_add_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = a > b ? a : b;
    const double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

// Max-shifted accumulation over a complete term vector. Sequentially folding
// log_add_exp over many small terms loses the mass of terms far below the
// running maximum; shifting by the overall maximum first keeps them.
inline double log_sum_exp(std::span<const double> terms) {
    double hi = kNegInf;
    for (double t : terms) {
        if (t > hi) hi = t;
    }
    if (hi == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - hi);
    return hi + std::log(acc);
}

}  // namespace cpmc

#endif
