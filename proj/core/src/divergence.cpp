#include "cpmc/divergence.hpp"

#include <cmath>
#include <limits>

#include "cpmc/errors.hpp"

namespace cpmc {

double divergence(std::span<const double> p, std::span<const double> q, double delta) {
    if (p.size() != q.size())
        throw StateError("divergence requires distributions of equal length");
    if (p.empty()) throw StateError("divergence requires a non-empty support");
    if (!(delta >= 0.0) || !(delta < 1.0))
        throw ConfigError("divergence smoothing requires 0 <= delta < 1");

    const double floor = delta / static_cast<double>(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pi = (1.0 - delta) * p[i] + floor;
        const double qi = (1.0 - delta) * q[i] + floor;
        if (pi == 0.0) continue;  // 0 * log(0/q) = 0
        if (qi == 0.0) return std::numeric_limits<double>::infinity();
        acc += pi * std::log(pi / qi);
    }
    return acc;
}

}  // namespace cpmc
