#include "cpmc/alias_table.hpp"

#include <cmath>
#include <string>

#include "cpmc/errors.hpp"

namespace cpmc {

void AliasTable::build(std::span<const double> weights) {
    const std::size_t m = weights.size();
    if (m == 0) throw DataError("alias table requires at least one weight");

    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
            throw DataError("alias table weight " + std::to_string(i) +
                            " is not a positive finite real");
        total += weights[i];
    }

    prob_.resize(m);
    alias_.resize(m);

    // Scaled weights; >= 1 means the category overflows the uniform slot share.
    std::vector<double> scaled(m);
    std::vector<std::int32_t> small, large;
    small.reserve(m);
    large.reserve(m);
    const double scale = static_cast<double>(m) / total;
    for (std::size_t i = 0; i < m; ++i) {
        scaled[i] = weights[i] * scale;
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::int32_t>(i));
    }

    while (!small.empty() && !large.empty()) {
        const std::int32_t s = small.back();
        const std::int32_t l = large.back();
        small.pop_back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        // Donate the mass that tops s up to a full slot.
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    // Leftovers on either list are full slots up to rounding.
    for (std::int32_t i : large) {
        prob_[i] = 1.0;
        alias_[i] = i;
    }
    for (std::int32_t i : small) {
        prob_[i] = 1.0;
        alias_[i] = i;
    }
}

std::vector<double> AliasTable::category_probs() const {
    const double share = 1.0 / static_cast<double>(prob_.size());
    std::vector<double> out(prob_.size(), 0.0);
    for (std::size_t slot = 0; slot < prob_.size(); ++slot) {
        out[slot] += share * prob_[slot];
        out[alias_[slot]] += share * (1.0 - prob_[slot]);
    }
    return out;
}

}  // namespace cpmc
