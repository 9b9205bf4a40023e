#ifndef CPMC_ALIAS_TABLE_HPP
#define CPMC_ALIAS_TABLE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "cpmc/rng.hpp"

namespace cpmc {

// Walker alias table built with Vose's two-worklist construction: O(size)
// build, O(1) per draw. Each slot holds a coin probability and an alias;
// a draw picks a slot uniformly and flips the coin between the slot and its
// alias. Any weight change requires a rebuild.
class AliasTable {
public:
    AliasTable() = default;
    explicit AliasTable(std::span<const double> weights) { build(weights); }

    void build(std::span<const double> weights);

    int sample(Rng& rng) const {
        const int slot = static_cast<int>(rng.uniform_int(prob_.size()));
        return rng.uniform() < prob_[slot] ? slot : alias_[slot];
    }

    std::size_t size() const { return prob_.size(); }
    bool empty() const { return prob_.empty(); }

    // Per-category probability implied by the table (slot coin mass plus mass
    // aliased in from other slots); construction-exactness checks compare this
    // against the normalized input weights.
    std::vector<double> category_probs() const;

private:
    std::vector<double> prob_;
    std::vector<std::int32_t> alias_;
};

}  // namespace cpmc

#endif
