#ifndef CPMC_CARPENTER_HPP
#define CPMC_CARPENTER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "cpmc/rng.hpp"

namespace cpmc {

// Draw n_draws categories from an (unnormalized) log-probability vector in a
// single O(M + n_draws) pass. Sorted uniforms are generated directly from
// exponential spacings and walked against the cumulative distribution, so no
// per-draw search is needed. Output categories come back in nondecreasing
// order (the sorted-uniform order); callers that need exchangeable draws
// permute the assignment.
std::vector<std::int32_t> carpenter_sample(std::span<const double> log_probs,
                                           std::size_t n_draws, Rng& rng);

}  // namespace cpmc

#endif
