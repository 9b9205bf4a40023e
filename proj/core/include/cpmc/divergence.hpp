#ifndef CPMC_DIVERGENCE_HPP
#define CPMC_DIVERGENCE_HPP

#include <span>

namespace cpmc {

// delta-smoothed Kullback-Leibler divergence between two distributions on a
// common support of size n:
//   D_delta(P | Q) = sum_i p~_i log(p~_i / q~_i),  p~_i = (1-delta) P_i + delta/n.
// The smoothing guarantees overlapping support for any delta > 0; delta = 0
// is plain KL. Non-negative by Gibbs' inequality since both smoothed vectors
// remain distributions.
double divergence(std::span<const double> p, std::span<const double> q, double delta);

}  // namespace cpmc

#endif
