#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "gpi/mdp.hpp"

// Brute-force reference computations. Nothing here calls the dual solver or
// the Bellman optimizer; they exist to check those routines independently.
namespace gpi::oracle {

/**
 * Reference optimum of max q.v s.t. KL(p || q) <= eps over the simplex, for
 * S in {2, 3}. For S = 3 the first coordinate is gridded at `resolution`
 * together with the exact ends of its feasible range, and the best cell is
 * refined by ternary search (the slice maximum is concave in q_0). On each
 * slice the objective is linear and KL is convex, so the feasible segment
 * ends are located by bisection and the better end is kept.
 */
double kl_ball_max(std::span<const double> p, std::span<const double> v, double eps, double resolution = 1e-3);

/// Plain grid search over q_1 in [0,1] for S = 2.
double kl_ball_max_grid2(std::span<const double> p, std::span<const double> v, double eps, double resolution);

/// Max over every deterministic policy of evaluate_policy. Throws if A^(S*H) exceeds `limit`.
double exhaustive_optimal_value(const TabularMDP& mdp, std::uint64_t limit = 1u << 20);

struct MonteCarloEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
};

MonteCarloEstimate monte_carlo_value(const TabularMDP& mdp, const Policy& policy, std::size_t episodes, Rng& rng);

}  // namespace gpi::oracle
