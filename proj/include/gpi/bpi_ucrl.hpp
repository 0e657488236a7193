#pragma once

#include <cstdint>

#include "gpi/environment.hpp"
#include "gpi/mdp.hpp"

namespace gpi {

struct BpiOutcome {
    bool aborted = false;  // episode_cap reached before the stopping rule fired
    Policy policy;         // greedy optimistic policy of the last planning pass
    std::uint64_t tau = 0;
    double v_bar_root = 0.0;
    double v_under_root = 0.0;
};

/**
 * Epsilon-optimal best-policy identification baseline. Samples the greedy
 * optimistic policy at a fixed delta and stops once
 * V_bar_0 - V_under_0^{pi_bar} <= epsilon, returning pi_bar. This stopping
 * form is a reconstruction: the width test on the same KL confidence sets the
 * good-policy algorithm uses.
 */
BpiOutcome run_bpi_ucrl(const Environment& env, double epsilon, double delta, Rng& rng, std::uint64_t episode_cap);

}  // namespace gpi
