#pragma once

#include <cstddef>
#include <vector>

#include "gpi/environment.hpp"
#include "gpi/history.hpp"
#include "gpi/mdp.hpp"

namespace gpi {

/// Optimistic tables for one history snapshot, plus the pessimistic
/// evaluation of the optimistic greedy policy.
struct PlanningResult {
    std::size_t S = 0, A = 0, H = 0;
    std::vector<double> q_bar;       // [h][s][a]
    std::vector<double> v_bar;       // [h][s]
    double v_bar_root = 0.0;
    Policy pi_bar;
    std::vector<double> v_under_pi;  // [h][s]
    double v_under_root = 0.0;

    double width() const { return v_bar_root - v_under_root; }
};

/**
 * Backward induction over KL confidence balls of radius beta_p(n, delta) / n
 * around the empirical kernels. Unvisited pairs use an unbounded radius, so
 * their optimistic backup is r + max V and their pessimistic one r + min V.
 * Only rewards and counts are read; true kernels never enter.
 */
PlanningResult plan_optimistic(const ExplorationHistory& history, const KnownModel& known, double delta);

/// Pessimistic optimal family: max over actions of the KL-minimizing backup.
/// Diagnostic only; the identification algorithms never consume it.
struct PessimisticPlan {
    std::vector<double> q_under;  // [h][s][a]
    std::vector<double> v_under;  // [h][s]
    Policy pi_under;
    double v_under_root = 0.0;
};

PessimisticPlan plan_pessimistic_optimal(const ExplorationHistory& history, const KnownModel& known, double delta);

/// Positive stop: V_under - (C - 1)(V_bar - V_under) > mu0. Requires C > 1.
bool stop_positive(const PlanningResult& result, double C, double mu0);

/// Negative stop: V_bar < mu0 (strict).
bool stop_negative(const PlanningResult& result, double mu0);

}  // namespace gpi
