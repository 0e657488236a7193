#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpi/environment.hpp"
#include "gpi/history.hpp"
#include "gpi/mdp.hpp"
#include "gpi/planner.hpp"

namespace gpi {

/// Geometric phase schedule: eps_k = 2^-k, delta_k = 3^-k, alpha_k = 5^k.
struct PhaseSchedule {
    double C = 1.01;

    double eps(int k) const;
    double delta(int k) const;
    /// log alpha_k = k log 5. alpha_k itself overflows double precision long
    /// before it matters and is only ever used inside a logarithm.
    double log_alpha(int k) const;
};

/// Cumulative exploration cap T_k^ee, rounded down: t <= budget iff t <= T_k^ee.
std::uint64_t exploration_budget(int k, std::size_t S, std::size_t A, std::size_t H, const PhaseSchedule& schedule = {});

/// Exploitation cap T_k^et, rounded down. The stage draws at most budget - 1 episodes,
/// which for integer N is the same as N <= T_k^et - 1.
std::uint64_t exploitation_budget(int k, std::size_t H, double delta, const PhaseSchedule& schedule = {});

/// Anytime lower confidence bound on a policy value from N episode totals
/// with the given mean. `variance_factor` multiplies the H^2 term (1 or 4).
double exploitation_lcb(double mean, std::uint64_t N, std::size_t H, int k, double delta,
                        const PhaseSchedule& schedule = {}, double variance_factor = 1.0);

enum class OracleVerdict { PolicyFound, NoneFound, NotCompleted };
std::string to_string(OracleVerdict v);

struct OracleOutput {
    OracleVerdict verdict = OracleVerdict::NotCompleted;
    std::optional<Policy> policy;  // set iff verdict == PolicyFound
    std::uint64_t episodes_used = 0;
    double final_v_bar_root = 0.0;
    double final_v_under_root = 0.0;
};

/**
 * Early-stopping optimistic exploration at confidence delta_k.
 *
 * Before every episode (including on entry with the inherited history) the
 * tables are recomputed; the positive stop is tested first, then the
 * negative stop, then the budget (t >= budget). Otherwise one episode of
 * the greedy optimistic policy is drawn and recorded into `history`.
 */
OracleOutput es_bpi_ucrl(const Environment& env, ExplorationHistory& history, int k, const PhaseSchedule& schedule,
                         double mu0, std::uint64_t budget, Rng& rng);

struct ExploitationResult {
    bool accepted = false;
    std::uint64_t N = 0;
    std::vector<double> rewards;
    double lcb = 0.0;  // bound at the last N
};

/// Fresh Monte-Carlo verification of a candidate policy. Stops at the first N
/// whose lower bound clears mu0, or once N reaches exploitation_budget - 1.
ExploitationResult exploitation_stage(const Environment& env, const Policy& candidate, int k,
                                      const PhaseSchedule& schedule, double delta, double mu0, Rng& rng,
                                      double variance_factor = 1.0);

enum class GpiVerdict { Qualified, DeclaredNegative, Aborted };
std::string to_string(GpiVerdict v);

struct PhaseLog {
    int k = 0;
    OracleVerdict oracle = OracleVerdict::NotCompleted;
    std::uint64_t exploration_episodes = 0;     // drawn in this phase
    std::uint64_t cumulative_exploration = 0;   // history size at phase end
    std::uint64_t exploration_budget = 0;
    std::uint64_t exploitation_episodes = 0;    // N
    std::uint64_t exploitation_budget = 0;
    bool accepted = false;
    double v_bar_root = 0.0;
    double v_under_root = 0.0;
};

struct GpiOutcome {
    GpiVerdict verdict = GpiVerdict::Aborted;
    std::optional<Policy> policy;  // set iff Qualified
    std::uint64_t tau = 0;
    std::vector<PhaseLog> phases;
};

struct GpiOptions {
    PhaseSchedule schedule;
    int phase_cap = 40;
    double lcb_variance_factor = 1.0;
};

/**
 * Phased good-policy identification. One exploration history is shared by
 * all phases; exploitation episodes come from a separate stream seeded by
 * the first draw of `rng` and never enter the history.
 */
GpiOutcome run_bee_gpi(const Environment& env, double mu0, double delta, Rng& rng, const GpiOptions& options = {});

}  // namespace gpi
