#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpi {

/// Random stream owned by one trial. Never shared across threads.
using Rng = std::mt19937_64;

/// Raised when an input violates a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Finite-horizon episodic MDP with deterministic rewards.
 *
 * Rounds are 0-based in storage: round index h in [0, H) corresponds to the
 * decision round h+1. States and actions are dense 0-based indices. The
 * initial distribution plays the role of the transition out of the
 * fictitious round 0.
 *
 * Immutable after construction; the constructor validates every invariant.
 */
class TabularMDP {
public:
    TabularMDP(std::size_t S, std::size_t A, std::size_t H,
               std::vector<double> rewards,      // [h][s][a]
               std::vector<double> transitions,  // [h][s][a][s']
               std::vector<double> initial);     // [s]

    std::size_t num_states() const noexcept { return S_; }
    std::size_t num_actions() const noexcept { return A_; }
    std::size_t horizon() const noexcept { return H_; }

    double reward(std::size_t h, std::size_t s, std::size_t a) const {
        return rewards_[(h * S_ + s) * A_ + a];
    }
    std::span<const double> transition(std::size_t h, std::size_t s, std::size_t a) const {
        return {transitions_.data() + ((h * S_ + s) * A_ + a) * S_, S_};
    }
    std::span<const double> initial() const noexcept { return initial_; }

    const std::vector<double>& rewards() const noexcept { return rewards_; }
    const std::vector<double>& transitions() const noexcept { return transitions_; }

    friend bool operator==(const TabularMDP&, const TabularMDP&) = default;

private:
    std::size_t S_, A_, H_;
    std::vector<double> rewards_;
    std::vector<double> transitions_;
    std::vector<double> initial_;
};

/// Deterministic time-indexed policy: one action per (round, state).
class Policy {
public:
    Policy() = default;
    Policy(std::size_t H, std::size_t S, std::size_t fill = 0)
        : H_(H), S_(S), actions_(H * S, fill) {}
    Policy(std::size_t H, std::size_t S, std::vector<std::size_t> actions);

    std::size_t horizon() const noexcept { return H_; }
    std::size_t num_states() const noexcept { return S_; }

    std::size_t operator()(std::size_t h, std::size_t s) const { return actions_[h * S_ + s]; }
    std::size_t& at(std::size_t h, std::size_t s) { return actions_[h * S_ + s]; }

    const std::vector<std::size_t>& actions() const noexcept { return actions_; }

    /// Throws InvalidInput unless the policy fits the MDP's dimensions.
    void check_compatible(const TabularMDP& mdp) const;

    friend bool operator==(const Policy&, const Policy&) = default;

private:
    std::size_t H_ = 0, S_ = 0;
    std::vector<std::size_t> actions_;
};

struct Trajectory {
    std::vector<std::size_t> states;   // S_1 .. S_H
    std::vector<std::size_t> actions;  // A_1 .. A_H
    std::vector<std::size_t> next_states;  // S_2 .. S_{H+1}; the last one is never used for learning
    double total_reward = 0.0;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Threshold problem: decide whether some policy has value at least mu0.
struct RewardThresholdProblem {
    RewardThresholdProblem(TabularMDP mdp, double mu0, double delta);

    TabularMDP mdp;
    double mu0;
    double delta;
};

/// Per-round values of a fixed policy, plus the round-0 value.
struct PolicyValues {
    std::vector<double> values;  // [h][s], H rounds
    double root = 0.0;
};

/// Exact backward-induction evaluation of a policy. Returns V_0^pi.
double evaluate_policy(const TabularMDP& mdp, const Policy& policy);
PolicyValues evaluate_policy_table(const TabularMDP& mdp, const Policy& policy);

struct OptimalSolution {
    double value = 0.0;
    Policy policy;
    std::vector<double> values;  // [h][s]
};

/// Bellman optimality by backward induction. Ties break toward the lowest action.
OptimalSolution optimal_value_and_policy(const TabularMDP& mdp);

/// Draws one episode of `policy`. Consumes exactly H+1 uniforms from `rng`.
Trajectory sample_episode(const TabularMDP& mdp, const Policy& policy, Rng& rng);

/// Inverse-CDF draw from a probability vector.
std::size_t sample_categorical(std::span<const double> probs, Rng& rng);

// JSON serialization: {S, A, H, rewards[h][s][a], transitions[h][s][a][s'], initial[s]}.
std::string mdp_to_json(const TabularMDP& mdp);
TabularMDP mdp_from_json(const std::string& text);
void save_mdp(const TabularMDP& mdp, const std::string& path);
TabularMDP load_mdp(const std::string& path);

}  // namespace gpi
