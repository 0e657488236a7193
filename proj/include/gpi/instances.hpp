#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "gpi/mdp.hpp"

namespace gpi {

// Chain actions.
inline constexpr std::size_t kLeft = 0;
inline constexpr std::size_t kRight = 1;

/// Four-state chain, intended move w.p. 0.9 and reverse move w.p. 0.1, both
/// clamped to {0..3}. Starts at state 0. Reward 1 at `reward_site`.
TabularMDP single_chain(std::size_t H, std::size_t reward_site = 3);

/// Same kernel as single_chain, starting at state 1.
TabularMDP double_chain(std::size_t H, std::size_t reward_site = 3);

/**
 * Uniform instance. States 0..S-3 are regular, S-2 is s_good (reward 1) and
 * S-1 is s_bad. From a regular state action 0 reaches s_good w.p. r + eps and
 * every other action w.p. r; s_good and s_bad lead uniformly back to the
 * regular states. Optimal value H (r + eps) / 2.
 *
 * Requires H even, S >= 3, A >= 2, eps > 0 and 1/4 < r < r + eps < 3/4.
 */
TabularMDP uniform_instance(std::size_t S, std::size_t A, std::size_t H, double r, double eps);

/**
 * Binary-tree instance with S = 2^N + 1. Tree node k (1-based) is state k-1;
 * s_good = S-2, s_bad = S-1, both absorbing. Actions 0/1 descend to the left
 * and right child; actions >= 2 at internal nodes, and every action at a
 * leaf, jump to s_good w.p. r. Starts at the root. Optimal value (H-1) r.
 *
 * Requires N >= 1, A >= 3, H - 1 >= 6N and 3/8 < r < 5/8.
 */
TabularMDP tree_instance(std::size_t S, std::size_t A, std::size_t H, double r);

/// All rewards zero, uniform kernels and initial distribution.
TabularMDP zero_reward_instance(std::size_t S, std::size_t A, std::size_t H);

/// One action bijection per (round, state).
class PermutationSet {
public:
    PermutationSet(std::size_t H, std::size_t S, std::size_t A, std::vector<std::size_t> table);

    static PermutationSet identity(std::size_t H, std::size_t S, std::size_t A);
    static PermutationSet random(std::size_t H, std::size_t S, std::size_t A, Rng& rng);

    std::size_t operator()(std::size_t h, std::size_t s, std::size_t a) const { return table_[(h * S_ + s) * A_ + a]; }

    PermutationSet inverse() const;
    /// (sigma o pi)_h(s) = sigma_{s,h}(pi_h(s)).
    Policy apply(const Policy& policy) const;

    std::size_t horizon() const noexcept { return H_; }
    std::size_t num_states() const noexcept { return S_; }
    std::size_t num_actions() const noexcept { return A_; }

private:
    std::size_t H_, S_, A_;
    std::vector<std::size_t> table_;  // [h][s][a]
};

/// Relabels actions: reward and kernel of (s, sigma(a)) in the result equal those of (s, a).
TabularMDP permute_instance(const TabularMDP& mdp, const PermutationSet& sigma);

/// Names accepted by build_instance.
std::vector<std::string> instance_families();

/**
 * Builds a family by name from numeric parameters:
 *   single_chain / double_chain: H, reward_site (default 3)
 *   uniform: S, A, H, r, eps
 *   tree: S, A, H, r
 *   zero_reward: S, A, H
 * Throws InvalidInput for unknown names or missing parameters.
 */
TabularMDP build_instance(const std::string& family, const std::map<std::string, double>& params);

}  // namespace gpi
