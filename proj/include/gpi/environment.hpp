#pragma once

#include <cstddef>
#include <vector>

#include "gpi/mdp.hpp"

namespace gpi {

/// The part of an instance the learner is told: dimensions and rewards.
struct KnownModel {
    std::size_t S = 0, A = 0, H = 0;
    std::vector<double> rewards;  // [h][s][a]

    double reward(std::size_t h, std::size_t s, std::size_t a) const { return rewards[(h * S + s) * A + a]; }

    static KnownModel of(const TabularMDP& mdp) {
        return {mdp.num_states(), mdp.num_actions(), mdp.horizon(), mdp.rewards()};
    }
};

/**
 * Simulator handed to learning algorithms. Exposes rewards and dimensions;
 * the transition kernels and initial distribution stay private and are
 * reachable only through sample().
 */
class Environment {
public:
    explicit Environment(TabularMDP mdp) : mdp_(std::move(mdp)), known_(KnownModel::of(mdp_)) {}

    const KnownModel& known() const noexcept { return known_; }

    Trajectory sample(const Policy& policy, Rng& rng) const { return sample_episode(mdp_, policy, rng); }

private:
    TabularMDP mdp_;
    KnownModel known_;
};

}  // namespace gpi
