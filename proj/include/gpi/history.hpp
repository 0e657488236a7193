#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gpi/mdp.hpp"

namespace gpi {

/**
 * Visit and transition counts accumulated over every exploration episode.
 *
 * One instance persists across all phases of a run. The fictitious round 0
 * is a single (state, action) slot whose visit count is t and whose
 * transition counts are the observed initial states.
 */
class ExplorationHistory {
public:
    ExplorationHistory(std::size_t S, std::size_t A, std::size_t H);

    std::size_t num_states() const noexcept { return S_; }
    std::size_t num_actions() const noexcept { return A_; }
    std::size_t horizon() const noexcept { return H_; }

    /// Number of recorded episodes.
    std::uint64_t episodes() const noexcept { return t_; }

    std::uint64_t count(std::size_t h, std::size_t s, std::size_t a) const {
        return counts_[(h * S_ + s) * A_ + a];
    }
    std::uint64_t transition_count(std::size_t h, std::size_t s, std::size_t a, std::size_t next) const {
        return transition_counts_[((h * S_ + s) * A_ + a) * S_ + next];
    }
    std::uint64_t initial_count(std::size_t s) const { return initial_counts_[s]; }

    void record(const Trajectory& traj);

    /// Writes p_hat_h(.|s,a) into `out` (uniform when the pair is unvisited).
    void empirical_row(std::size_t h, std::size_t s, std::size_t a, std::span<double> out) const;
    /// Empirical initial-state frequencies (uniform when t = 0).
    void empirical_initial(std::span<double> out) const;

    /// Throws std::logic_error if a counting invariant is broken.
    void check_invariants() const;

    friend bool operator==(const ExplorationHistory&, const ExplorationHistory&) = default;

private:
    std::size_t S_, A_, H_;
    std::uint64_t t_ = 0;
    std::vector<std::uint64_t> counts_;             // [h][s][a]
    std::vector<std::uint64_t> transition_counts_;  // [h][s][a][s']
    std::vector<std::uint64_t> initial_counts_;     // [s]
};

ExplorationHistory update_history(ExplorationHistory history, const Trajectory& traj);

struct EmpiricalKernel {
    std::size_t S = 0, A = 0, H = 0;
    std::vector<double> rows;     // [h][s][a][s']
    std::vector<double> initial;  // [s]

    std::span<const double> row(std::size_t h, std::size_t s, std::size_t a) const {
        return {rows.data() + ((h * S + s) * A + a) * S, S};
    }
};

EmpiricalKernel empirical_kernel(const ExplorationHistory& history);

}  // namespace gpi
