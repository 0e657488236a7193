#include "gpi/history.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gpi {

ExplorationHistory::ExplorationHistory(std::size_t S, std::size_t A, std::size_t H)
    : S_(S), A_(A), H_(H), counts_(H * S * A, 0), transition_counts_(H * S * A * S, 0), initial_counts_(S, 0) {
    if (S == 0 || A == 0 || H == 0) throw InvalidInput("ExplorationHistory: S, A and H must be positive");
}

void ExplorationHistory::record(const Trajectory& traj) {
    if (traj.states.size() != H_ || traj.actions.size() != H_ || traj.next_states.size() != H_)
        throw InvalidInput("ExplorationHistory: trajectory length does not match the horizon");
    for (std::size_t h = 0; h < H_; ++h) {
        if (traj.states[h] >= S_ || traj.next_states[h] >= S_ || traj.actions[h] >= A_)
            throw InvalidInput("ExplorationHistory: trajectory index out of range");
    }
    ++t_;
    ++initial_counts_[traj.states[0]];
    for (std::size_t h = 0; h < H_; ++h) {
        const std::size_t pair = (h * S_ + traj.states[h]) * A_ + traj.actions[h];
        ++counts_[pair];
        ++transition_counts_[pair * S_ + traj.next_states[h]];
    }
}

void ExplorationHistory::empirical_row(std::size_t h, std::size_t s, std::size_t a, std::span<double> out) const {
    const std::size_t pair = (h * S_ + s) * A_ + a;
    const std::uint64_t n = counts_[pair];
    if (n == 0) {
        std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(S_));
        return;
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t s2 = 0; s2 < S_; ++s2)
        out[s2] = static_cast<double>(transition_counts_[pair * S_ + s2]) * inv;
}

void ExplorationHistory::empirical_initial(std::span<double> out) const {
    if (t_ == 0) {
        std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(S_));
        return;
    }
    const double inv = 1.0 / static_cast<double>(t_);
    for (std::size_t s = 0; s < S_; ++s) out[s] = static_cast<double>(initial_counts_[s]) * inv;
}

void ExplorationHistory::check_invariants() const {
    if (std::accumulate(initial_counts_.begin(), initial_counts_.end(), std::uint64_t{0}) != t_)
        throw std::logic_error("history: initial counts do not sum to t");
    for (std::size_t h = 0; h < H_; ++h) {
        std::uint64_t round_total = 0;
        for (std::size_t sa = 0; sa < S_ * A_; ++sa) {
            const std::size_t pair = h * S_ * A_ + sa;
            const auto begin = transition_counts_.begin() + static_cast<std::ptrdiff_t>(pair * S_);
            if (std::accumulate(begin, begin + static_cast<std::ptrdiff_t>(S_), std::uint64_t{0}) != counts_[pair])
                throw std::logic_error("history: transition counts do not sum to the visit count");
            round_total += counts_[pair];
        }
        if (round_total != t_) throw std::logic_error("history: visit counts in a round do not sum to t");
    }
}

ExplorationHistory update_history(ExplorationHistory history, const Trajectory& traj) {
    history.record(traj);
    return history;
}

EmpiricalKernel empirical_kernel(const ExplorationHistory& history) {
    EmpiricalKernel k;
    k.S = history.num_states();
    k.A = history.num_actions();
    k.H = history.horizon();
    k.rows.assign(k.H * k.S * k.A * k.S, 0.0);
    k.initial.assign(k.S, 0.0);
    for (std::size_t h = 0; h < k.H; ++h)
        for (std::size_t s = 0; s < k.S; ++s)
            for (std::size_t a = 0; a < k.A; ++a)
                history.empirical_row(h, s, a, {k.rows.data() + ((h * k.S + s) * k.A + a) * k.S, k.S});
    history.empirical_initial(k.initial);
    return k;
}

}  // namespace gpi
