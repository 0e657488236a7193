#pragma once

#include <vector>

#include "gpi/mdp.hpp"

namespace gpi::test {

// Deterministic MDP on S states: action a moves to state (s + a) mod S,
// reward 1 only for action 1 at state S-1 (any round). Starts at state 0.
inline TabularMDP deterministic_mdp(std::size_t S, std::size_t A, std::size_t H, double reward = 1.0) {
    std::vector<double> rewards(H * S * A, 0.0), kernels(H * S * A * S, 0.0), initial(S, 0.0);
    for (std::size_t h = 0; h < H; ++h)
        for (std::size_t s = 0; s < S; ++s)
            for (std::size_t a = 0; a < A; ++a) {
                const std::size_t row = (h * S + s) * A + a;
                kernels[row * S + (s + a) % S] = 1.0;
                if (s == S - 1 && a == 1) rewards[row] = reward;
            }
    initial[0] = 1.0;
    return TabularMDP(S, A, H, rewards, kernels, initial);
}

inline TabularMDP random_mdp(std::size_t S, std::size_t A, std::size_t H, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto simplex = [&] {
        std::vector<double> p(S);
        double total = 0.0;
        for (auto& x : p) total += x = unit(rng) + 1e-3;
        for (auto& x : p) x /= total;
        return p;
    };
    std::vector<double> rewards(H * S * A), kernels;
    for (auto& r : rewards) r = unit(rng);
    for (std::size_t row = 0; row < H * S * A; ++row) {
        const auto p = simplex();
        kernels.insert(kernels.end(), p.begin(), p.end());
    }
    return TabularMDP(S, A, H, rewards, kernels, simplex());
}

}  // namespace gpi::test
