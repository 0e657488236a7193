#include "gpi/instances.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace gpi {

namespace {

constexpr std::size_t kChainStates = 4;

TabularMDP chain(std::size_t H, std::size_t reward_site, std::size_t start) {
    if (H == 0) throw InvalidInput("chain: H must be positive");
    if (reward_site >= kChainStates) throw InvalidInput("chain: reward_site must be in {0,1,2,3}");
    const std::size_t S = kChainStates, A = 2;
    std::vector<double> rewards(H * S * A, 0.0), transitions(H * S * A * S, 0.0), initial(S, 0.0);
    for (std::size_t h = 0; h < H; ++h) {
        for (std::size_t s = 0; s < S; ++s) {
            const std::size_t down = s == 0 ? 0 : s - 1;
            const std::size_t up = std::min(s + 1, S - 1);
            for (std::size_t a = 0; a < A; ++a) {
                const std::size_t pair = (h * S + s) * A + a;
                rewards[pair] = s == reward_site ? 1.0 : 0.0;
                const std::size_t intended = a == kLeft ? down : up;
                const std::size_t reverse = a == kLeft ? up : down;
                transitions[pair * S + intended] += 0.9;
                transitions[pair * S + reverse] += 0.1;
            }
        }
    }
    initial[start] = 1.0;
    return TabularMDP(S, A, H, std::move(rewards), std::move(transitions), std::move(initial));
}

std::size_t require(const std::map<std::string, double>& params, const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end()) throw InvalidInput("instance parameter '" + key + "' is required");
    if (!(it->second >= 0.0) || it->second != std::floor(it->second))
        throw InvalidInput("instance parameter '" + key + "' must be a nonnegative integer");
    return static_cast<std::size_t>(it->second);
}

double require_real(const std::map<std::string, double>& params, const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end()) throw InvalidInput("instance parameter '" + key + "' is required");
    return it->second;
}

}  // namespace

TabularMDP single_chain(std::size_t H, std::size_t reward_site) { return chain(H, reward_site, 0); }
TabularMDP double_chain(std::size_t H, std::size_t reward_site) { return chain(H, reward_site, 1); }

TabularMDP uniform_instance(std::size_t S, std::size_t A, std::size_t H, double r, double eps) {
    if (H == 0 || H % 2 != 0) throw InvalidInput("uniform_instance: H must be even and positive");
    if (S < 3) throw InvalidInput("uniform_instance: S must be at least 3");
    if (A < 2) throw InvalidInput("uniform_instance: A must be at least 2");
    if (!(eps > 0.0 && r > 0.25 && r + eps < 0.75))
        throw InvalidInput("uniform_instance: requires 1/4 < r < r + eps < 3/4");

    const std::size_t regular = S - 2, good = S - 2, bad = S - 1;
    std::vector<double> rewards(H * S * A, 0.0), transitions(H * S * A * S, 0.0), initial(S, 0.0);
    for (std::size_t h = 0; h < H; ++h) {
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t a = 0; a < A; ++a) {
                const std::size_t pair = (h * S + s) * A + a;
                double* row = transitions.data() + pair * S;
                if (s < regular) {
                    const double up = a == 0 ? r + eps : r;
                    row[good] = up;
                    row[bad] = 1.0 - up;
                } else {
                    std::fill(row, row + regular, 1.0 / static_cast<double>(regular));
                }
                rewards[pair] = s == good ? 1.0 : 0.0;
            }
        }
    }
    std::fill(initial.begin(), initial.begin() + static_cast<std::ptrdiff_t>(regular), 1.0 / static_cast<double>(regular));
    return TabularMDP(S, A, H, std::move(rewards), std::move(transitions), std::move(initial));
}

TabularMDP tree_instance(std::size_t S, std::size_t A, std::size_t H, double r) {
    if (S < 3 || !std::has_single_bit(S - 1)) throw InvalidInput("tree_instance: S must be 2^N + 1 with N >= 1");
    const std::size_t N = static_cast<std::size_t>(std::countr_zero(S - 1));
    if (A < 3) throw InvalidInput("tree_instance: A must be at least 3");
    if (H < 1 || H - 1 < 6 * N) throw InvalidInput("tree_instance: requires H - 1 >= 6 log2(S - 1)");
    if (!(r > 0.375 && r < 0.625)) throw InvalidInput("tree_instance: requires 3/8 < r < 5/8");

    const std::size_t nodes = (std::size_t{1} << N) - 1;          // tree nodes 1..nodes
    const std::size_t internal = (std::size_t{1} << (N - 1)) - 1;  // nodes 1..internal have children
    const std::size_t good = S - 2, bad = S - 1;
    std::vector<double> rewards(H * S * A, 0.0), transitions(H * S * A * S, 0.0), initial(S, 0.0);
    for (std::size_t h = 0; h < H; ++h) {
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t a = 0; a < A; ++a) {
                const std::size_t pair = (h * S + s) * A + a;
                double* row = transitions.data() + pair * S;
                rewards[pair] = s == good ? 1.0 : 0.0;
                if (s >= nodes) {
                    row[s] = 1.0;  // absorbing
                    continue;
                }
                const std::size_t node = s + 1;
                if (node <= internal && a < 2) {
                    row[2 * node + a - 1] = 1.0;  // children 2k, 2k+1 sit at indices 2k-1, 2k
                } else {
                    row[good] = r;
                    row[bad] = 1.0 - r;
                }
            }
        }
    }
    initial[0] = 1.0;
    return TabularMDP(S, A, H, std::move(rewards), std::move(transitions), std::move(initial));
}

TabularMDP zero_reward_instance(std::size_t S, std::size_t A, std::size_t H) {
    if (S == 0) throw InvalidInput("zero_reward_instance: S must be positive");
    const double u = 1.0 / static_cast<double>(S);
    return TabularMDP(S, A, H, std::vector<double>(H * S * A, 0.0), std::vector<double>(H * S * A * S, u),
                      std::vector<double>(S, u));
}

PermutationSet::PermutationSet(std::size_t H, std::size_t S, std::size_t A, std::vector<std::size_t> table)
    : H_(H), S_(S), A_(A), table_(std::move(table)) {
    if (table_.size() != H * S * A) throw InvalidInput("PermutationSet: expected H*S*A entries");
    std::vector<char> seen(A);
    for (std::size_t hs = 0; hs < H * S; ++hs) {
        std::fill(seen.begin(), seen.end(), 0);
        for (std::size_t a = 0; a < A; ++a) {
            const std::size_t b = table_[hs * A + a];
            if (b >= A || seen[b]) throw InvalidInput("PermutationSet: entry is not a permutation");
            seen[b] = 1;
        }
    }
}

PermutationSet PermutationSet::identity(std::size_t H, std::size_t S, std::size_t A) {
    std::vector<std::size_t> table(H * S * A);
    for (std::size_t hs = 0; hs < H * S; ++hs) std::iota(table.begin() + hs * A, table.begin() + (hs + 1) * A, 0);
    return PermutationSet(H, S, A, std::move(table));
}

PermutationSet PermutationSet::random(std::size_t H, std::size_t S, std::size_t A, Rng& rng) {
    std::vector<std::size_t> table(H * S * A);
    for (std::size_t hs = 0; hs < H * S; ++hs) {
        auto first = table.begin() + static_cast<std::ptrdiff_t>(hs * A);
        auto last = first + static_cast<std::ptrdiff_t>(A);
        std::iota(first, last, 0);
        std::shuffle(first, last, rng);
    }
    return PermutationSet(H, S, A, std::move(table));
}

PermutationSet PermutationSet::inverse() const {
    std::vector<std::size_t> table(table_.size());
    for (std::size_t hs = 0; hs < H_ * S_; ++hs)
        for (std::size_t a = 0; a < A_; ++a) table[hs * A_ + table_[hs * A_ + a]] = a;
    return PermutationSet(H_, S_, A_, std::move(table));
}

Policy PermutationSet::apply(const Policy& policy) const {
    if (policy.horizon() != H_ || policy.num_states() != S_) throw InvalidInput("PermutationSet: policy dimensions differ");
    Policy out(H_, S_);
    for (std::size_t h = 0; h < H_; ++h)
        for (std::size_t s = 0; s < S_; ++s) out.at(h, s) = (*this)(h, s, policy(h, s));
    return out;
}

TabularMDP permute_instance(const TabularMDP& mdp, const PermutationSet& sigma) {
    const std::size_t S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
    if (sigma.horizon() != H || sigma.num_states() != S || sigma.num_actions() != A)
        throw InvalidInput("permute_instance: permutation dimensions differ from the MDP");
    std::vector<double> rewards(H * S * A), transitions(H * S * A * S);
    for (std::size_t h = 0; h < H; ++h) {
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t a = 0; a < A; ++a) {
                const std::size_t target = (h * S + s) * A + sigma(h, s, a);
                rewards[target] = mdp.reward(h, s, a);
                const auto row = mdp.transition(h, s, a);
                std::copy(row.begin(), row.end(), transitions.begin() + static_cast<std::ptrdiff_t>(target * S));
            }
        }
    }
    return TabularMDP(S, A, H, std::move(rewards), std::move(transitions),
                      std::vector<double>(mdp.initial().begin(), mdp.initial().end()));
}

std::vector<std::string> instance_families() {
    return {"single_chain", "double_chain", "uniform", "tree", "zero_reward"};
}

TabularMDP build_instance(const std::string& family, const std::map<std::string, double>& params) {
    auto site = [&] { return params.contains("reward_site") ? require(params, "reward_site") : std::size_t{3}; };
    if (family == "single_chain") return single_chain(require(params, "H"), site());
    if (family == "double_chain") return double_chain(require(params, "H"), site());
    if (family == "uniform")
        return uniform_instance(require(params, "S"), require(params, "A"), require(params, "H"),
                                require_real(params, "r"), require_real(params, "eps"));
    if (family == "tree")
        return tree_instance(require(params, "S"), require(params, "A"), require(params, "H"), require_real(params, "r"));
    if (family == "zero_reward") return zero_reward_instance(require(params, "S"), require(params, "A"), require(params, "H"));
    throw InvalidInput("unknown instance family '" + family + "'");
}

}  // namespace gpi
