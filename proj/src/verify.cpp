#include "gpi/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "gpi/instances.hpp"
#include "gpi/kl.hpp"
#include "gpi/mdp.hpp"
#include "gpi/oracles.hpp"

namespace gpi {

namespace {

using KlMax = std::function<double(std::span<const double>, std::span<const double>, double)>;

std::vector<double> random_simplex(std::size_t S, Rng& rng) {
    std::exponential_distribution<double> e(1.0);
    std::bernoulli_distribution drop(0.2);
    std::vector<double> p(S);
    double total = 0.0;
    for (auto& x : p) total += x = drop(rng) ? 0.0 : e(rng);
    if (total == 0.0) {
        p[0] = 1.0;
        return p;
    }
    for (auto& x : p) x /= total;
    return p;
}

std::string check_kl_oracle(const KlMax& kl_max) {
    Rng rng(20240611);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const std::size_t S = i % 2 == 0 ? 2 : 3;
        const auto p = random_simplex(S, rng);
        std::vector<double> v(S);
        for (auto& x : v) x = unit(rng);
        const double eps = std::exp(std::log(1e-3) + unit(rng) * (std::log(2.0) - std::log(1e-3)));
        const double err = std::abs(kl_max(p, v, eps) - oracle::kl_ball_max(p, v, eps, 1e-3));
        worst = std::max(worst, err);
    }
    if (worst > 1e-4) throw std::runtime_error("max deviation " + std::to_string(worst));
    return "200 triples, max deviation " + std::to_string(worst);
}

std::string check_kl_negation() {
    Rng rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const std::size_t S = 2 + i % 5;
        const auto p = random_simplex(S, rng);
        std::vector<double> v(S), neg(S);
        for (std::size_t s = 0; s < S; ++s) neg[s] = -(v[s] = unit(rng));
        const double eps = std::abs(unit(rng));
        if (kl_min_value(p, v, eps) != -kl_max_value(p, neg, eps))
            throw std::runtime_error("kl_min differs from -kl_max(-v)");
    }
    return "500 draws exact";
}

std::string check_dp_exhaustive() {
    Rng rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int cases = 0;
    for (std::size_t S : {2u, 3u})
        for (std::size_t A : {2u, 3u})
            for (std::size_t H : {1u, 2u, 3u}) {
                if (S * H > 9) continue;
                std::vector<double> rewards(H * S * A), kernels(H * S * A * S);
                for (auto& r : rewards) r = unit(rng);
                for (std::size_t row = 0; row < H * S * A; ++row) {
                    const auto q = random_simplex(S, rng);
                    std::copy(q.begin(), q.end(), kernels.begin() + static_cast<std::ptrdiff_t>(row * S));
                }
                const TabularMDP mdp(S, A, H, rewards, kernels, random_simplex(S, rng));
                const double dp = optimal_value_and_policy(mdp).value;
                const double brute = oracle::exhaustive_optimal_value(mdp);
                if (std::abs(dp - brute) > 1e-10)
                    throw std::runtime_error("DP " + std::to_string(dp) + " vs enumeration " + std::to_string(brute));
                ++cases;
            }
    return std::to_string(cases) + " random MDPs";
}

std::string check_uniform() {
    int cases = 0;
    for (std::size_t S : {3u, 5u, 8u})
        for (std::size_t A : {2u, 4u})
            for (std::size_t H : {2u, 8u})
                for (double r : {0.3, 0.5}) {
                    const double eps = 0.1;
                    const double got = optimal_value_and_policy(uniform_instance(S, A, H, r, eps)).value;
                    const double want = static_cast<double>(H) * (r + eps) / 2.0;
                    if (std::abs(got - want) > 1e-10) throw std::runtime_error("uniform mismatch");
                    ++cases;
                }
    return std::to_string(cases) + " parameter combinations";
}

std::string check_tree() {
    int cases = 0;
    for (std::size_t N : {1u, 2u, 3u})
        for (std::size_t A : {3u, 5u})
            for (std::size_t extra : {0u, 3u})
                for (double r : {0.4, 0.6}) {
                    const std::size_t S = (std::size_t{1} << N) + 1, H = 6 * N + 1 + extra;
                    const double got = optimal_value_and_policy(tree_instance(S, A, H, r)).value;
                    const double want = static_cast<double>(H - 1) * r;
                    if (std::abs(got - want) > 1e-10) throw std::runtime_error("tree mismatch");
                    ++cases;
                }
    return std::to_string(cases) + " parameter combinations";
}

std::string check_mc_vs_dp() {
    const auto mdp = single_chain(8);
    const auto opt = optimal_value_and_policy(mdp);
    std::ostringstream detail;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Rng rng(seed);
        const auto mc = oracle::monte_carlo_value(mdp, opt.policy, 100000, rng);
        const double z = std::abs(mc.mean - opt.value) / mc.standard_error;
        if (z > 3.0) throw std::runtime_error("seed " + std::to_string(seed) + " z = " + std::to_string(z));
        detail << "z" << seed << '=' << z << ' ';
    }
    return detail.str();
}

std::vector<double> policy_values(const TabularMDP& mdp) {
    const std::size_t S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
    std::vector<std::size_t> digits(S * H, 0);
    std::vector<double> out;
    for (;;) {
        out.push_back(evaluate_policy(mdp, Policy(H, S, digits)));
        std::size_t d = 0;
        while (d < digits.size() && ++digits[d] == A) digits[d++] = 0;
        if (d == digits.size()) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string check_permutation() {
    const auto mdp = uniform_instance(4, 2, 2, 0.4, 0.1);
    const auto base = policy_values(mdp);
    Rng rng(5);
    for (int i = 0; i < 5; ++i) {
        const auto sigma = PermutationSet::random(2, 4, 2, rng);
        const auto permuted = permute_instance(mdp, sigma);
        const auto values = policy_values(permuted);
        for (std::size_t j = 0; j < base.size(); ++j)
            if (std::abs(base[j] - values[j]) > 1e-12) throw std::runtime_error("value multiset changed");
        if (!(permute_instance(permuted, sigma.inverse()) == mdp)) throw std::runtime_error("inverse did not restore");
    }
    return "5 random permutations, " + std::to_string(base.size()) + " policies each";
}

}  // namespace

std::vector<std::string> verify_check_names() {
    return {"kl-oracle", "kl-negation", "dp-exhaustive", "uniform-closed-form", "tree-closed-form", "mc-vs-dp",
            "permutation"};
}

std::vector<CheckResult> verify_suite(const VerifyOptions& options) {
    const KlMax kl_max = options.kl_max ? options.kl_max : KlMax(kl_max_value);
    const std::vector<std::pair<std::string, std::function<std::string()>>> checks = {
        {"kl-oracle", [&] { return check_kl_oracle(kl_max); }},
        {"kl-negation", check_kl_negation},
        {"dp-exhaustive", check_dp_exhaustive},
        {"uniform-closed-form", check_uniform},
        {"tree-closed-form", check_tree},
        {"mc-vs-dp", check_mc_vs_dp},
        {"permutation", check_permutation},
    };
    std::vector<CheckResult> results;
    for (const auto& [name, fn] : checks) {
        if (!options.filter.empty() && name.find(options.filter) == std::string::npos) continue;
        CheckResult r{name, false, {}, 0.0};
        const auto start = std::chrono::steady_clock::now();
        try {
            r.detail = fn();
            r.passed = true;
        } catch (const std::exception& e) {
            r.detail = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace gpi
