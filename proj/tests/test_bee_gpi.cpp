#include <doctest.h>

#include <cmath>

#include "gpi/bee_gpi.hpp"
#include "gpi/bpi_ucrl.hpp"
#include "gpi/instances.hpp"
#include "helpers.hpp"

using namespace gpi;

namespace {

// Single-state-pair MDP whose only policy earns `per_round` every round.
TabularMDP constant_reward_mdp(std::size_t H, double per_round) {
    std::vector<double> rewards(H * 2, per_round), kernels;
    for (std::size_t i = 0; i < H * 2; ++i) kernels.insert(kernels.end(), {0.5, 0.5});
    return TabularMDP(2, 1, H, rewards, kernels, {0.5, 0.5});
}

}  // namespace

TEST_CASE("phase schedule") {
    const PhaseSchedule s;
    CHECK(s.C == 1.01);
    CHECK(s.eps(1) == 0.5);
    CHECK(s.eps(3) == 0.125);
    CHECK(s.delta(2) == doctest::Approx(1.0 / 9));
    CHECK(s.log_alpha(3) == doctest::Approx(3 * std::log(5.0)));
}

TEST_CASE("exploration budget") {
    // Independent evaluation for S=4, A=2, H=8, k=1.
    const double L = std::log(2.0 * 4 * 2 * 8) + std::log(3.0);
    const double first = 81.0 * 8 * L / 0.5;
    const double second = 81.0 * 32 / 0.5 * std::log(81.0 * 32 * L / 0.5);
    CHECK(exploration_budget(1, 4, 2, 8) == static_cast<std::uint64_t>(std::floor(first + second)));
    CHECK(exploration_budget(1, 4, 2, 8) == 61298);
    for (int k = 1; k < 10; ++k) {
        CHECK(exploration_budget(k + 1, 4, 2, 8) >= 2 * exploration_budget(k, 4, 2, 8));
        CHECK(exploration_budget(k, 5, 2, 8) > exploration_budget(k, 4, 2, 8));
        CHECK(exploration_budget(k, 4, 3, 8) > exploration_budget(k, 4, 2, 8));
        CHECK(exploration_budget(k, 4, 2, 9) > exploration_budget(k, 4, 2, 8));
    }
}

TEST_CASE("exploitation budget") {
    const double expected = 200.0 * (std::log(5000.0) + std::log(std::log(3072.0)));
    CHECK(expected == doctest::Approx(200.0 * (8.51719 + 2.08324)).epsilon(1e-5));
    CHECK(exploitation_budget(1, 8, 0.001) == static_cast<std::uint64_t>(std::floor(expected)));
    CHECK(exploitation_budget(1, 8, 0.001) == 2120);
    CHECK(exploitation_budget(1, 8, 0.0001) > exploitation_budget(1, 8, 0.001));
    for (int k = 1; k < 10; ++k) CHECK(exploitation_budget(k + 1, 8, 0.01) > exploitation_budget(k, 8, 0.01));
}

TEST_CASE("exploitation stage accepts at the first passing N") {
    const Environment env(constant_reward_mdp(8, 0.75));
    const double delta = 0.01;
    const int k = 1;
    std::uint64_t expected = 0;
    for (std::uint64_t N = 1; N < 100000; ++N) {
        const double n = static_cast<double>(N);
        const double log_term = std::log(2.0) + k * std::log(5.0) + 2 * std::log(std::log2(2 * n)) - std::log(delta);
        if (6.0 - std::sqrt(64.0 * log_term / n) >= 3.0) {
            expected = N;
            break;
        }
    }
    REQUIRE(expected > 0);
    REQUIRE(exploitation_budget(k, 8, delta) > expected + 1);
    Rng rng(3);
    const auto res = exploitation_stage(env, Policy(8, 2, 0), k, PhaseSchedule{}, delta, 3.0, rng);
    CHECK(res.accepted);
    CHECK(res.N == expected);
    CHECK(res.rewards.size() == expected);
    for (double r : res.rewards) CHECK(r == doctest::Approx(6.0));
}

TEST_CASE("exploitation stage never accepts an unreachable threshold") {
    const Environment env(constant_reward_mdp(4, 1.0));
    Rng rng(1);
    const auto res = exploitation_stage(env, Policy(4, 2, 0), 1, PhaseSchedule{}, 0.1, 4.5, rng);
    CHECK_FALSE(res.accepted);
    CHECK(res.N == exploitation_budget(1, 4, 0.1) - 1);
}

TEST_CASE("es_bpi_ucrl verdicts") {
    const PhaseSchedule sched;
    SUBCASE("no budget left") {
        const Environment env(single_chain(8));
        ExplorationHistory h(4, 2, 8);
        Rng rng(1);
        const auto out = es_bpi_ucrl(env, h, 1, sched, 3.0, 0, rng);
        CHECK(out.verdict == OracleVerdict::NotCompleted);
        CHECK(out.episodes_used == 0);
        CHECK(h.episodes() == 0);
    }
    SUBCASE("negative instance") {
        const Environment env(zero_reward_instance(3, 2, 4));
        ExplorationHistory h(3, 2, 4);
        Rng rng(1);
        const auto out = es_bpi_ucrl(env, h, 1, sched, 1.0, exploration_budget(1, 3, 2, 4), rng);
        CHECK(out.verdict == OracleVerdict::NoneFound);
        CHECK(out.final_v_bar_root < 1.0);
        CHECK_FALSE(out.policy.has_value());
    }
    SUBCASE("deterministic path") {
        const auto mdp = test::deterministic_mdp(3, 2, 4);
        const Environment env(mdp);
        ExplorationHistory h(3, 2, 4);
        Rng rng(9);
        const auto out = es_bpi_ucrl(env, h, 1, sched, 0.5, exploration_budget(1, 3, 2, 4), rng);
        REQUIRE(out.verdict == OracleVerdict::PolicyFound);
        REQUIRE(out.policy.has_value());
        CHECK(evaluate_policy(mdp, *out.policy) == 1.0);
        CHECK(out.episodes_used == h.episodes());
        CHECK(out.final_v_under_root - (sched.C - 1) * (out.final_v_bar_root - out.final_v_under_root) > 0.5);
    }
}

TEST_CASE("run_bee_gpi on the single chain") {
    const auto mdp = single_chain(8);
    const Environment env(mdp);
    Rng rng(7);
    const auto out = run_bee_gpi(env, 1.0, 0.01, rng);
    REQUIRE(out.verdict == GpiVerdict::Qualified);
    CHECK(evaluate_policy(mdp, *out.policy) >= 1.0);
    std::uint64_t total = 0;
    for (const auto& p : out.phases) total += p.exploration_episodes + p.exploitation_episodes;
    CHECK(out.tau == total);
}

TEST_CASE("run_bee_gpi declares a zero-reward instance negative no earlier than phase 5") {
    const double delta = 0.1;
    const int first_allowed = static_cast<int>(std::ceil(std::log(10 / delta) / std::log(3.0)));
    CHECK(first_allowed == 5);
    const Environment env(zero_reward_instance(2, 2, 4));
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        const auto out = run_bee_gpi(env, 0.5, delta, rng);
        CHECK(out.verdict == GpiVerdict::DeclaredNegative);
        CHECK(out.phases.back().k >= first_allowed);
        CHECK_FALSE(out.policy.has_value());
    }
}

TEST_CASE("run_bee_gpi aborts at the phase cap") {
    const Environment env(zero_reward_instance(2, 2, 4));
    Rng rng(1);
    GpiOptions opt;
    opt.phase_cap = 3;
    const auto out = run_bee_gpi(env, 0.5, 0.1, rng, opt);
    CHECK(out.verdict == GpiVerdict::Aborted);
    CHECK(out.phases.size() == 3);
}

TEST_CASE("run_bee_gpi is reproducible") {
    const Environment env(double_chain(8));
    Rng a(123), b(123);
    const auto x = run_bee_gpi(env, 2.0, 0.01, a);
    const auto y = run_bee_gpi(env, 2.0, 0.01, b);
    CHECK(x.tau == y.tau);
    CHECK(x.verdict == y.verdict);
    CHECK(x.policy == y.policy);
}

TEST_CASE("run_bee_gpi on the uniform instance") {
    const auto mdp = uniform_instance(10, 4, 8, 0.4, 0.05);
    const Environment env(mdp);
    int correct = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const auto out = run_bee_gpi(env, 1.5, 0.1, rng);
        if (out.verdict == GpiVerdict::Qualified && evaluate_policy(mdp, *out.policy) >= 1.5) ++correct;
    }
    CHECK(correct >= 18);
}

TEST_CASE("bpi baseline") {
    SUBCASE("deterministic path returns an optimal policy") {
        const auto mdp = test::deterministic_mdp(3, 2, 4);
        const Environment env(mdp);
        Rng rng(2);
        const auto out = run_bpi_ucrl(env, 0.1, 0.05, rng, 1'000'000);
        CHECK_FALSE(out.aborted);
        CHECK(evaluate_policy(mdp, out.policy) == optimal_value_and_policy(mdp).value);
    }
    SUBCASE("epsilon of H is vacuous") {
        const auto mdp = single_chain(8);
        const Environment env(mdp);
        Rng rng(2);
        const auto out = run_bpi_ucrl(env, 8.0, 0.05, rng, 1'000'000);
        CHECK_FALSE(out.aborted);
        CHECK(out.tau == 0);
        CHECK_NOTHROW(out.policy.check_compatible(mdp));
    }
    SUBCASE("stopping time shrinks as epsilon grows") {
        const Environment env(single_chain(8));
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            std::uint64_t prev = UINT64_MAX;
            for (double eps : {0.5, 1.0, 2.0, 3.0}) {
                Rng rng(seed);
                const auto out = run_bpi_ucrl(env, eps, 0.01, rng, 1'000'000);
                CHECK(out.tau <= prev);
                prev = out.tau;
            }
        }
    }
    SUBCASE("episode cap aborts") {
        const Environment env(single_chain(8));
        Rng rng(2);
        const auto out = run_bpi_ucrl(env, 0.01, 0.01, rng, 50);
        CHECK(out.aborted);
        CHECK(out.tau == 50);
    }
    SUBCASE("slower than bee-gpi on the single chain at mu0 = 1") {
        const auto mdp = single_chain(8);
        const Environment env(mdp);
        const double eps = optimal_value_and_policy(mdp).value - 1.0;
        double bee = 0, bpi = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Rng a(seed), b(seed);
            bee += static_cast<double>(run_bee_gpi(env, 1.0, 0.01, a).tau);
            bpi += static_cast<double>(run_bpi_ucrl(env, eps, 0.01, b, 100'000'000).tau);
        }
        CHECK(bpi > bee);
    }
}
