#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gpi/instances.hpp"
#include "gpi/mdp.hpp"

using namespace gpi;

TEST_CASE("chain rows") {
    const auto mdp = single_chain(8);
    const auto row = [&](std::size_t s, std::size_t a) {
        const auto r = mdp.transition(0, s, a);
        return std::vector<double>(r.begin(), r.end());
    };
    CHECK(row(0, kLeft) == std::vector<double>{0.9, 0.1, 0, 0});
    CHECK(row(0, kRight) == std::vector<double>{0.1, 0.9, 0, 0});
    CHECK(row(2, kRight) == std::vector<double>{0, 0.1, 0, 0.9});
    CHECK(row(3, kRight) == std::vector<double>{0, 0, 0.1, 0.9});
    CHECK(row(3, kLeft) == std::vector<double>{0, 0, 0.9, 0.1});
    CHECK(mdp.initial()[0] == 1.0);
    CHECK(double_chain(8).initial()[1] == 1.0);
    CHECK(mdp.reward(0, 3, kLeft) == 1.0);
    CHECK(mdp.reward(0, 2, kLeft) == 0.0);
}

TEST_CASE("uniform instance values") {
    const auto mdp = uniform_instance(10, 4, 8, 0.4, 0.05);
    CHECK(std::abs(optimal_value_and_policy(mdp).value - 1.8) < 1e-10);
    CHECK(evaluate_policy(mdp, Policy(8, 10, 1)) == doctest::Approx(8 * 0.4 / 2).epsilon(1e-12));
    CHECK_THROWS_AS(uniform_instance(10, 4, 7, 0.4, 0.05), InvalidInput);
    CHECK_THROWS_AS(uniform_instance(2, 4, 8, 0.4, 0.05), InvalidInput);
    CHECK_THROWS_AS(uniform_instance(10, 1, 8, 0.4, 0.05), InvalidInput);
    CHECK_THROWS_AS(uniform_instance(10, 4, 8, 0.2, 0.05), InvalidInput);
    CHECK_THROWS_AS(uniform_instance(10, 4, 8, 0.7, 0.1), InvalidInput);
}

TEST_CASE("uniform closed form across a grid") {
    int n = 0;
    for (std::size_t S : {3u, 4u, 10u})
        for (std::size_t A : {2u, 3u, 5u})
            for (std::size_t H : {2u, 6u})
                for (double r : {0.3, 0.45}) {
                    const double eps = 0.2;
                    const double want = static_cast<double>(H) * (r + eps) / 2;
                    CHECK(std::abs(optimal_value_and_policy(uniform_instance(S, A, H, r, eps)).value - want) < 1e-10);
                    ++n;
                }
    CHECK(n >= 20);
}

TEST_CASE("tree instance values") {
    const auto mdp = tree_instance(5, 3, 13, 0.5);
    CHECK(std::abs(optimal_value_and_policy(mdp).value - 6.0) < 1e-10);
    // Descend d levels, then jump: the jump happens in round d+1. Leaves sit two levels down.
    const auto tree = tree_instance(9, 3, 19, 0.45);
    for (std::size_t d = 0; d <= 2; ++d) {
        Policy pi(19, 9, 2);
        for (std::size_t h = 0; h < d; ++h)
            for (std::size_t s = 0; s < 9; ++s) pi.at(h, s) = 0;
        CHECK(evaluate_policy(tree, pi) == doctest::Approx((19.0 - (d + 1)) * 0.45).epsilon(1e-12));
    }
    // Every action at a leaf jumps, so always descending jumps in round 3.
    CHECK(evaluate_policy(tree, Policy(19, 9, 0)) == doctest::Approx(16 * 0.45).epsilon(1e-12));
    CHECK_THROWS_AS(tree_instance(6, 3, 13, 0.5), InvalidInput);
    CHECK_THROWS_AS(tree_instance(5, 2, 13, 0.5), InvalidInput);
    CHECK_THROWS_AS(tree_instance(9, 3, 12, 0.5), InvalidInput);
    CHECK_THROWS_AS(tree_instance(5, 3, 13, 0.7), InvalidInput);
}

TEST_CASE("tree closed form across a grid") {
    int n = 0;
    for (std::size_t N : {1u, 2u, 3u, 4u})
        for (std::size_t A : {3u, 4u})
            for (std::size_t extra : {0u, 5u})
                for (double r : {0.4, 0.55}) {
                    const std::size_t S = (std::size_t{1} << N) + 1, H = 6 * N + 1 + extra;
                    CHECK(std::abs(optimal_value_and_policy(tree_instance(S, A, H, r)).value - (H - 1.0) * r) < 1e-10);
                    ++n;
                }
    CHECK(n >= 20);
}

TEST_CASE("permutations") {
    const auto mdp = uniform_instance(4, 3, 2, 0.4, 0.1);
    SUBCASE("identity") { CHECK(permute_instance(mdp, PermutationSet::identity(2, 4, 3)) == mdp); }
    SUBCASE("swap") {
        std::vector<std::size_t> table;
        for (std::size_t i = 0; i < 2 * 4; ++i) table.insert(table.end(), {1, 0, 2});
        const PermutationSet swap(2, 4, 3, table);
        const auto p = permute_instance(mdp, swap);
        for (std::size_t h = 0; h < 2; ++h)
            for (std::size_t s = 0; s < 4; ++s) {
                CHECK(p.reward(h, s, 1) == mdp.reward(h, s, 0));
                CHECK(p.reward(h, s, 0) == mdp.reward(h, s, 1));
                const auto a = p.transition(h, s, 1), b = mdp.transition(h, s, 0);
                CHECK(std::equal(a.begin(), a.end(), b.begin()));
            }
    }
    SUBCASE("inverse restores and values follow the relabeling") {
        Rng rng(6);
        for (int i = 0; i < 5; ++i) {
            const auto sigma = PermutationSet::random(2, 4, 3, rng);
            const auto p = permute_instance(mdp, sigma);
            CHECK(permute_instance(p, sigma.inverse()) == mdp);
            std::vector<std::size_t> acts(8);
            for (auto& a : acts) a = rng() % 3;
            const Policy pi(2, 4, acts);
            CHECK(evaluate_policy(p, sigma.apply(pi)) == doctest::Approx(evaluate_policy(mdp, pi)).epsilon(1e-14));
            CHECK(optimal_value_and_policy(p).value == doctest::Approx(optimal_value_and_policy(mdp).value));
        }
    }
    SUBCASE("invalid tables") {
        CHECK_THROWS_AS(PermutationSet(1, 1, 3, {0, 0, 1}), InvalidInput);
        CHECK_THROWS_AS(PermutationSet(1, 1, 3, {0, 1}), InvalidInput);
    }
}

TEST_CASE("build_instance by name") {
    CHECK(build_instance("single_chain", {{"H", 8}}) == single_chain(8));
    CHECK(build_instance("uniform", {{"S", 10}, {"A", 4}, {"H", 8}, {"r", 0.4}, {"eps", 0.05}}) ==
          uniform_instance(10, 4, 8, 0.4, 0.05));
    CHECK_THROWS_AS(build_instance("nope", {}), InvalidInput);
    CHECK_THROWS_AS(build_instance("tree", {{"S", 5}}), InvalidInput);
    for (const auto& f : instance_families()) CHECK_FALSE(f.empty());
}
