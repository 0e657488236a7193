#include "gpi/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace gpi::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double kl(std::span<const double> p, std::span<const double> q) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] <= 0.0) return kInf;
        total += p[i] * std::log(p[i] / q[i]);
    }
    return total;
}

// Boundary of {x : f(x) <= eps} between a feasible point `in` and an infeasible point `out`.
template <class F>
double boundary(F f, double in, double out, double eps) {
    for (int i = 0; i < 200 && in != out; ++i) {
        const double mid = 0.5 * (in + out);
        if (mid == in || mid == out) break;
        (f(mid) <= eps ? in : out) = mid;
    }
    return in;
}

}  // namespace

double kl_ball_max(std::span<const double> p, std::span<const double> v, double eps, double resolution) {
    const std::size_t S = p.size();
    if (S != 2 && S != 3) throw InvalidInput("oracle::kl_ball_max supports S in {2,3}");

    std::vector<double> q(S);
    const std::size_t i = S - 2, j = S - 1;  // free pair
    // Best value on the slice q_0 = head (S = 3), -inf if the slice misses the ball.
    auto slice = [&](double head) {
        const double mass = 1.0 - head;
        auto kl_at = [&](double x) {
            if (S == 3) q[0] = head;
            q[i] = x;
            q[j] = mass - x;
            return kl(p, q);
        };
        const double pij = p[i] + p[j];
        const double x_min = pij > 0.0 ? mass * p[i] / pij : 0.5 * mass;
        if (kl_at(x_min) > eps) return -kInf;
        const double lo = kl_at(0.0) <= eps ? 0.0 : boundary(kl_at, x_min, 0.0, eps);
        const double hi = kl_at(mass) <= eps ? mass : boundary(kl_at, x_min, mass, eps);
        double best = -kInf;
        for (double x : {lo, hi}) best = std::max(best, head * (S == 3 ? v[0] : 0.0) + x * v[i] + (mass - x) * v[j]);
        return best;
    };
    if (S == 2) return slice(0.0);

    // Feasible range of q_0: the slice minimum of KL is the binary KL in the first coordinate.
    const double rest = 1.0 - p[0];
    auto kl_head = [&](double h) {
        const double a[2] = {p[0], rest}, b[2] = {h, 1.0 - h};
        return kl(a, b);
    };
    const double h_lo = kl_head(0.0) <= eps ? 0.0 : boundary(kl_head, p[0], 0.0, eps);
    const double h_hi = kl_head(1.0) <= eps ? 1.0 : boundary(kl_head, p[0], 1.0, eps);

    std::vector<double> heads{h_lo, h_hi};
    const auto steps = static_cast<std::size_t>(std::llround(1.0 / resolution));
    for (std::size_t g = 0; g <= steps; ++g) {
        const double h = std::min(1.0, static_cast<double>(g) * resolution);
        if (h > h_lo && h < h_hi) heads.push_back(h);
    }
    std::sort(heads.begin(), heads.end());
    std::size_t arg = 0;
    std::vector<double> values(heads.size());
    for (std::size_t g = 0; g < heads.size(); ++g) {
        values[g] = slice(heads[g]);
        if (values[g] > values[arg]) arg = g;
    }
    // The slice maximum is concave in q_0; refine between the neighbours of the best grid point.
    double a = heads[arg == 0 ? 0 : arg - 1], b = heads[std::min(arg + 1, heads.size() - 1)];
    double best = values[arg];
    for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
        const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
        const double f1 = slice(m1), f2 = slice(m2);
        best = std::max({best, f1, f2});
        (f1 < f2 ? a : b) = f1 < f2 ? m1 : m2;
    }
    return best;
}

double kl_ball_max_grid2(std::span<const double> p, std::span<const double> v, double eps, double resolution) {
    if (p.size() != 2) throw InvalidInput("oracle::kl_ball_max_grid2 needs S = 2");
    const auto steps = static_cast<std::size_t>(std::llround(1.0 / resolution));
    double best = -kInf;
    double q[2];
    for (std::size_t g = 0; g <= steps; ++g) {
        q[1] = std::min(1.0, static_cast<double>(g) * resolution);
        q[0] = 1.0 - q[1];
        if (kl(p, q) <= eps) best = std::max(best, q[0] * v[0] + q[1] * v[1]);
    }
    return best;
}

double exhaustive_optimal_value(const TabularMDP& mdp, std::uint64_t limit) {
    const std::size_t S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
    const std::size_t slots = S * H;
    double total = 1.0;
    for (std::size_t i = 0; i < slots; ++i) total *= static_cast<double>(A);
    if (total > static_cast<double>(limit)) throw InvalidInput("oracle::exhaustive_optimal_value: too many policies");

    std::vector<std::size_t> digits(slots, 0);
    double best = -kInf;
    for (;;) {
        best = std::max(best, evaluate_policy(mdp, Policy(H, S, digits)));
        std::size_t d = 0;
        while (d < slots && ++digits[d] == A) digits[d++] = 0;
        if (d == slots) break;
    }
    return best;
}

MonteCarloEstimate monte_carlo_value(const TabularMDP& mdp, const Policy& policy, std::size_t episodes, Rng& rng) {
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t e = 0; e < episodes; ++e) {
        const double x = sample_episode(mdp, policy, rng).total_reward;
        sum += x;
        sum_sq += x * x;
    }
    const double n = static_cast<double>(episodes);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

}  // namespace gpi::oracle
