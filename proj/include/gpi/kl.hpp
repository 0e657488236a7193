#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gpi {

/// Exploration bonus: log(2SAH/delta) + (S-1) log(e (1 + n/(S-1))).
/// Requires S >= 2 and delta in (0,1).
double beta_p(double n, double delta, std::size_t S, std::size_t A, std::size_t H);

/// Count-event constant log(2SAH/delta). Used only for documentation of the
/// concentration argument; no runtime decision depends on it.
double beta_count(double delta, std::size_t S, std::size_t A, std::size_t H);

/// KL(p || q) with 0 log(0/x) = 0. Returns +infinity when p puts mass where q has none.
double kl_categorical(std::span<const double> p, std::span<const double> q);

struct KlBallSolution {
    double value = 0.0;
    std::vector<double> q;
    double dual = 0.0;  // the multiplier nu of the maximizer q(s) ~ p(s) / (nu - v(s))
    int iterations = 0;
    bool saturated = false;  // eps exceeded what the solver could resolve; q sits on the feasible bracket edge
};

/**
 * Maximizes q.v over { q in simplex : KL(p_hat || q) <= eps }.
 *
 * The maximizer is q(s) proportional to p_hat(s) / (nu - v(s)) on the support
 * of p_hat, with the remaining mass (if any) on the lowest-index argmax of v
 * outside that support. The multiplier nu is found by safeguarded Newton
 * steps inside a bisection bracket; iteration stops at |KL - eps| <= 1e-10
 * or after 200 steps. eps may be +infinity (unvisited pair): the result is
 * then the point mass on the lowest-index argmax of v.
 *
 * Throws InvalidInput on eps < 0, NaN entries, or mismatched sizes.
 */
KlBallSolution kl_max_linear(std::span<const double> p_hat, std::span<const double> v, double eps);

/// Minimizing counterpart: exactly -kl_max_linear(p_hat, -v, eps).
KlBallSolution kl_min_linear(std::span<const double> p_hat, std::span<const double> v, double eps);

/// Value-only fast path used by the planner. Same result as kl_max_linear(...).value.
double kl_max_value(std::span<const double> p_hat, std::span<const double> v, double eps);
double kl_min_value(std::span<const double> p_hat, std::span<const double> v, double eps);

}  // namespace gpi
