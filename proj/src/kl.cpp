#include "gpi/kl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gpi/mdp.hpp"

namespace gpi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kKlTolerance = 1e-10;
constexpr int kMaxIterations = 200;

struct CoreResult {
    double value = 0.0;
    double dual = 0.0;
    int iterations = 0;
    bool saturated = false;
};

void validate(std::span<const double> p, std::span<const double> v, double eps) {
    if (p.size() != v.size() || p.empty()) throw InvalidInput("kl ball: p_hat and v must have the same nonzero size");
    if (std::isnan(eps) || eps < 0.0) throw InvalidInput("kl ball: eps must be >= 0");
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(v[i])) throw InvalidInput("kl ball: v must be finite");
        if (!(p[i] >= 0.0)) throw InvalidInput("kl ball: p_hat has a negative or NaN entry");
        total += p[i];
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidInput("kl ball: p_hat does not sum to 1");
}

// Dual function f(nu) = sum_Z p log(nu - w) + log sum_Z p / (nu - w), equal to
// KL(p || q_nu). Decreasing on (max_Z w, inf). Also returns f'(nu).
struct DualEval {
    double f, df;
};

DualEval dual_eval(std::span<const double> p, std::span<const double> v, double sign, double nu) {
    double sum_log = 0.0, g = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        const double gap = nu - sign * v[i];
        const double a = 1.0 / gap;
        sum_log += p[i] * std::log(gap);
        g += p[i] * a;
        g2 += p[i] * a * a;
    }
    return {sum_log + std::log(g), g - g2 / g};
}

// Solves max_q sum q w, w = sign * v. When q_out is non-empty the maximizer is
// written there. The returned value is in w units.
CoreResult solve(std::span<const double> p, std::span<const double> v, double sign, double eps,
                 std::span<double> q_out) {
    validate(p, v, eps);
    const std::size_t n = p.size();
    auto w = [&](std::size_t i) { return sign * v[i]; };

    double top = -kInf, bottom = kInf, support_top = -kInf, support_bottom = kInf;
    std::size_t top_index = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double wi = w(i);
        if (wi > top) {
            top = wi;
            top_index = i;
        }
        bottom = std::min(bottom, wi);
        if (p[i] > 0.0) {
            support_top = std::max(support_top, wi);
            support_bottom = std::min(support_bottom, wi);
        }
    }

    auto copy_p = [&] {
        if (!q_out.empty()) std::copy(p.begin(), p.end(), q_out.begin());
    };
    auto point_mass = [&](std::size_t j) {
        if (!q_out.empty()) {
            std::fill(q_out.begin(), q_out.end(), 0.0);
            q_out[j] = 1.0;
        }
    };

    CoreResult out;
    if (top == bottom) {
        copy_p();
        out.value = top;
        out.dual = kInf;
        return out;
    }
    if (eps == 0.0 || (support_top == top && support_bottom == top)) {
        // q = p is forced (eps = 0) or already optimal (support sits on the argmax).
        copy_p();
        double value = 0.0;
        for (std::size_t i = 0; i < n; ++i) value += p[i] * w(i);
        out.value = value;
        out.dual = kInf;
        return out;
    }

    // Fills q_out and the value for multiplier nu with `moved` mass on top_index.
    auto finish = [&](double nu, double moved) {
        double g = 0.0, gw = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (p[i] <= 0.0) continue;
            const double a = p[i] / (nu - w(i));
            g += a;
            gw += a * w(i);
        }
        out.value = std::clamp((1.0 - moved) * gw / g + moved * top, bottom, top);
        out.dual = nu;
        if (!q_out.empty()) {
            for (std::size_t i = 0; i < n; ++i)
                q_out[i] = p[i] > 0.0 ? (1.0 - moved) * (p[i] / (nu - w(i))) / g : 0.0;
            q_out[top_index] += moved;
        }
    };

    double lo = support_top;
    if (top > support_top) {
        // The argmax is outside the support: mass may move there freely.
        const double f_top = dual_eval(p, v, sign, top).f;
        if (f_top < eps) {
            const double moved = std::isinf(eps) ? 1.0 : -std::expm1(f_top - eps);
            out.saturated = std::isinf(eps);
            finish(top, moved);
            return out;
        }
        lo = top;
    }

    if (std::isinf(eps)) {
        point_mass(top_index);
        out.value = top;
        out.dual = lo;
        out.saturated = true;
        return out;
    }

    double hi = lo + (top - bottom) + 1.0;
    while (dual_eval(p, v, sign, hi).f > eps) hi = lo + 2.0 * (hi - lo);

    double nu = hi;
    bool converged = false;
    for (out.iterations = 1; out.iterations <= kMaxIterations; ++out.iterations) {
        const DualEval e = dual_eval(p, v, sign, nu);
        if (std::abs(e.f - eps) <= kKlTolerance) {
            converged = true;
            break;
        }
        if (e.f > eps)
            lo = nu;
        else
            hi = nu;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi)) break;
        double next = e.df < 0.0 ? nu - (e.f - eps) / e.df : lo + 0.5 * (hi - lo);
        if (!(next > lo && next < hi)) next = lo + 0.5 * (hi - lo);
        nu = next;
    }
    if (!converged) {
        // Floating-point resolution exhausted before the KL level was hit;
        // fall back to the feasible edge of the bracket.
        out.saturated = true;
        nu = hi;
    }
    out.iterations = std::min(out.iterations, kMaxIterations);
    finish(nu, 0.0);
    return out;
}

}  // namespace

double beta_p(double n, double delta, std::size_t S, std::size_t A, std::size_t H) {
    if (S < 2) throw InvalidInput("beta_p: requires S >= 2");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("beta_p: delta must lie in (0,1)");
    if (!(n >= 0.0)) throw InvalidInput("beta_p: count must be >= 0");
    const double sm1 = static_cast<double>(S - 1);
    return beta_count(delta, S, A, H) + sm1 * (1.0 + std::log1p(n / sm1));
}

double beta_count(double delta, std::size_t S, std::size_t A, std::size_t H) {
    return std::log(2.0 * static_cast<double>(S * A * H) / delta);
}

double kl_categorical(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw InvalidInput("kl_categorical: size mismatch");
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return kInf;
        kl += p[i] * std::log(p[i] / q[i]);
    }
    return std::max(kl, 0.0);
}

KlBallSolution kl_max_linear(std::span<const double> p_hat, std::span<const double> v, double eps) {
    KlBallSolution sol;
    sol.q.assign(p_hat.size(), 0.0);
    const CoreResult r = solve(p_hat, v, 1.0, eps, sol.q);
    sol.value = r.value;
    sol.dual = r.dual;
    sol.iterations = r.iterations;
    sol.saturated = r.saturated;
    return sol;
}

KlBallSolution kl_min_linear(std::span<const double> p_hat, std::span<const double> v, double eps) {
    KlBallSolution sol;
    sol.q.assign(p_hat.size(), 0.0);
    const CoreResult r = solve(p_hat, v, -1.0, eps, sol.q);
    sol.value = -r.value;
    sol.dual = r.dual;
    sol.iterations = r.iterations;
    sol.saturated = r.saturated;
    return sol;
}

double kl_max_value(std::span<const double> p_hat, std::span<const double> v, double eps) {
    return solve(p_hat, v, 1.0, eps, {}).value;
}

double kl_min_value(std::span<const double> p_hat, std::span<const double> v, double eps) {
    return -solve(p_hat, v, -1.0, eps, {}).value;
}

}  // namespace gpi
