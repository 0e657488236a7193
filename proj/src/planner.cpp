#include "gpi/planner.hpp"

#include <algorithm>
#include <limits>

#include "gpi/kl.hpp"

namespace gpi {

namespace {

constexpr double kUnbounded = std::numeric_limits<double>::infinity();

void check_dimensions(const ExplorationHistory& history, const KnownModel& known) {
    if (history.num_states() != known.S || history.num_actions() != known.A || history.horizon() != known.H)
        throw InvalidInput("planner: history and model dimensions differ");
}

// Radius of the KL ball for a pair visited n times.
struct Radius {
    double delta;
    std::size_t S, A, H;
    double operator()(std::uint64_t n) const {
        if (n == 0) return kUnbounded;
        const double nd = static_cast<double>(n);
        return beta_p(nd, delta, S, A, H) / nd;
    }
};

}  // namespace

PlanningResult plan_optimistic(const ExplorationHistory& history, const KnownModel& known, double delta) {
    check_dimensions(history, known);
    const std::size_t S = known.S, A = known.A, H = known.H;
    const Radius radius{delta, S, A, H};

    PlanningResult out;
    out.S = S;
    out.A = A;
    out.H = H;
    out.q_bar.assign(H * S * A, 0.0);
    out.v_bar.assign(H * S, 0.0);
    out.v_under_pi.assign(H * S, 0.0);
    out.pi_bar = Policy(H, S);

    std::vector<double> row(S), next(S, 0.0);
    for (std::size_t h = H; h-- > 0;) {
        for (std::size_t s = 0; s < S; ++s) {
            double best = -kUnbounded;
            std::size_t best_a = 0;
            for (std::size_t a = 0; a < A; ++a) {
                history.empirical_row(h, s, a, row);
                const double q = known.reward(h, s, a) + kl_max_value(row, next, radius(history.count(h, s, a)));
                out.q_bar[(h * S + s) * A + a] = q;
                if (q > best) {
                    best = q;
                    best_a = a;
                }
            }
            out.v_bar[h * S + s] = best;
            out.pi_bar.at(h, s) = best_a;
        }
        std::copy_n(out.v_bar.begin() + static_cast<std::ptrdiff_t>(h * S), S, next.begin());
    }
    history.empirical_initial(row);
    const double root_radius = radius(history.episodes());
    out.v_bar_root = kl_max_value(row, next, root_radius);

    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t h = H; h-- > 0;) {
        for (std::size_t s = 0; s < S; ++s) {
            const std::size_t a = out.pi_bar(h, s);
            history.empirical_row(h, s, a, row);
            out.v_under_pi[h * S + s] = known.reward(h, s, a) + kl_min_value(row, next, radius(history.count(h, s, a)));
        }
        std::copy_n(out.v_under_pi.begin() + static_cast<std::ptrdiff_t>(h * S), S, next.begin());
    }
    history.empirical_initial(row);
    out.v_under_root = kl_min_value(row, next, root_radius);
    return out;
}

PessimisticPlan plan_pessimistic_optimal(const ExplorationHistory& history, const KnownModel& known, double delta) {
    check_dimensions(history, known);
    const std::size_t S = known.S, A = known.A, H = known.H;
    const Radius radius{delta, S, A, H};

    PessimisticPlan out;
    out.q_under.assign(H * S * A, 0.0);
    out.v_under.assign(H * S, 0.0);
    out.pi_under = Policy(H, S);

    std::vector<double> row(S), next(S, 0.0);
    for (std::size_t h = H; h-- > 0;) {
        for (std::size_t s = 0; s < S; ++s) {
            double best = -kUnbounded;
            std::size_t best_a = 0;
            for (std::size_t a = 0; a < A; ++a) {
                history.empirical_row(h, s, a, row);
                const double q = known.reward(h, s, a) + kl_min_value(row, next, radius(history.count(h, s, a)));
                out.q_under[(h * S + s) * A + a] = q;
                if (q > best) {
                    best = q;
                    best_a = a;
                }
            }
            out.v_under[h * S + s] = best;
            out.pi_under.at(h, s) = best_a;
        }
        std::copy_n(out.v_under.begin() + static_cast<std::ptrdiff_t>(h * S), S, next.begin());
    }
    history.empirical_initial(row);
    out.v_under_root = kl_min_value(row, next, radius(history.episodes()));
    return out;
}

bool stop_positive(const PlanningResult& result, double C, double mu0) {
    if (!(C > 1.0)) throw InvalidInput("stop_positive: C must exceed 1");
    return result.v_under_root - (C - 1.0) * (result.v_bar_root - result.v_under_root) > mu0;
}

bool stop_negative(const PlanningResult& result, double mu0) { return result.v_bar_root < mu0; }

}  // namespace gpi
