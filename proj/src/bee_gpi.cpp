#include "gpi/bee_gpi.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace gpi {

namespace {

void check_phase(int k) {
    if (k < 1) throw InvalidInput("phase index must be >= 1");
}

std::uint64_t floor_count(double x) {
    if (!(x >= 0.0) || x > 9.0e18) throw InvalidInput("budget is not representable as an episode count");
    return static_cast<std::uint64_t>(std::floor(x));
}

}  // namespace

double PhaseSchedule::eps(int k) const {
    check_phase(k);
    return std::ldexp(1.0, -k);
}

double PhaseSchedule::delta(int k) const {
    check_phase(k);
    return std::pow(3.0, -k);
}

double PhaseSchedule::log_alpha(int k) const {
    check_phase(k);
    return k * std::log(5.0);
}

std::uint64_t exploration_budget(int k, std::size_t S, std::size_t A, std::size_t H, const PhaseSchedule& schedule) {
    const double s = static_cast<double>(S), a = static_cast<double>(A), h1 = static_cast<double>(H + 1);
    const double log_term = std::log(2.0 * s * a * static_cast<double>(H)) + k * std::log(3.0);  // log(2SAH/delta_k)
    const double eps = schedule.eps(k);
    const double first = h1 * h1 * s * a * log_term / eps;
    const double scale = h1 * h1 * s * s * a / eps;
    return floor_count(first + scale * std::log(h1 * h1 * s * s * a * log_term / eps));
}

std::uint64_t exploitation_budget(int k, std::size_t H, double delta, const PhaseSchedule& schedule) {
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("exploitation_budget: delta must lie in (0,1)");
    const double eps = schedule.eps(k);
    const double h = static_cast<double>(H);
    const double inner = std::log(24.0 * h * h / eps);
    return floor_count(100.0 * (schedule.log_alpha(k) - std::log(delta) + std::log(inner)) / eps);
}

double exploitation_lcb(double mean, std::uint64_t N, std::size_t H, int k, double delta,
                        const PhaseSchedule& schedule, double variance_factor) {
    if (N == 0) throw InvalidInput("exploitation_lcb: N must be positive");
    const double n = static_cast<double>(N), h = static_cast<double>(H);
    // log[2 alpha_k (log2 2N)^2 / delta]
    const double log_arg = std::log(2.0) + schedule.log_alpha(k) + 2.0 * std::log(std::log2(2.0 * n)) - std::log(delta);
    return mean - std::sqrt(variance_factor * h * h * log_arg / n);
}

std::string to_string(OracleVerdict v) {
    switch (v) {
        case OracleVerdict::PolicyFound: return "policy";
        case OracleVerdict::NoneFound: return "none";
        case OracleVerdict::NotCompleted: return "not_completed";
    }
    return "?";
}

std::string to_string(GpiVerdict v) {
    switch (v) {
        case GpiVerdict::Qualified: return "qualified";
        case GpiVerdict::DeclaredNegative: return "negative";
        case GpiVerdict::Aborted: return "aborted";
    }
    return "?";
}

OracleOutput es_bpi_ucrl(const Environment& env, ExplorationHistory& history, int k, const PhaseSchedule& schedule,
                         double mu0, std::uint64_t budget, Rng& rng) {
    const double delta_k = schedule.delta(k);
    const std::uint64_t entry = history.episodes();
    OracleOutput out;
    for (;;) {
        PlanningResult plan = plan_optimistic(history, env.known(), delta_k);
        out.final_v_bar_root = plan.v_bar_root;
        out.final_v_under_root = plan.v_under_root;
        if (stop_positive(plan, schedule.C, mu0)) {
            out.verdict = OracleVerdict::PolicyFound;
            out.policy = std::move(plan.pi_bar);
            break;
        }
        if (stop_negative(plan, mu0)) {
            out.verdict = OracleVerdict::NoneFound;
            break;
        }
        if (history.episodes() >= budget) {  // t > T - 1
            out.verdict = OracleVerdict::NotCompleted;
            break;
        }
        history.record(env.sample(plan.pi_bar, rng));
    }
    out.episodes_used = history.episodes() - entry;
    return out;
}

ExploitationResult exploitation_stage(const Environment& env, const Policy& candidate, int k,
                                      const PhaseSchedule& schedule, double delta, double mu0, Rng& rng,
                                      double variance_factor) {
    const std::size_t H = env.known().H;
    const std::uint64_t cap = exploitation_budget(k, H, delta, schedule) - 1;
    ExploitationResult out;
    double total = 0.0;
    while (out.N < cap) {
        const double x = env.sample(candidate, rng).total_reward;
        out.rewards.push_back(x);
        total += x;
        ++out.N;
        out.lcb = exploitation_lcb(total / static_cast<double>(out.N), out.N, H, k, delta, schedule, variance_factor);
        if (out.lcb >= mu0) {
            out.accepted = true;
            break;
        }
    }
    return out;
}

GpiOutcome run_bee_gpi(const Environment& env, double mu0, double delta, Rng& rng, const GpiOptions& options) {
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("run_bee_gpi: delta must lie in (0,1)");
    if (!(options.schedule.C > 1.0)) throw InvalidInput("run_bee_gpi: C must exceed 1");
    const KnownModel& known = env.known();

    Rng exploit_rng(rng());
    ExplorationHistory history(known.S, known.A, known.H);
    GpiOutcome outcome;
    auto finish = [&](GpiVerdict verdict) {
        outcome.verdict = verdict;
        outcome.tau = std::accumulate(outcome.phases.begin(), outcome.phases.end(), std::uint64_t{0},
                                      [](std::uint64_t acc, const PhaseLog& p) {
                                          return acc + p.exploration_episodes + p.exploitation_episodes;
                                      });
        return outcome;
    };

    for (int k = 1; k <= options.phase_cap; ++k) {
        PhaseLog log;
        log.k = k;
        log.exploration_budget = exploration_budget(k, known.S, known.A, known.H, options.schedule);
        OracleOutput oracle = es_bpi_ucrl(env, history, k, options.schedule, mu0, log.exploration_budget, rng);
        log.oracle = oracle.verdict;
        log.exploration_episodes = oracle.episodes_used;
        log.cumulative_exploration = history.episodes();
        log.v_bar_root = oracle.final_v_bar_root;
        log.v_under_root = oracle.final_v_under_root;

        switch (oracle.verdict) {
            case OracleVerdict::NotCompleted:
                outcome.phases.push_back(log);
                continue;
            case OracleVerdict::NoneFound:
                outcome.phases.push_back(log);
                if (options.schedule.delta(k) < delta / 10.0) return finish(GpiVerdict::DeclaredNegative);
                continue;
            case OracleVerdict::PolicyFound: {
                log.exploitation_budget = exploitation_budget(k, known.H, delta, options.schedule);
                const ExploitationResult et = exploitation_stage(env, *oracle.policy, k, options.schedule, delta, mu0,
                                                                 exploit_rng, options.lcb_variance_factor);
                log.exploitation_episodes = et.N;
                log.accepted = et.accepted;
                outcome.phases.push_back(log);
                if (et.accepted) {
                    outcome.policy = std::move(oracle.policy);
                    return finish(GpiVerdict::Qualified);
                }
                continue;
            }
        }
    }
    return finish(GpiVerdict::Aborted);
}

}  // namespace gpi
