#include "gpi/bpi_ucrl.hpp"

#include "gpi/history.hpp"
#include "gpi/planner.hpp"

namespace gpi {

BpiOutcome run_bpi_ucrl(const Environment& env, double epsilon, double delta, Rng& rng, std::uint64_t episode_cap) {
    if (!(epsilon > 0.0)) throw InvalidInput("run_bpi_ucrl: epsilon must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("run_bpi_ucrl: delta must lie in (0,1)");
    const KnownModel& known = env.known();
    ExplorationHistory history(known.S, known.A, known.H);

    BpiOutcome out;
    for (;;) {
        PlanningResult plan = plan_optimistic(history, known, delta);
        out.v_bar_root = plan.v_bar_root;
        out.v_under_root = plan.v_under_root;
        if (plan.width() <= epsilon) {
            out.policy = std::move(plan.pi_bar);
            break;
        }
        if (history.episodes() >= episode_cap) {
            out.aborted = true;
            out.policy = std::move(plan.pi_bar);
            break;
        }
        history.record(env.sample(plan.pi_bar, rng));
    }
    out.tau = history.episodes();
    return out;
}

}  // namespace gpi
