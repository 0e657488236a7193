#include "gpi/mdp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gpi {

namespace {

constexpr double kSumTolerance = 1e-12;

void check_distribution(std::span<const double> p, const char* what) {
    double total = 0.0;
    for (double x : p) {
        if (!(x >= 0.0) || !std::isfinite(x))
            throw InvalidInput(std::string(what) + ": negative or non-finite probability");
        total += x;
    }
    if (std::abs(total - 1.0) > kSumTolerance)
        throw InvalidInput(std::string(what) + ": probabilities do not sum to 1");
}

}  // namespace

TabularMDP::TabularMDP(std::size_t S, std::size_t A, std::size_t H, std::vector<double> rewards,
                       std::vector<double> transitions, std::vector<double> initial)
    : S_(S), A_(A), H_(H), rewards_(std::move(rewards)), transitions_(std::move(transitions)),
      initial_(std::move(initial)) {
    if (S_ == 0 || A_ == 0 || H_ == 0) throw InvalidInput("TabularMDP: S, A and H must be positive");
    if (rewards_.size() != H_ * S_ * A_) throw InvalidInput("TabularMDP: rewards must have H*S*A entries");
    if (transitions_.size() != H_ * S_ * A_ * S_)
        throw InvalidInput("TabularMDP: transitions must have H*S*A*S entries");
    if (initial_.size() != S_) throw InvalidInput("TabularMDP: initial distribution must have S entries");

    for (double r : rewards_)
        if (!(r >= 0.0 && r <= 1.0)) throw InvalidInput("TabularMDP: reward outside [0,1]");
    for (std::size_t row = 0; row < H_ * S_ * A_; ++row)
        check_distribution({transitions_.data() + row * S_, S_}, "TabularMDP transition row");
    check_distribution(initial_, "TabularMDP initial distribution");
}

Policy::Policy(std::size_t H, std::size_t S, std::vector<std::size_t> actions)
    : H_(H), S_(S), actions_(std::move(actions)) {
    if (actions_.size() != H_ * S_) throw InvalidInput("Policy: expected H*S actions");
}

void Policy::check_compatible(const TabularMDP& mdp) const {
    if (H_ != mdp.horizon() || S_ != mdp.num_states())
        throw InvalidInput("Policy: dimensions do not match the MDP");
    for (std::size_t a : actions_)
        if (a >= mdp.num_actions()) throw InvalidInput("Policy: action index out of range");
}

RewardThresholdProblem::RewardThresholdProblem(TabularMDP m, double threshold, double d)
    : mdp(std::move(m)), mu0(threshold), delta(d) {
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("RewardThresholdProblem: delta must lie in (0,1)");
    if (!std::isfinite(mu0)) throw InvalidInput("RewardThresholdProblem: mu0 must be finite");
}

PolicyValues evaluate_policy_table(const TabularMDP& mdp, const Policy& policy) {
    policy.check_compatible(mdp);
    const std::size_t S = mdp.num_states(), H = mdp.horizon();

    PolicyValues out;
    out.values.assign(H * S, 0.0);
    std::vector<double> next(S, 0.0);
    for (std::size_t h = H; h-- > 0;) {
        for (std::size_t s = 0; s < S; ++s) {
            const std::size_t a = policy(h, s);
            double v = mdp.reward(h, s, a);
            const auto row = mdp.transition(h, s, a);
            for (std::size_t s2 = 0; s2 < S; ++s2) v += row[s2] * next[s2];
            out.values[h * S + s] = v;
        }
        std::copy_n(out.values.begin() + h * S, S, next.begin());
    }
    for (std::size_t s = 0; s < S; ++s) out.root += mdp.initial()[s] * next[s];
    return out;
}

double evaluate_policy(const TabularMDP& mdp, const Policy& policy) {
    return evaluate_policy_table(mdp, policy).root;
}

OptimalSolution optimal_value_and_policy(const TabularMDP& mdp) {
    const std::size_t S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();

    OptimalSolution out;
    out.policy = Policy(H, S);
    out.values.assign(H * S, 0.0);
    std::vector<double> next(S, 0.0);
    for (std::size_t h = H; h-- > 0;) {
        for (std::size_t s = 0; s < S; ++s) {
            double best = -1.0;
            std::size_t best_a = 0;
            for (std::size_t a = 0; a < A; ++a) {
                double q = mdp.reward(h, s, a);
                const auto row = mdp.transition(h, s, a);
                for (std::size_t s2 = 0; s2 < S; ++s2) q += row[s2] * next[s2];
                if (q > best) {  // strict: lowest index wins ties
                    best = q;
                    best_a = a;
                }
            }
            out.values[h * S + s] = best;
            out.policy.at(h, s) = best_a;
        }
        std::copy_n(out.values.begin() + h * S, S, next.begin());
    }
    for (std::size_t s = 0; s < S; ++s) out.value += mdp.initial()[s] * next[s];
    return out;
}

std::size_t sample_categorical(std::span<const double> probs, Rng& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        last_positive = i;
        acc += probs[i];
        if (u < acc) return i;
    }
    // Rounding left u above the accumulated mass; fall back to the last supported index.
    return last_positive;
}

Trajectory sample_episode(const TabularMDP& mdp, const Policy& policy, Rng& rng) {
    const std::size_t H = mdp.horizon();
    Trajectory traj;
    traj.states.reserve(H);
    traj.actions.reserve(H);
    traj.next_states.reserve(H);

    std::size_t s = sample_categorical(mdp.initial(), rng);
    for (std::size_t h = 0; h < H; ++h) {
        const std::size_t a = policy(h, s);
        traj.states.push_back(s);
        traj.actions.push_back(a);
        traj.total_reward += mdp.reward(h, s, a);
        s = sample_categorical(mdp.transition(h, s, a), rng);
        traj.next_states.push_back(s);
    }
    return traj;
}

std::string mdp_to_json(const TabularMDP& mdp) {
    const std::size_t S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
    nlohmann::json j;
    j["S"] = S;
    j["A"] = A;
    j["H"] = H;
    auto& rewards = j["rewards"] = nlohmann::json::array();
    auto& transitions = j["transitions"] = nlohmann::json::array();
    for (std::size_t h = 0; h < H; ++h) {
        nlohmann::json rh = nlohmann::json::array(), th = nlohmann::json::array();
        for (std::size_t s = 0; s < S; ++s) {
            nlohmann::json rs = nlohmann::json::array(), ts = nlohmann::json::array();
            for (std::size_t a = 0; a < A; ++a) {
                rs.push_back(mdp.reward(h, s, a));
                const auto row = mdp.transition(h, s, a);
                ts.push_back(std::vector<double>(row.begin(), row.end()));
            }
            rh.push_back(std::move(rs));
            th.push_back(std::move(ts));
        }
        rewards.push_back(std::move(rh));
        transitions.push_back(std::move(th));
    }
    j["initial"] = std::vector<double>(mdp.initial().begin(), mdp.initial().end());
    return j.dump();
}

TabularMDP mdp_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("mdp json: ") + e.what());
    }
    try {
        const auto S = j.at("S").get<std::size_t>();
        const auto A = j.at("A").get<std::size_t>();
        const auto H = j.at("H").get<std::size_t>();
        std::vector<double> rewards, transitions;
        rewards.reserve(H * S * A);
        transitions.reserve(H * S * A * S);
        const auto& rj = j.at("rewards");
        const auto& tj = j.at("transitions");
        if (rj.size() != H || tj.size() != H) throw InvalidInput("mdp json: expected H reward/transition blocks");
        for (std::size_t h = 0; h < H; ++h) {
            if (rj[h].size() != S || tj[h].size() != S) throw InvalidInput("mdp json: expected S rows per round");
            for (std::size_t s = 0; s < S; ++s) {
                if (rj[h][s].size() != A || tj[h][s].size() != A)
                    throw InvalidInput("mdp json: expected A entries per state");
                for (std::size_t a = 0; a < A; ++a) {
                    rewards.push_back(rj[h][s][a].get<double>());
                    const auto row = tj[h][s][a].get<std::vector<double>>();
                    if (row.size() != S) throw InvalidInput("mdp json: transition row must have S entries");
                    transitions.insert(transitions.end(), row.begin(), row.end());
                }
            }
        }
        return TabularMDP(S, A, H, std::move(rewards), std::move(transitions),
                          j.at("initial").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("mdp json: ") + e.what());
    }
}

void save_mdp(const TabularMDP& mdp, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << mdp_to_json(mdp) << '\n';
}

TabularMDP load_mdp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return mdp_from_json(buf.str());
}

}  // namespace gpi
