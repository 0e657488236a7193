#include "gpi/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gpi/bpi_ucrl.hpp"
#include "gpi/environment.hpp"
#include "gpi/instances.hpp"

namespace gpi {

namespace {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

bool near_value(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

TabularMDP InstanceSpec::build() const {
    if (family == "file") return load_mdp(path);
    return build_instance(family, params);
}

std::string InstanceSpec::label() const {
    if (family == "file") return path;
    std::string out = family;
    for (const auto& [k, v] : params) out += " " + k + "=" + format_double(v);
    return out;
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw InvalidInput("config: trials must be >= 1");
    if (mu0.empty()) throw InvalidInput("config: mu0 grid must be nonempty");
    if (algorithms.empty()) throw InvalidInput("config: at least one algorithm is required");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("config: delta must lie in (0,1)");
    if (phase_cap < 1) throw InvalidInput("config: phase_cap must be >= 1");
    if (lcb_variance_factor != 1.0 && lcb_variance_factor != 4.0)
        throw InvalidInput("config: lcb_variance_factor must be 1 or 4");
    for (const auto& a : algorithms)
        if (a != kBeeGpi && a != kBpiUcrl) throw InvalidInput("config: unknown algorithm '" + a + "'");

    const double v_star = optimal_value_and_policy(instance.build()).value;
    for (double m : mu0) {
        if (!std::isfinite(m)) throw InvalidInput("config: mu0 must be finite");
        if (near_value(m, v_star))
            throw InvalidInput("config: mu0 = " + format_double(m) + " equals the optimal value; the boundary is excluded");
        if (m > v_star && std::find(algorithms.begin(), algorithms.end(), kBpiUcrl) != algorithms.end())
            throw InvalidInput("config: bpi-ucrl needs mu0 < V* (epsilon = V* - mu0 must be positive)");
    }
}

ExperimentConfig parse_config(const std::string& json_text) {
    ExperimentConfig c;
    try {
        const auto j = nlohmann::json::parse(json_text);
        const auto& inst = j.at("instance");
        c.instance.family = inst.at("family").get<std::string>();
        if (inst.contains("params"))
            for (const auto& [k, v] : inst.at("params").items()) c.instance.params[k] = v.get<double>();
        if (inst.contains("path")) c.instance.path = inst.at("path").get<std::string>();

        if (j.contains("algorithms"))
            c.algorithms = j.at("algorithms").get<std::vector<std::string>>();
        else if (j.contains("algorithm"))
            c.algorithms = {j.at("algorithm").get<std::string>()};
        c.mu0 = j.at("mu0").get<std::vector<double>>();
        c.delta = j.value("delta", c.delta);
        c.trials = j.value("trials", c.trials);
        c.seed = j.value("seed", c.seed);
        c.phase_cap = j.value("phase_cap", c.phase_cap);
        c.episode_cap = j.value("episode_cap", c.episode_cap);
        c.lcb_variance_factor = j.value("lcb_variance_factor", c.lcb_variance_factor);
        c.record_timing = j.value("record_timing", c.record_timing);
        c.output_dir = j.value("output_dir", c.output_dir);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::uint64_t derive_seed(std::uint64_t base, const std::string& algorithm, double mu0, int trial) {
    std::uint64_t h = splitmix64(base);
    h = splitmix64(h ^ fnv1a(algorithm));
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(mu0));
    return splitmix64(h ^ static_cast<std::uint64_t>(trial));
}

TrialRecord run_trial(const TabularMDP& mdp, double optimal_value, const ExperimentConfig& config,
                      const std::string& algorithm, double mu0, int trial) {
    TrialRecord rec;
    rec.trial = trial;
    rec.algorithm = algorithm;
    rec.mu0 = mu0;
    rec.seed = derive_seed(config.seed, algorithm, mu0, trial);

    const Environment env(mdp);
    Rng rng(rec.seed);
    const auto start = std::chrono::steady_clock::now();
    if (algorithm == kBeeGpi) {
        GpiOptions options;
        options.phase_cap = config.phase_cap;
        options.lcb_variance_factor = config.lcb_variance_factor;
        GpiOutcome out = run_bee_gpi(env, mu0, config.delta, rng, options);
        rec.tau = out.tau;
        rec.verdict = to_string(out.verdict);
        rec.phases = std::move(out.phases);
        switch (out.verdict) {
            case GpiVerdict::Qualified: rec.verdict_correct = evaluate_policy(mdp, *out.policy) >= mu0; break;
            case GpiVerdict::DeclaredNegative: rec.verdict_correct = optimal_value < mu0; break;
            case GpiVerdict::Aborted: rec.verdict_correct = false; break;
        }
    } else if (algorithm == kBpiUcrl) {
        const BpiOutcome out = run_bpi_ucrl(env, optimal_value - mu0, config.delta, rng, config.episode_cap);
        rec.tau = out.tau;
        rec.verdict = out.aborted ? "aborted" : "policy";
        rec.verdict_correct = !out.aborted && evaluate_policy(mdp, out.policy) >= mu0;
        rec.v_bar_root = out.v_bar_root;
        rec.v_under_root = out.v_under_root;
    } else {
        throw InvalidInput("unknown algorithm '" + algorithm + "'");
    }
    if (config.record_timing)
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

bool ExperimentResults::any_aborted() const {
    return std::any_of(records.begin(), records.end(), [](const TrialRecord& r) { return r.verdict == "aborted"; });
}

ExperimentResults run_experiment(const ExperimentConfig& config, int jobs) {
    config.validate();
    const TabularMDP mdp = config.instance.build();
    const double v_star = optimal_value_and_policy(mdp).value;

    struct Task {
        std::string algorithm;
        double mu0;
        int trial;
    };
    std::vector<Task> tasks;
    for (const auto& a : config.algorithms)
        for (double m : config.mu0)
            for (int t = 0; t < config.trials; ++t) tasks.push_back({a, m, t});

    ExperimentResults results;
    results.records.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();)
            results.records[i] = run_trial(mdp, v_star, config, tasks[i].algorithm, tasks[i].mu0, tasks[i].trial);
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
    {
        std::vector<std::jthread> pool;
        for (int i = 1; i < n; ++i) pool.emplace_back(worker);
        worker();
    }
    return results;
}

void write_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.trial << ',' << r.seed << ',' << r.algorithm << ',' << format_double(r.mu0) << ',' << r.tau << ','
            << r.verdict << ',' << (r.verdict_correct ? "true" : "false") << ',' << format_double(r.wall_ms) << '\n';
    }
}

std::vector<TrialRecord> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw InvalidInput("results csv: unexpected header");
    std::vector<TrialRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cols.push_back(cell);
        if (cols.size() != 8) throw InvalidInput("results csv: expected 8 columns in '" + line + "'");
        try {
            TrialRecord r;
            r.trial = std::stoi(cols[0]);
            r.seed = std::stoull(cols[1]);
            r.algorithm = cols[2];
            r.mu0 = std::stod(cols[3]);
            r.tau = std::stoull(cols[4]);
            r.verdict = cols[5];
            r.verdict_correct = cols[6] == "true";
            r.wall_ms = std::stod(cols[7]);
            out.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw InvalidInput("results csv: malformed row '" + line + "'");
        }
    }
    return out;
}

void write_log(const std::vector<TrialRecord>& records, std::ostream& out) {
    for (const auto& r : records) {
        auto base = [&] {
            nlohmann::ordered_json j;
            j["trial"] = r.trial;
            j["algorithm"] = r.algorithm;
            j["mu0"] = r.mu0;
            return j;
        };
        if (r.algorithm == kBpiUcrl) {
            auto j = base();
            j["phase"] = 0;
            j["stage"] = "bpi-baseline";
            j["episodes"] = r.tau;
            j["cumulative_episodes"] = r.tau;
            j["v_bar_root"] = r.v_bar_root;
            j["v_under_root"] = r.v_under_root;
            j["verdict"] = r.verdict;
            out << j.dump() << '\n';
            continue;
        }
        for (const auto& p : r.phases) {
            auto j = base();
            j["phase"] = p.k;
            j["stage"] = "exploration";
            j["episodes"] = p.exploration_episodes;
            j["cumulative_episodes"] = p.cumulative_exploration;
            j["budget"] = p.exploration_budget;
            j["v_bar_root"] = p.v_bar_root;
            j["v_under_root"] = p.v_under_root;
            j["verdict"] = to_string(p.oracle);
            out << j.dump() << '\n';
            if (p.oracle == OracleVerdict::PolicyFound) {
                auto e = base();
                e["phase"] = p.k;
                e["stage"] = "exploitation";
                e["episodes"] = p.exploitation_episodes;
                e["budget"] = p.exploitation_budget;
                e["v_bar_root"] = p.v_bar_root;
                e["v_under_root"] = p.v_under_root;
                e["verdict"] = p.accepted ? "accepted" : "rejected";
                out << e.dump() << '\n';
            }
        }
    }
}

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records) {
    std::vector<CellSummary> cells;
    for (const auto& r : records) {
        auto it = std::find_if(cells.begin(), cells.end(),
                               [&](const CellSummary& c) { return c.algorithm == r.algorithm && c.mu0 == r.mu0; });
        if (it == cells.end()) {
            cells.push_back({r.algorithm, r.mu0});
            it = std::prev(cells.end());
        }
        ++it->trials;
        it->mean_tau += static_cast<double>(r.tau);
        it->correct_rate += r.verdict_correct ? 1.0 : 0.0;
        it->aborted += r.verdict == "aborted" ? 1 : 0;
    }
    for (auto& c : cells) {
        c.mean_tau /= c.trials;
        c.correct_rate /= c.trials;
        double ss = 0.0;
        for (const auto& r : records)
            if (r.algorithm == c.algorithm && r.mu0 == c.mu0) ss += std::pow(static_cast<double>(r.tau) - c.mean_tau, 2);
        c.sd_tau = c.trials > 1 ? std::sqrt(ss / (c.trials - 1)) : 0.0;
    }
    return cells;
}

void print_summary(const std::vector<CellSummary>& cells, std::ostream& out) {
    out << std::left << std::setw(10) << "algorithm" << std::setw(8) << "mu0" << std::setw(8) << "trials"
        << std::setw(14) << "mean_tau" << std::setw(12) << "sd_tau" << std::setw(10) << "correct"
        << "aborted\n";
    for (const auto& c : cells) {
        std::ostringstream mean, sd;
        mean << std::fixed << std::setprecision(1) << c.mean_tau;
        sd << std::fixed << std::setprecision(1) << c.sd_tau;
        out << std::left << std::setw(10) << c.algorithm << std::setw(8) << format_double(c.mu0) << std::setw(8)
            << c.trials << std::setw(14) << mean.str() << std::setw(12) << sd.str() << std::setw(10)
            << format_double(c.correct_rate) << c.aborted << '\n';
    }
}

void persist(const ExperimentConfig& config, const ExperimentResults& results) {
    std::filesystem::create_directories(config.output_dir);
    const auto dir = std::filesystem::path(config.output_dir);
    std::ofstream csv(dir / "results.csv");
    std::ofstream log(dir / "log.jsonl");
    if (!csv || !log) throw std::runtime_error("cannot write results into " + config.output_dir);
    write_csv(results.records, csv);
    write_log(results.records, log);
}

}  // namespace gpi

namespace gpi {

AuditReport audit_log(std::istream& jsonl, std::size_t S, std::size_t A, std::size_t H, double delta,
                      const PhaseSchedule& schedule) {
    AuditReport report;
    std::string line;
    while (std::getline(jsonl, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        const std::string stage = j.at("stage").get<std::string>();
        if (stage == "bpi-baseline") continue;
        ++report.records_checked;
        const int k = j.at("phase").get<int>();
        const auto where = "trial " + std::to_string(j.at("trial").get<int>()) + " mu0 " +
                           format_double(j.at("mu0").get<double>()) + " phase " + std::to_string(k);
        if (stage == "exploration") {
            const auto cumulative = j.at("cumulative_episodes").get<std::uint64_t>();
            const auto cap = exploration_budget(k, S, A, H, schedule);
            if (cumulative > cap)
                report.violations.push_back(where + ": exploration history " + std::to_string(cumulative) +
                                            " exceeds T_ee " + std::to_string(cap));
        } else if (stage == "exploitation") {
            const auto n = j.at("episodes").get<std::uint64_t>();
            const auto cap = exploitation_budget(k, H, delta, schedule) - 1;
            if (n > cap)
                report.violations.push_back(where + ": exploitation N " + std::to_string(n) + " exceeds T_et - 1 = " +
                                            std::to_string(cap));
        } else {
            report.violations.push_back(where + ": unknown stage '" + stage + "'");
        }
    }
    return report;
}

}  // namespace gpi
