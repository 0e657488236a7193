#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpi/bee_gpi.hpp"
#include "gpi/mdp.hpp"

namespace gpi {

inline constexpr const char* kBeeGpi = "bee-gpi";
inline constexpr const char* kBpiUcrl = "bpi-ucrl";

struct InstanceSpec {
    std::string family;                 // a build_instance family, or "file"
    std::map<std::string, double> params;
    std::string path;                   // for family == "file"

    TabularMDP build() const;
    std::string label() const;
};

/**
 * One experiment: a single instance, one or more algorithms, a threshold
 * grid and a trial count per (algorithm, threshold) cell.
 *
 * JSON shape:
 *   {"instance": {"family": "single_chain", "params": {"H": 8}},
 *    "algorithms": ["bee-gpi", "bpi-ucrl"], "mu0": [1, 1.5, 2],
 *    "delta": 0.01, "trials": 10, "seed": 1, "phase_cap": 40,
 *    "episode_cap": 100000000, "lcb_variance_factor": 1,
 *    "record_timing": true, "output_dir": "results"}
 */
struct ExperimentConfig {
    InstanceSpec instance;
    std::vector<std::string> algorithms{kBeeGpi};
    std::vector<double> mu0;
    double delta = 0.01;
    int trials = 10;
    std::uint64_t seed = 1;
    int phase_cap = 40;
    std::uint64_t episode_cap = 100'000'000;
    double lcb_variance_factor = 1.0;
    bool record_timing = true;  // false writes wall_ms = 0 so reruns are byte-identical
    std::string output_dir = "results";

    /// Throws InvalidInput on any violated field constraint, including a
    /// threshold equal to the instance's optimal value.
    void validate() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Child seed as a pure function of the cell coordinates.
std::uint64_t derive_seed(std::uint64_t base, const std::string& algorithm, double mu0, int trial);

struct TrialRecord {
    int trial = 0;
    std::uint64_t seed = 0;
    std::string algorithm;
    double mu0 = 0.0;
    std::uint64_t tau = 0;
    std::string verdict;        // qualified | negative | aborted | policy
    bool verdict_correct = false;
    double wall_ms = 0.0;
    std::vector<PhaseLog> phases;  // BEE-GPI only
    double v_bar_root = 0.0;       // final bounds, BPI-UCRL only
    double v_under_root = 0.0;
};

/// Runs one trial and checks its verdict against the true MDP.
TrialRecord run_trial(const TabularMDP& mdp, double optimal_value, const ExperimentConfig& config,
                      const std::string& algorithm, double mu0, int trial);

struct ExperimentResults {
    std::vector<TrialRecord> records;
    bool any_aborted() const;
};

/// All cells, ordered by (algorithm, mu0, trial). `jobs` worker threads.
ExperimentResults run_experiment(const ExperimentConfig& config, int jobs = 1);

inline constexpr const char* kCsvHeader = "trial,seed,algorithm,mu0,tau,verdict,verdict_correct,wall_ms";

void write_csv(const std::vector<TrialRecord>& records, std::ostream& out);
std::vector<TrialRecord> read_csv(std::istream& in);

/// JSON-lines phase records: {trial, algorithm, mu0, phase, stage, episodes,
/// cumulative_episodes, budget, v_bar_root, v_under_root, verdict}.
void write_log(const std::vector<TrialRecord>& records, std::ostream& out);

struct CellSummary {
    std::string algorithm;
    double mu0 = 0.0;
    int trials = 0;
    double mean_tau = 0.0;
    double sd_tau = 0.0;  // sample standard deviation; 0 for a single trial
    double correct_rate = 0.0;
    int aborted = 0;
};

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records);
void print_summary(const std::vector<CellSummary>& cells, std::ostream& out);

struct AuditReport {
    std::size_t records_checked = 0;
    std::vector<std::string> violations;
};

/// Re-derives every phase budget from (S, A, H, delta) and checks each
/// JSON-lines record against it: cumulative exploration at phase end
/// <= T_k^ee and exploitation N <= T_k^et - 1.
AuditReport audit_log(std::istream& jsonl, std::size_t S, std::size_t A, std::size_t H, double delta,
                      const PhaseSchedule& schedule = {});

/// Writes results.csv and log.jsonl into config.output_dir.
void persist(const ExperimentConfig& config, const ExperimentResults& results);

}  // namespace gpi
