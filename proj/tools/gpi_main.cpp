#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpi/experiment.hpp"
#include "gpi/instances.hpp"
#include "gpi/plot.hpp"
#include "gpi/verify.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_run(const std::string& config_path, int jobs, bool paper_delta, bool allow_abort, bool no_timing) {
    auto config = gpi::load_config(config_path);
    if (const char* env = std::getenv("GPI_SEED")) config.seed = std::stoull(env);
    if (paper_delta) config.delta = 0.001;
    if (no_timing) config.record_timing = false;
    config.validate();

    const auto results = gpi::run_experiment(config, jobs);
    gpi::persist(config, results);
    std::cout << "instance " << config.instance.label() << ", delta " << config.delta << ", seed " << config.seed
              << '\n';
    gpi::print_summary(gpi::summarize(results.records), std::cout);
    std::cout << "wrote " << (fs::path(config.output_dir) / "results.csv").string() << '\n';
    if (results.any_aborted() && !allow_abort) {
        std::cerr << "error: at least one trial aborted (use --allow-abort to accept)\n";
        return 2;
    }
    return 0;
}

int cmd_plot(const std::vector<std::string>& inputs, const std::string& out_path) {
    std::vector<gpi::PlotPanel> panels;
    for (const auto& path : inputs) {
        std::ifstream in(path);
        if (!in) throw gpi::InvalidInput("cannot open " + path);
        std::string title = fs::path(path).stem().string();
        if (title == "results") title = fs::path(path).parent_path().filename().string();
        panels.push_back({title, gpi::read_csv(in)});
    }
    std::ofstream out(out_path);
    if (!out) throw gpi::InvalidInput("cannot write " + out_path);
    out << gpi::render_svg(panels);
    return 0;
}

int cmd_verify(const std::string& filter) {
    gpi::VerifyOptions options;
    options.filter = filter;
    const auto results = gpi::verify_suite(options);
    if (results.empty()) {
        std::cerr << "no check matches '" << filter << "'\n";
        return 1;
    }
    bool ok = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  (" << r.seconds << " s)  " << r.detail << '\n';
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

int cmd_instance(const std::string& family, const std::vector<std::string>& params, const std::string& dump) {
    std::map<std::string, double> values;
    for (const auto& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw gpi::InvalidInput("parameter '" + kv + "' is not key=value");
        values[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    const auto mdp = gpi::build_instance(family, values);
    gpi::save_mdp(mdp, dump);
    const auto opt = gpi::optimal_value_and_policy(mdp);
    std::cout << family << ": S=" << mdp.num_states() << " A=" << mdp.num_actions() << " H=" << mdp.horizon()
              << " V*=" << opt.value << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Good policy identification experiments"};
    app.require_subcommand(1);

    std::string config_path;
    int jobs = 1;
    bool paper_delta = false, allow_abort = false, no_timing = false;
    auto* run = app.add_subcommand("run", "Run an experiment config and write results.csv and log.jsonl");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    run->add_flag("--paper-delta", paper_delta, "Use delta = 0.001");
    run->add_flag("--allow-abort", allow_abort, "Exit 0 even if some trial aborted");
    run->add_flag("--no-timing", no_timing, "Write wall_ms = 0 for reproducible CSV");

    std::vector<std::string> inputs;
    std::string out_path;
    auto* plot = app.add_subcommand("plot", "Render results CSV files to SVG");
    plot->add_option("--input", inputs, "results CSV, one panel each")->required()->check(CLI::ExistingFile);
    plot->add_option("--out", out_path, "Output SVG")->required();

    std::string filter;
    auto* verify = app.add_subcommand("verify", "Run the oracle checks");
    verify->add_option("--filter", filter, "Run only checks whose name contains this");

    std::string family, dump;
    std::vector<std::string> params;
    auto* instance = app.add_subcommand("instance", "Build an instance and dump it as JSON");
    instance->add_option("--family", family, "Instance family")
        ->required()
        ->check(CLI::IsMember(gpi::instance_families()));
    instance->add_option("--params", params, "key=value parameters");
    instance->add_option("--dump", dump, "Output JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_path, jobs, paper_delta, allow_abort, no_timing);
        if (*plot) return cmd_plot(inputs, out_path);
        if (*verify) return cmd_verify(filter);
        if (*instance) return cmd_instance(family, params, dump);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
