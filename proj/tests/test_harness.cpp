#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "gpi/experiment.hpp"
#include "gpi/instances.hpp"
#include "gpi/kl.hpp"
#include "gpi/plot.hpp"
#include "gpi/verify.hpp"

using namespace gpi;

namespace {

ExperimentConfig small_config() {
    return parse_config(R"({"instance": {"family": "single_chain", "params": {"H": 8}},
                            "algorithms": ["bee-gpi", "bpi-ucrl"], "mu0": [1.5],
                            "delta": 0.01, "trials": 1, "seed": 5, "record_timing": false})");
}

TrialRecord rec(const std::string& alg, double mu0, std::uint64_t tau) {
    TrialRecord r;
    r.algorithm = alg;
    r.mu0 = mu0;
    r.tau = tau;
    r.verdict = "qualified";
    r.verdict_correct = true;
    return r;
}

}  // namespace

TEST_CASE("csv header is stable") {
    std::ostringstream out;
    write_csv({}, out);
    CHECK(out.str() == "trial,seed,algorithm,mu0,tau,verdict,verdict_correct,wall_ms\n");
}

TEST_CASE("csv round trip") {
    auto r = rec("bee-gpi", 2.5, 1234);
    r.seed = 18446744073709551615ull;
    r.trial = 3;
    r.wall_ms = 0.125;
    std::stringstream buf;
    write_csv({r}, buf);
    const auto back = read_csv(buf);
    REQUIRE(back.size() == 1);
    CHECK(back[0].seed == r.seed);
    CHECK(back[0].mu0 == 2.5);
    CHECK(back[0].tau == 1234);
    CHECK(back[0].wall_ms == 0.125);
    std::istringstream bad("trial,seed\n");
    CHECK_THROWS_AS(read_csv(bad), InvalidInput);
}

TEST_CASE("config validation") {
    CHECK_NOTHROW(small_config());
    const double v_star = optimal_value_and_policy(single_chain(8)).value;
    std::ostringstream j;
    j.precision(17);
    j << R"({"instance": {"family": "single_chain", "params": {"H": 8}}, "mu0": [1, )" << v_star << "]}";
    CHECK_THROWS_AS(parse_config(j.str()), InvalidInput);
    CHECK_THROWS_AS(parse_config(R"({"instance": {"family": "single_chain", "params": {"H": 8}}, "mu0": []})"),
                    InvalidInput);
    CHECK_THROWS_AS(
        parse_config(R"({"instance": {"family": "single_chain", "params": {"H": 8}}, "mu0": [1], "trials": 0})"),
        InvalidInput);
    CHECK_THROWS_AS(parse_config(R"({"instance": {"family": "single_chain", "params": {"H": 8}}, "mu0": [5],
                                     "algorithms": ["bpi-ucrl"]})"),
                    InvalidInput);
    CHECK_THROWS_AS(parse_config("{not json"), InvalidInput);
}

TEST_CASE("seed derivation is a pure function of the cell") {
    CHECK(derive_seed(1, "bee-gpi", 1.5, 3) == derive_seed(1, "bee-gpi", 1.5, 3));
    CHECK(derive_seed(1, "bee-gpi", 1.5, 3) != derive_seed(1, "bpi-ucrl", 1.5, 3));
    CHECK(derive_seed(1, "bee-gpi", 1.5, 3) != derive_seed(1, "bee-gpi", 2.0, 3));
    CHECK(derive_seed(1, "bee-gpi", 1.5, 3) != derive_seed(1, "bee-gpi", 1.5, 4));
    CHECK(derive_seed(1, "bee-gpi", 1.5, 3) != derive_seed(2, "bee-gpi", 1.5, 3));
}

TEST_CASE("runs are byte-identical and independent of job count") {
    const auto config = small_config();
    std::ostringstream a, b, c;
    write_csv(run_experiment(config, 1).records, a);
    write_csv(run_experiment(config, 1).records, b);
    write_csv(run_experiment(config, 2).records, c);
    CHECK(a.str() == b.str());
    CHECK(a.str() == c.str());
}

TEST_CASE("trial verdicts are checked against the true MDP") {
    const auto config = small_config();
    const auto results = run_experiment(config);
    REQUIRE(results.records.size() == 2);
    for (const auto& r : results.records) {
        CHECK(r.verdict_correct);
        CHECK(r.wall_ms == 0.0);
    }
    CHECK_FALSE(results.any_aborted());
}

TEST_CASE("persisted log passes the budget audit") {
    auto config = small_config();
    config.trials = 3;
    config.output_dir = (std::filesystem::temp_directory_path() / "gpi_harness_test").string();
    const auto results = run_experiment(config);
    persist(config, results);
    std::ifstream log(std::filesystem::path(config.output_dir) / "log.jsonl");
    const auto report = audit_log(log, 4, 2, 8, config.delta);
    CHECK(report.records_checked >= 6);
    CHECK(report.violations.empty());

    std::istringstream tampered(
        R"({"trial":0,"algorithm":"bee-gpi","mu0":1.0,"phase":1,"stage":"exploration","episodes":70000,"cumulative_episodes":70000})"
        "\n"
        R"({"trial":0,"algorithm":"bee-gpi","mu0":1.0,"phase":1,"stage":"exploitation","episodes":5000})");
    CHECK(audit_log(tampered, 4, 2, 8, 0.01).violations.size() == 2);
    std::filesystem::remove_all(config.output_dir);
}

TEST_CASE("summary statistics") {
    const auto cells = summarize({rec("a", 1, 10), rec("a", 1, 20), rec("b", 1, 7)});
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].mean_tau == 15.0);
    CHECK(cells[0].sd_tau == doctest::Approx(std::sqrt(50.0)));
    CHECK(cells[1].sd_tau == 0.0);
}

TEST_CASE("plot") {
    SUBCASE("means appear to one decimal") {
        const std::string svg = render_svg({{"chain", {rec("bee-gpi", 1, 100), rec("bee-gpi", 1, 121),
                                                       rec("bpi-ucrl", 1, 300), rec("bpi-ucrl", 2, 455)}}});
        CHECK(svg.find(">110.5</text>") != std::string::npos);
        CHECK(svg.find(">300.0</text>") != std::string::npos);
        CHECK(svg.find(">455.0</text>") != std::string::npos);
        CHECK(svg.find("lower is better") != std::string::npos);
        CHECK(svg.find(">chain</text>") != std::string::npos);
    }
    SUBCASE("single-trial cells have zero-length error bars") {
        const std::string svg = render_svg({{"p", {rec("x", 1, 50), rec("y", 1, 80)}}});
        const std::regex bar(R"re(class="errorbar" x1="[^"]+" y1="([^"]+)" x2="[^"]+" y2="([^"]+)")re");
        int bars = 0;
        for (std::sregex_iterator it(svg.begin(), svg.end(), bar), end; it != end; ++it, ++bars)
            CHECK((*it)[1] == (*it)[2]);
        CHECK(bars == 2);
    }
    SUBCASE("bad tables") {
        CHECK_THROWS_AS(render_svg({}), InvalidInput);
        CHECK_THROWS_AS(render_svg({{"empty", {}}}), InvalidInput);
        CHECK_THROWS_AS(render_svg({{"one", {rec("x", 1, 5)}}}), InvalidInput);
    }
    SUBCASE("one panel per table") {
        const std::string svg = render_svg({{"left", {rec("x", 1, 5), rec("y", 1, 6)}},
                                            {"right", {rec("x", 1, 5), rec("y", 1, 6)}}});
        CHECK(svg.find(">left</text>") != std::string::npos);
        CHECK(svg.find(">right</text>") != std::string::npos);
    }
}

TEST_CASE("verify suite") {
    SUBCASE("everything passes") {
        const auto results = verify_suite();
        CHECK(results.size() == verify_check_names().size());
        for (const auto& r : results) {
            CAPTURE(r.name);
            CAPTURE(r.detail);
            CHECK(r.passed);
        }
    }
    SUBCASE("planted bug is caught") {
        VerifyOptions opt;
        opt.filter = "kl-oracle";
        opt.kl_max = [](std::span<const double> p, std::span<const double> v, double eps) {
            return kl_min_value(p, v, eps);
        };
        const auto results = verify_suite(opt);
        REQUIRE(results.size() == 1);
        CHECK_FALSE(results[0].passed);
    }
    SUBCASE("filter") {
        VerifyOptions opt;
        opt.filter = "tree";
        const auto results = verify_suite(opt);
        REQUIRE(results.size() == 1);
        CHECK(results[0].name == "tree-closed-form");
        CHECK(results[0].passed);
    }
}
