#include <doctest.h>

#include <sstream>

#include "optree/config.hpp"
#include "optree/harness.hpp"
#include "optree/plot.hpp"

using namespace optree;

namespace {

ExperimentSpec small_spec() {
    ExperimentSpec s;
    s.benchmark = "branin";
    s.repeats = 3;
    s.budget = 25;
    s.aux.n_random = 200;
    return s;
}

std::string summary_csv(const CurveSummary& s) {
    std::ostringstream os;
    write_summary_csv(os, s);
    return os.str();
}

}  // namespace

TEST_CASE("algorithm names") {
    CHECK(parse_algorithm_list("soo,gpucb") == std::vector<Algorithm>{Algorithm::Soo, Algorithm::Gpucb});
    CHECK_THROWS_AS(parse_algorithm_list("soo,soo"), std::invalid_argument);
    CHECK_THROWS_AS(parse_algorithm_list(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_algorithm_list("soo,direct"), std::invalid_argument);
    CHECK(join_algorithms({Algorithm::Bamsoo, Algorithm::Soo}) == "bamsoo,soo");
}

TEST_CASE("degenerate experiment") {
    ExperimentSpec s = small_spec();
    s.repeats = 1;
    s.budget = 1;
    const ExperimentResult r = run_experiment(s);
    for (const auto& c : r.summary.curves) {
        CHECK(c.mean.size() == 1);
        CHECK(c.std[0] == 0.0);
        CHECK(c.runs == 1);
    }
    const TimingReport t = timing_compare(r);
    CHECK_FALSE(t.checked);
    CHECK(t.text().find("skipped") != std::string::npos);
}

TEST_CASE("seeds and run layout") {
    ExperimentSpec s = small_spec();
    s.base_seed = 40;
    const ExperimentResult r = run_experiment(s);
    REQUIRE(r.runs.size() == 7);
    CHECK(r.runs[0].algorithm == Algorithm::Soo);
    CHECK(r.runs[0].seed == 40);
    CHECK(r.runs[1].seed == 40);
    CHECK(r.runs[3].seed == 42);
    CHECK(r.runs[4].algorithm == Algorithm::Gpucb);
    CHECK(r.summary.at(Algorithm::Bamsoo).runs == 3);
    for (const auto& c : r.summary.curves) {
        CHECK(c.mean.size() == s.budget);
        for (std::size_t t = 0; t < s.budget; ++t) {
            CHECK(c.std[t] >= 0.0);
            CHECK(c.min[t] <= c.median[t]);
            CHECK(c.median[t] <= c.max[t]);
            if (t > 0) CHECK(c.max[t] <= c.max[t - 1]);
        }
    }
}

TEST_CASE("results do not depend on scheduling") {
    ExperimentSpec s = small_spec();
    const std::string one = summary_csv(run_experiment(s).summary);
    CHECK(one == summary_csv(run_experiment(s).summary));
    s.jobs = 3;
    CHECK(one == summary_csv(run_experiment(s).summary));
}

TEST_CASE("raw csv round trip") {
    const ExperimentResult r = run_experiment(small_spec());
    std::ostringstream raw;
    write_raw_csv(raw, r);
    std::istringstream in(raw.str());
    const auto rows = read_raw_csv(in);
    CHECK(rows.size() == r.summary.curves.size() * 0 + 7 * 25);
    const CurveSummary again =
        summarize(r.spec.benchmark, r.spec.budget, r.spec.algorithms, curves_from_raw(rows, 25));
    for (std::size_t a = 0; a < again.curves.size(); ++a) {
        for (std::size_t t = 0; t < 25; ++t) {
            CHECK(std::abs(again.curves[a].mean[t] - r.summary.curves[a].mean[t]) <= 1e-12);
            CHECK(std::abs(again.curves[a].std[t] - r.summary.curves[a].std[t]) <= 1e-12);
        }
    }
    std::istringstream bad("run_id,algorithm\n1,soo\n");
    CHECK_THROWS_AS(read_raw_csv(bad), std::runtime_error);
}

TEST_CASE("short traces are carried forward") {
    RunResult run;
    run.trace.records.resize(2);
    run.trace.records[0].best_so_far = -1.0;
    run.trace.records[1].best_so_far = -0.5;
    const RunCurve c = regret_curve(run, get_benchmark("rosenbrock2"), 5);
    CHECK(c.log_regret == std::vector<double>{0.0, std::log10(0.5), std::log10(0.5),
                                              std::log10(0.5), std::log10(0.5)});
}

TEST_CASE("timing needs all three algorithms") {
    ExperimentSpec s = small_spec();
    s.algorithms = {Algorithm::Soo};
    const ExperimentResult r = run_experiment(s);
    CHECK_THROWS_AS(timing_compare(r), std::invalid_argument);
    CHECK_FALSE(timing_report(r).checked);
}

TEST_CASE("spec validation") {
    ExperimentSpec s = small_spec();
    s.kernel = KernelSpec::isotropic(KernelFamily::SquaredExponential, 3, 0.2);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small_spec();
    s.eta = 1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small_spec();
    s.benchmark = "nope";
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK(RunError(Algorithm::Gpucb, 9, "boom").what() == std::string("gpucb (seed 9): boom"));
}

TEST_CASE("config layering and round trip") {
    CliConfig cfg;
    apply_config(cfg, nlohmann::json::parse(R"({"benchmark":"hartmann3","lengthscale":0.3})"));
    REQUIRE(cfg.spec.kernel.has_value());
    CHECK(cfg.spec.kernel->lengthscales() == std::vector<double>(3, 0.3));
    CHECK(cfg.spec.kernel->family() == default_kernel("hartmann3").family());
    apply_config(cfg, nlohmann::json::parse(R"({"kernel":"matern52","budget":12,"seed":5})"));
    CHECK(cfg.spec.kernel->family() == KernelFamily::Matern52);
    CHECK(cfg.spec.kernel->lengthscales() == std::vector<double>(3, 0.3));
    CHECK(cfg.spec.budget == 12);

    CliConfig back;
    apply_config(back, to_json(cfg));
    CHECK(back == cfg);

    CliConfig plain;
    CliConfig plain_back;
    apply_config(plain_back, to_json(plain));
    CHECK(plain_back == plain);
    CHECK_FALSE(plain_back.spec.kernel.has_value());

    CHECK_THROWS_AS(apply_config(cfg, nlohmann::json::parse(R"({"bogus":1})")), std::invalid_argument);
    CHECK_THROWS_AS(apply_config(cfg, nlohmann::json::parse(R"({"budget":"ten"})")), std::invalid_argument);
    CHECK_THROWS_AS(apply_config(cfg, nlohmann::json::parse(R"({"budget":-3})")), std::invalid_argument);
    CHECK_THROWS_AS(apply_config(cfg, nlohmann::json::parse(R"([1,2])")), std::invalid_argument);
    CHECK_THROWS_AS(apply_config(cfg, nlohmann::json::parse(R"({"algorithms":"soo,x"})")),
                    std::invalid_argument);
}

TEST_CASE("regret plot") {
    CurveSummary s;
    s.benchmark = "a<b";
    s.budget = 4;
    AlgorithmCurve c;
    c.algorithm = Algorithm::Bamsoo;
    c.mean = {0.0, -5.0, -16.0, -16.0};
    c.std = {0.5, 1.0, 0.0, 0.0};
    s.curves.push_back(c);
    const std::string svg = render_regret_svg(s);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("a&lt;b") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    CHECK(svg.find("BaMSOO") != std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);
}
