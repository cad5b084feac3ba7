// optree: run optimizer experiments and the invariant suites.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "optree/config.hpp"
#include "optree/harness.hpp"
#include "optree/plot.hpp"
#include "optree/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace optree;

namespace {

// Bad arguments and configuration, reported with exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentFlags {
    std::string config_file;
    std::string benchmark, algos, kernel, out;
    std::vector<double> lengthscale;
    std::size_t repeats = 0, budget = 0, jobs = 0, max_bound_checks = 0;
    std::size_t aux_starts = 0, aux_random = 0, aux_local_iters = 0;
    double eta = 0, hmax_epsilon = 0, signal_variance = 0;
    std::uint64_t seed = 0;
    bool plot = false;

    std::vector<CLI::Option*> options;

    void attach(CLI::App& app) {
        auto add = [&](CLI::Option* o) { options.push_back(o); };
        app.add_option("--config", config_file, "JSON config file (flat keys)")->check(CLI::ExistingFile);
        add(app.add_option("--benchmark", benchmark, "branin, rosenbrock2, hartmann3, hartmann6, shekel10"));
        add(app.add_option("--algos", algos, "comma-separated subset of soo,bamsoo,gpucb"));
        add(app.add_option("--repeats", repeats, "runs per stochastic algorithm"));
        add(app.add_option("--budget", budget, "objective evaluations per run"));
        add(app.add_option("--eta", eta, "confidence parameter in (0,1)"));
        add(app.add_option("--seed", seed, "base seed (falls back to $OPTOPT_SEED)"));
        add(app.add_option("--out", out, "output directory"));
        add(app.add_flag("--plot", plot, "also write regret.svg"));
        add(app.add_option("--jobs", jobs, "parallel runs"));
        add(app.add_option("--kernel", kernel, "se or matern52"));
        add(app.add_option("--lengthscale", lengthscale, "one value, or one per dimension"));
        add(app.add_option("--signal-variance", signal_variance, "kernel signal variance"));
        add(app.add_option("--hmax-epsilon", hmax_epsilon, "depth cap exponent"));
        add(app.add_option("--max-bound-checks", max_bound_checks, "BaMSOO gate cap"));
        add(app.add_option("--aux-starts", aux_starts, "GP-UCB local search starts"));
        add(app.add_option("--aux-random", aux_random, "GP-UCB random candidates"));
        add(app.add_option("--aux-local-iters", aux_local_iters, "GP-UCB pattern search iterations"));
    }

    bool given(const std::string& name) const {
        for (auto* o : options) {
            if (o->get_name() == name) return o->count() > 0;
        }
        return false;
    }

    json as_json() const {
        json j = json::object();
        if (given("--benchmark")) j["benchmark"] = benchmark;
        if (given("--algos")) j["algorithms"] = algos;
        if (given("--repeats")) j["repeats"] = repeats;
        if (given("--budget")) j["budget"] = budget;
        if (given("--eta")) j["eta"] = eta;
        if (given("--seed")) j["seed"] = seed;
        if (given("--out")) j["out"] = out;
        if (given("--plot")) j["plot"] = plot;
        if (given("--jobs")) j["jobs"] = jobs;
        if (given("--kernel")) j["kernel"] = kernel;
        if (given("--lengthscale")) {
            if (lengthscale.size() == 1) {
                j["lengthscale"] = lengthscale.front();
            } else {
                j["lengthscale"] = lengthscale;
            }
        }
        if (given("--signal-variance")) j["signal_variance"] = signal_variance;
        if (given("--hmax-epsilon")) j["hmax_epsilon"] = hmax_epsilon;
        if (given("--max-bound-checks")) j["max_bound_checks"] = max_bound_checks;
        if (given("--aux-starts")) j["aux_starts"] = aux_starts;
        if (given("--aux-random")) j["aux_random"] = aux_random;
        if (given("--aux-local-iters")) j["aux_local_iters"] = aux_local_iters;
        return j;
    }
};

// Layers: defaults, $OPTOPT_SEED, config file, flags.
CliConfig resolve(const ExperimentFlags& flags, bool require_benchmark) {
    CliConfig cfg;
    bool has_benchmark = false;
    try {
        if (const char* env = std::getenv("OPTOPT_SEED"); env != nullptr && *env != '\0') {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument(env);
            cfg.spec.base_seed = v;
        }
    } catch (const std::exception&) {
        throw UsageError("OPTOPT_SEED must be a non-negative integer");
    }
    try {
        if (!flags.config_file.empty()) {
            std::ifstream in(flags.config_file);
            json file;
            try {
                file = json::parse(in);
            } catch (const json::parse_error& e) {
                throw std::invalid_argument("config file '" + flags.config_file + "': " + e.what());
            }
            has_benchmark = file.is_object() && file.contains("benchmark");
            apply_config(cfg, file);
        }
        const json overrides = flags.as_json();
        has_benchmark = has_benchmark || overrides.contains("benchmark");
        apply_config(cfg, overrides);
        cfg.spec.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (require_benchmark && !has_benchmark) {
        throw UsageError("--benchmark is required (or set \"benchmark\" in --config)");
    }
    return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("error writing " + path.string());
}

int cmd_run(const CliConfig& cfg) {
    const ExperimentResult result = run_experiment(cfg.spec);
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);

    std::ostringstream raw, summary;
    write_raw_csv(raw, result);
    write_summary_csv(summary, result.summary);
    write_file(dir / "raw.csv", raw.str());
    write_file(dir / "summary.csv", summary.str());
    const TimingReport timing = timing_report(result);
    write_file(dir / "timing.txt", timing.text());
    if (cfg.plot) write_file(dir / "regret.svg", render_regret_svg(result.summary));

    std::cout << cfg.spec.benchmark << ", budget " << cfg.spec.budget << ", kernel "
              << to_string(cfg.spec.resolved_kernel().family()) << '\n';
    for (const auto& c : result.summary.curves) {
        std::cout << "  " << to_string(c.algorithm) << ": runs " << c.runs
                  << ", final median log10 regret " << c.final_median() << ", total "
                  << c.total_wall_s << " s\n";
    }
    std::cout << "wrote " << dir.string() << '\n';
    return 0;
}

int cmd_verify(const std::string& suite, std::size_t trials, std::uint64_t seed) {
    bool ok = true;
    for (const SuiteReport& r : run_verify_suite(suite, trials, seed)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.failures << '/'
                  << r.trials << " failed (allowed " << r.allowed << ")";
        for (const auto& note : r.notes) std::cout << "; " << note;
        std::cout << '\n';
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tree-based and GP-based global optimization experiments"};
    app.require_subcommand(1);

    ExperimentFlags run_flags;
    auto* run = app.add_subcommand("run", "Run an experiment and write CSV/SVG outputs");
    run_flags.attach(*run);

    ExperimentFlags dump_flags;
    auto* dump = app.add_subcommand("dump-config", "Print the resolved configuration as JSON");
    dump_flags.attach(*dump);

    std::string suite = "all";
    std::size_t trials = 100;
    std::uint64_t verify_seed = 0;
    auto* verify = app.add_subcommand("verify", "Run invariant property suites");
    verify->add_option("--suite", suite, "variance-bound, coverage, bn-growth or all")
        ->check(CLI::IsMember(verify_suite_names()));
    verify->add_option("--trials", trials, "trials per suite")->check(CLI::PositiveNumber);
    verify->add_option("--seed", verify_seed, "seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*run) return cmd_run(resolve(run_flags, true));
        if (*dump) {
            std::cout << to_json(resolve(dump_flags, false)).dump(2) << '\n';
            return 0;
        }
        if (*verify) return cmd_verify(suite, trials, verify_seed);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << (*run ? run->help() : app.help());
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
