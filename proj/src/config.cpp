#include "optree/config.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace optree {

using nlohmann::json;

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "benchmark",       "algorithms", "repeats",   "budget",       "eta",
        "hmax_epsilon",    "seed",       "kernel",    "lengthscale",  "signal_variance",
        "aux_starts",      "aux_random", "aux_local_iters", "aux_shrink", "aux_initial_step",
        "max_bound_checks", "jobs",      "out",       "plot"};
    return keys;
}

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
    throw std::invalid_argument("config key '" + key + "': " + why);
}

std::size_t as_count(const std::string& key, const json& v) {
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0)) {
        bad(key, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

double as_real(const std::string& key, const json& v) {
    if (!v.is_number()) bad(key, "expected a number");
    return v.get<double>();
}

std::string as_string(const std::string& key, const json& v) {
    if (!v.is_string()) bad(key, "expected a string");
    return v.get<std::string>();
}

}  // namespace

void apply_config(CliConfig& cfg, const json& obj) {
    if (!obj.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
        if (value.is_object()) bad(key, "nested objects are not supported");
    }
    ExperimentSpec& s = cfg.spec;
    try {
        // Benchmark first: the kernel defaults depend on it.
        if (obj.contains("benchmark")) {
            s.benchmark = as_string("benchmark", obj["benchmark"]);
            get_benchmark(s.benchmark);
        }
        if (obj.contains("algorithms")) {
            const json& v = obj["algorithms"];
            if (v.is_string()) {
                s.algorithms = parse_algorithm_list(v.get<std::string>());
            } else if (v.is_array()) {
                std::string joined;
                for (const auto& a : v) joined += (joined.empty() ? "" : ",") + as_string("algorithms", a);
                s.algorithms = parse_algorithm_list(joined);
            } else {
                bad("algorithms", "expected a string or an array of strings");
            }
        }
        if (obj.contains("repeats")) s.repeats = as_count("repeats", obj["repeats"]);
        if (obj.contains("budget")) s.budget = as_count("budget", obj["budget"]);
        if (obj.contains("eta")) s.eta = as_real("eta", obj["eta"]);
        if (obj.contains("hmax_epsilon")) s.hmax_epsilon = as_real("hmax_epsilon", obj["hmax_epsilon"]);
        if (obj.contains("seed")) {
            const json& v = obj["seed"];
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
                bad("seed", "expected a non-negative integer");
            }
            s.base_seed = v.get<std::uint64_t>();
        }

        if (obj.contains("kernel") || obj.contains("lengthscale") || obj.contains("signal_variance")) {
            const KernelSpec base = s.resolved_kernel();
            KernelFamily family = base.family();
            std::vector<double> ls = base.lengthscales();
            double sv = base.signal_variance();
            if (obj.contains("kernel")) family = kernel_family_from_string(as_string("kernel", obj["kernel"]));
            if (obj.contains("lengthscale")) {
                const json& v = obj["lengthscale"];
                if (v.is_number()) {
                    std::fill(ls.begin(), ls.end(), v.get<double>());
                } else if (v.is_array()) {
                    ls.clear();
                    for (const auto& e : v) ls.push_back(as_real("lengthscale", e));
                } else {
                    bad("lengthscale", "expected a number or an array of numbers");
                }
            }
            if (obj.contains("signal_variance")) sv = as_real("signal_variance", obj["signal_variance"]);
            s.kernel = KernelSpec(family, ls, sv);
        }

        if (obj.contains("aux_starts")) s.aux.n_starts = as_count("aux_starts", obj["aux_starts"]);
        if (obj.contains("aux_random")) s.aux.n_random = as_count("aux_random", obj["aux_random"]);
        if (obj.contains("aux_local_iters")) {
            s.aux.local_iters = as_count("aux_local_iters", obj["aux_local_iters"]);
        }
        if (obj.contains("aux_shrink")) s.aux.local_shrink = as_real("aux_shrink", obj["aux_shrink"]);
        if (obj.contains("aux_initial_step")) {
            s.aux.initial_step = as_real("aux_initial_step", obj["aux_initial_step"]);
        }
        if (obj.contains("max_bound_checks")) {
            s.max_bound_checks = as_count("max_bound_checks", obj["max_bound_checks"]);
        }
        if (obj.contains("jobs")) s.jobs = as_count("jobs", obj["jobs"]);
        if (obj.contains("out")) cfg.out_dir = as_string("out", obj["out"]);
        if (obj.contains("plot")) {
            if (!obj["plot"].is_boolean()) bad("plot", "expected true or false");
            cfg.plot = obj["plot"].get<bool>();
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}

void apply_config_file(CliConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    json obj;
    try {
        obj = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config file '" + path + "': " + e.what());
    }
    apply_config(cfg, obj);
}

json to_json(const CliConfig& cfg) {
    const ExperimentSpec& s = cfg.spec;
    json j;
    j["benchmark"] = s.benchmark;
    j["algorithms"] = join_algorithms(s.algorithms);
    j["repeats"] = s.repeats;
    j["budget"] = s.budget;
    j["eta"] = s.eta;
    j["hmax_epsilon"] = s.hmax_epsilon;
    j["seed"] = s.base_seed;
    if (s.kernel) {
        j["kernel"] = to_string(s.kernel->family());
        j["lengthscale"] = s.kernel->lengthscales();
        j["signal_variance"] = s.kernel->signal_variance();
    }
    j["aux_starts"] = s.aux.n_starts;
    j["aux_random"] = s.aux.n_random;
    j["aux_local_iters"] = s.aux.local_iters;
    j["aux_shrink"] = s.aux.local_shrink;
    j["aux_initial_step"] = s.aux.initial_step;
    j["max_bound_checks"] = s.max_bound_checks;
    j["jobs"] = s.jobs;
    j["out"] = cfg.out_dir;
    j["plot"] = cfg.plot;
    return j;
}

}  // namespace optree
