#pragma once

#include <string>

#include <json.hpp>

#include "optree/harness.hpp"

namespace optree {

/// Everything `optree run` needs: the experiment plus output options.
struct CliConfig {
    ExperimentSpec spec;
    std::string out_dir = "out";
    bool plot = false;

    bool operator==(const CliConfig&) const = default;
};

/// Flat JSON keys accepted by config files and produced by dump-config.
const std::vector<std::string>& config_keys();

/// Applies the keys of a flat JSON object on top of `cfg`. Unknown keys,
/// wrong types and nested values throw std::invalid_argument. The kernel
/// keys (kernel, lengthscale, signal_variance) start from the current kernel
/// or, when none is set yet, from default_kernel(benchmark).
void apply_config(CliConfig& cfg, const nlohmann::json& obj);

/// Reads and applies a JSON file. Throws std::invalid_argument on parse
/// errors (with the file name) or bad keys.
void apply_config_file(CliConfig& cfg, const std::string& path);

nlohmann::json to_json(const CliConfig& cfg);

}  // namespace optree
