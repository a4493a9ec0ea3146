#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zup/metrics.hpp"
#include "zup/midframe.hpp"

namespace zup {

/// Every tunable of a run, as one tree:
///
///     { "flow":  { "alpha", "levels", "iterations", "warps", "epsilon" },
///       "synth": { "split_mode", "consistency_tolerance", "fallback_blend" },
///       "eval":  { "methods", "dataset", "ssim": { "window", "sigma", "k1", "k2" } } }
struct PipelineConfig {
    SynthesisConfig synthesis;
    std::vector<std::string> methods{"average", "bicubic", "flow"};
    std::string dataset = "unnamed";
    SsimParams ssim;
};

[[nodiscard]] nlohmann::json to_json(const PipelineConfig& config);

/// Overlays the keys present in `j` onto `config`; unknown keys are rejected.
void merge_json(PipelineConfig& config, const nlohmann::json& j);

/// Reads a JSON config file and merges it over the defaults.
[[nodiscard]] PipelineConfig load_config(const std::filesystem::path& path);

[[nodiscard]] SplitMode parse_split_mode(const std::string& s);
[[nodiscard]] std::string to_string(SplitMode mode);

}  // namespace zup
