#include "zup/config.hpp"

#include <fstream>
#include <set>

#include "zup/error.hpp"

namespace zup {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ArgumentError("config: '" + where + "' must be an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) throw ArgumentError("config: unknown key '" + where + "." + key + "'");
    }
}

template <typename T>
void read_key(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ArgumentError(std::string("config: bad value for '") + key + "': " + e.what());
        }
    }
}

}  // namespace

SplitMode parse_split_mode(const std::string& s) {
    if (s == "simple") return SplitMode::Simple;
    if (s == "symmetric") return SplitMode::Symmetric;
    throw ArgumentError("split mode must be 'simple' or 'symmetric', got '" + s + "'");
}

std::string to_string(SplitMode mode) { return mode == SplitMode::Simple ? "simple" : "symmetric"; }

json to_json(const PipelineConfig& c) {
    const FlowConfig& f = c.synthesis.flow;
    return json{
        {"flow",
         {{"alpha", f.smoothness_weight},
          {"levels", f.max_levels},
          {"iterations", f.iterations_per_level},
          {"warps", f.warps_per_level},
          {"epsilon", f.convergence_epsilon}}},
        {"synth",
         {{"split_mode", to_string(c.synthesis.split_mode)},
          {"consistency_tolerance", c.synthesis.consistency_tolerance_px},
          {"fallback_blend", {c.synthesis.fallback_blend.first, c.synthesis.fallback_blend.second}}}},
        {"eval",
         {{"methods", c.methods},
          {"dataset", c.dataset},
          {"ssim", {{"window", c.ssim.window}, {"sigma", c.ssim.sigma}, {"k1", c.ssim.k1}, {"k2", c.ssim.k2}}}}},
    };
}

void merge_json(PipelineConfig& c, const json& j) {
    reject_unknown(j, {"flow", "synth", "eval"}, "<root>");
    if (j.contains("flow")) {
        const json& f = j["flow"];
        reject_unknown(f, {"alpha", "levels", "iterations", "warps", "epsilon"}, "flow");
        FlowConfig& fc = c.synthesis.flow;
        read_key(f, "alpha", fc.smoothness_weight);
        read_key(f, "levels", fc.max_levels);
        read_key(f, "iterations", fc.iterations_per_level);
        read_key(f, "warps", fc.warps_per_level);
        read_key(f, "epsilon", fc.convergence_epsilon);
    }
    if (j.contains("synth")) {
        const json& s = j["synth"];
        reject_unknown(s, {"split_mode", "consistency_tolerance", "fallback_blend"}, "synth");
        if (s.contains("split_mode")) c.synthesis.split_mode = parse_split_mode(s["split_mode"].get<std::string>());
        read_key(s, "consistency_tolerance", c.synthesis.consistency_tolerance_px);
        if (s.contains("fallback_blend")) {
            const auto pair = s["fallback_blend"].get<std::vector<double>>();
            if (pair.size() != 2) throw ArgumentError("config: synth.fallback_blend needs two weights");
            c.synthesis.fallback_blend = {pair[0], pair[1]};
        }
    }
    if (j.contains("eval")) {
        const json& e = j["eval"];
        reject_unknown(e, {"methods", "dataset", "ssim"}, "eval");
        read_key(e, "methods", c.methods);
        read_key(e, "dataset", c.dataset);
        if (e.contains("ssim")) {
            const json& s = e["ssim"];
            reject_unknown(s, {"window", "sigma", "k1", "k2"}, "eval.ssim");
            read_key(s, "window", c.ssim.window);
            read_key(s, "sigma", c.ssim.sigma);
            read_key(s, "k1", c.ssim.k1);
            read_key(s, "k2", c.ssim.k2);
        }
    }
    c.synthesis.validate();
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    const json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ArgumentError("config '" + path.string() + "' is not valid JSON");
    PipelineConfig c;
    merge_json(c, j);
    return c;
}

}  // namespace zup
