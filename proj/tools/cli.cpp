#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "image_files.hpp"
#include "zup/baseline.hpp"
#include "zup/config.hpp"
#include "zup/eval.hpp"
#include "zup/flow.hpp"
#include "zup/midframe.hpp"
#include "zup/synthetic.hpp"
#include "zup/volume_io.hpp"

namespace zup::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Raised for invalid argument combinations found after parsing.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<int> parse_int_list(const std::string& text, char sep, std::size_t count, const char* what) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(sep, start), text.size());
        int value = 0;
        const auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + end, value);
        if (ec != std::errc{} || ptr != text.data() + end) {
            throw UsageError(std::string(what) + ": cannot parse '" + text + "'");
        }
        out.push_back(value);
        start = end + 1;
    }
    if (out.size() != count) throw UsageError(std::string(what) + ": expected " + std::to_string(count) + " values");
    return out;
}

std::vector<double> parse_double_list(const std::string& text, std::size_t count, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string(what) + ": cannot parse '" + text + "'");
        }
    }
    if (out.size() != count) throw UsageError(std::string(what) + ": expected " + std::to_string(count) + " values");
    return out;
}

std::vector<std::string> split_methods(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (std::ranges::find(known_methods(), item) == known_methods().end()) {
            throw UsageError("unknown method '" + item + "' (known: average, bicubic, flow, linear, nearest)");
        }
        out.push_back(item);
    }
    if (out.empty()) throw UsageError("--methods: no methods given");
    return out;
}

bool is_power_of_two(int f) { return f >= 2 && (f & (f - 1)) == 0; }

/// Flags shared by all subcommands.
struct Common {
    int verbosity = 0;
    int threads = 0;
    std::string config_path;
};

/// Config overrides that may come from the command line.
struct FlowOverrides {
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* levels_opt = nullptr;
    CLI::Option* split_opt = nullptr;
    double alpha = FlowConfig{}.smoothness_weight;
    int levels = FlowConfig{}.max_levels;
    std::string split = "symmetric";

    void attach(CLI::App* cmd) {
        alpha_opt = cmd->add_option("--alpha", alpha, "Flow smoothness weight (8-bit intensity scale)")
                        ->check(CLI::PositiveNumber);
        levels_opt = cmd->add_option("--levels", levels, "Maximum pyramid levels")->check(CLI::Range(1, 16));
        split_opt = cmd->add_option("--split-mode", split, "Mid-frame flow splitting")
                        ->check(CLI::IsMember({"simple", "symmetric"}));
    }

    void apply(PipelineConfig& c) const {
        if (alpha_opt->count() > 0) c.synthesis.flow.smoothness_weight = alpha;
        if (levels_opt->count() > 0) c.synthesis.flow.max_levels = levels;
        if (split_opt->count() > 0) c.synthesis.split_mode = parse_split_mode(split);
    }
};

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ZUP_THREADS"); env != nullptr && *env != '\0') {
        int n = 0;
        const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), n);
        if (ec == std::errc{} && *ptr == '\0' && n > 0) return n;
        spdlog::warn("ignoring invalid ZUP_THREADS='{}'", env);
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

PipelineConfig base_config(const Common& common) {
    return common.config_path.empty() ? PipelineConfig{} : load_config(common.config_path);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- upscale

struct UpscaleArgs {
    std::string input;
    std::string output;
    int factor = 2;
    std::string method = "flow";
    FlowOverrides flow;
};

int cmd_upscale(const UpscaleArgs& a, const Common& common, std::ostream& out) {
    if (!is_power_of_two(a.factor)) {
        throw UsageError("--factor must be a power of two (2^n: 2, 4, 8, ...), got " + std::to_string(a.factor));
    }
    if (a.method != "flow" && a.factor > 8) {
        throw UsageError("--method " + a.method + " supports factors 2, 4 and 8 only");
    }
    PipelineConfig config = base_config(common);
    a.flow.apply(config);
    config.synthesis.validate();
    const int threads = resolve_threads(common.threads);

    const auto t0 = std::chrono::steady_clock::now();
    const Volume input = read_volume(a.input);
    Volume result;
    if (a.method == "flow") {
        const ProgressSink sink = [](const UpscaleProgress& p) {
            if (p.done == p.total) {
                spdlog::info("round {}/{} complete ({} pairs)", p.round, p.rounds, p.total);
            } else {
                spdlog::debug("round {}/{}: {}/{} pairs", p.round, p.rounds, p.done, p.total);
            }
        };
        result = upscale_volume(input, a.factor, config.synthesis, sink, threads);
    } else {
        result = reconstruct(input, a.factor, a.method, config, threads);
    }
    write_volume(result, a.output);
    out << input.depth() << " → " << result.depth() << " slices (" << a.method << ", x" << a.factor
        << ", " << input.height() << "x" << input.width() << ") in " << std::fixed << std::setprecision(2)
        << seconds_since(t0) << " s\n";
    return kOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    std::string input;
    int factor = 2;
    std::string methods = "average,bicubic,flow";
    std::string report;
    std::string format = "json";
    std::string dataset;
    CLI::Option* methods_opt = nullptr;
    CLI::Option* dataset_opt = nullptr;
    FlowOverrides flow;
};

int cmd_eval(const EvalArgs& a, const Common& common, std::ostream& out) {
    if (!is_power_of_two(a.factor) || a.factor > 8) {
        throw UsageError("--factor must be 2, 4 or 8 (2^n), got " + std::to_string(a.factor));
    }
    PipelineConfig config = base_config(common);
    a.flow.apply(config);
    if (a.methods_opt->count() > 0 || common.config_path.empty()) config.methods = split_methods(a.methods);
    if (a.dataset_opt->count() > 0) config.dataset = a.dataset;
    config.synthesis.validate();
    const ReportFormat format = parse_report_format(a.format);

    const Volume input = read_volume(a.input);
    const EvalReport report = run_skip_eval(input, a.factor, config.methods, config, resolve_threads(common.threads));
    if (!a.report.empty()) emit_report(report, a.report, format);
    out << report_to_table(report);
    return kOk;
}

// ---------------------------------------------------------------- prep

struct PrepArgs {
    std::string input;
    std::string sub_shape;
    int max_count = 120;
    std::string out_dir;
    bool triplets = false;
};

int cmd_prep(const PrepArgs& a, std::ostream& out) {
    const auto dims = parse_int_list(a.sub_shape, 'x', 3, "--sub-shape");
    const Volume input = read_volume(a.input);
    const auto tiles = crop_subvolumes(input, {dims[0], dims[1], dims[2]}, a.max_count);
    fs::create_directories(a.out_dir);
    json manifest = {{"source", a.input}, {"sub_shape", dims}, {"subvolumes", json::array()}};
    std::size_t total_triplets = 0;
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        std::ostringstream name;
        name << "subvol_" << std::setw(4) << std::setfill('0') << i << ".tif";
        write_volume(tiles[i], fs::path(a.out_dir) / name.str());
        json entry = {{"file", name.str()}, {"index", i}};
        if (a.triplets) {
            const auto trip = tiles[i].depth() >= 3 ? triplet_indices(tiles[i].depth())
                                                    : std::vector<std::array<int, 3>>{};
            total_triplets += trip.size();
            entry["triplets"] = trip;
        }
        manifest["subvolumes"].push_back(std::move(entry));
    }
    if (a.triplets) {
        manifest["triplet_count"] = total_triplets;
        std::ofstream mf(fs::path(a.out_dir) / "triplets.json", std::ios::trunc);
        if (!mf) throw IoError("cannot write triplet manifest in '" + a.out_dir + "'");
        mf << manifest.dump(2) << '\n';
    }
    out << "wrote " << tiles.size() << " sub-volume(s) to " << a.out_dir;
    if (a.triplets) out << ", " << total_triplets << " triplet(s) in triplets.json";
    out << '\n';
    return kOk;
}

// ---------------------------------------------------------------- flow

struct FlowArgs {
    std::string a;
    std::string b;
    std::string out;
    std::string viz;
    FlowOverrides flow;
};

int cmd_flow(const FlowArgs& a, const Common& common, std::ostream& out) {
    PipelineConfig config = base_config(common);
    a.flow.apply(config);
    const Image ref = read_slice(a.a);
    const Image tgt = read_slice(a.b);
    const FlowField flow = estimate_flow(ref, tgt, config.synthesis.flow);
    write_flo(flow, a.out);
    if (!a.viz.empty()) write_rgb_png(a.viz, flow.height(), flow.width(), flow_to_rgb(flow));

    std::vector<double> u(flow.u.pixels().begin(), flow.u.pixels().end());
    std::vector<double> v(flow.v.pixels().begin(), flow.v.pixels().end());
    const auto mid = u.size() / 2;
    std::ranges::nth_element(u, u.begin() + static_cast<std::ptrdiff_t>(mid));
    std::ranges::nth_element(v, v.begin() + static_cast<std::ptrdiff_t>(mid));
    out << "flow " << flow.height() << "x" << flow.width() << " median (u, v) = (" << std::fixed
        << std::setprecision(3) << u[mid] << ", " << v[mid] << ") max |F| = " << flow.max_magnitude() << '\n';
    return kOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::string kind;
    std::string size;
    std::string out;
    std::string center;
    double radius = -1.0;
    std::string displacement = "8,0";
    std::string axis = "z";
    bool populate_all = false;
    int bit_depth = 8;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
    const auto dims = parse_int_list(a.size, 'x', 3, "--size");
    if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1) throw UsageError("--size: dimensions must be positive");
    Volume v;
    if (a.kind == "sphere") {
        synth::SphereParams p;
        if (a.radius > 0) p.radius = a.radius;
        if (!a.center.empty()) {
            const auto c = parse_double_list(a.center, 3, "--center");
            p.cz = c[0];
            p.cy = c[1];
            p.cx = c[2];
        }
        v = synth::sphere(dims[0], dims[1], dims[2], p);
    } else if (a.kind == "disk-translate") {
        synth::DiskTranslateParams p;
        if (a.radius > 0) p.radius = a.radius;
        const auto d = parse_double_list(a.displacement, 2, "--displacement");
        p.dx = d[0];
        p.dy = d[1];
        if (!a.center.empty()) {
            const auto c = parse_double_list(a.center, 2, "--center");
            p.y0 = c[0];
            p.x0 = c[1];
        }
        p.populate_interior = a.populate_all;
        v = synth::disk_translate(dims[0], dims[1], dims[2], p);
    } else {
        const synth::Axis axis = a.axis == "z" ? synth::Axis::Z : a.axis == "y" ? synth::Axis::Y : synth::Axis::X;
        v = synth::ramp(dims[0], dims[1], dims[2], axis);
    }
    v.set_source_bit_depth(a.bit_depth);
    write_volume(v, a.out);
    out << "wrote " << a.kind << " volume " << shape_string(v) << " to " << a.out << '\n';
    return kOk;
}

void configure_logging(int verbosity, std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("zup", sink);
    logger->set_pattern("[%l] %v");
    logger->set_level(verbosity >= 2 ? spdlog::level::debug
                      : verbosity == 1 ? spdlog::level::info
                                       : spdlog::level::warn);
    spdlog::set_default_logger(logger);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"zup: z-axis upscaling of anisotropic image stacks by flow-guided slice interpolation", "zup"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);

    Common common;
    const auto add_common = [&common](CLI::App* cmd) {
        cmd->add_flag("-v,--verbose", common.verbosity, "Increase log verbosity (-v info, -vv debug)");
        cmd->add_option("--threads", common.threads, "Worker threads (0: $ZUP_THREADS or all cores)")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--config", common.config_path, "JSON config file (flow.*, synth.*, eval.*)")
            ->check(CLI::ExistingFile);
    };

    UpscaleArgs up;
    auto* upscale = app.add_subcommand("upscale", "Insert synthesized slices to reach (depth-1)*factor+1");
    upscale->add_option("--input", up.input, "Input volume (.tif/.tiff/.raw)")->required()->check(CLI::ExistingFile);
    upscale->add_option("--output", up.output, "Output volume (.tif/.tiff/.raw)")->required();
    upscale->add_option("--factor", up.factor, "Upscaling factor, a power of two");
    upscale->add_option("--method", up.method, "Interpolation method")
        ->check(CLI::IsMember({"flow", "bicubic", "linear", "nearest", "average"}));
    up.flow.attach(upscale);
    add_common(upscale);

    EvalArgs ev;
    auto* eval = app.add_subcommand("eval", "Skip-frame PSNR/SSIM evaluation on an isotropic volume");
    eval->add_option("--input", ev.input, "Isotropic ground-truth volume")->required()->check(CLI::ExistingFile);
    eval->add_option("--factor", ev.factor, "Decimation factor (2, 4 or 8)");
    ev.methods_opt = eval->add_option("--methods", ev.methods, "Comma-separated methods: flow,bicubic,linear,nearest,average");
    eval->add_option("--report", ev.report, "Report path (omit to print the table only)");
    eval->add_option("--format", ev.format, "Report format")->check(CLI::IsMember({"json", "csv", "table"}));
    ev.dataset_opt = eval->add_option("--dataset", ev.dataset, "Dataset label recorded in the report");
    ev.flow.attach(eval);
    add_common(eval);

    PrepArgs pr;
    auto* prep = app.add_subcommand("prep", "Crop non-overlapping sub-volumes and list training triplets");
    prep->add_option("--input", pr.input, "Source volume")->required()->check(CLI::ExistingFile);
    prep->add_option("--sub-shape", pr.sub_shape, "Tile shape ZxHxW")->required();
    prep->add_option("--max-count", pr.max_count, "Maximum number of tiles")->check(CLI::NonNegativeNumber);
    prep->add_option("--out-dir", pr.out_dir, "Output directory")->required();
    prep->add_flag("--triplets", pr.triplets, "Also write triplets.json listing slice triplets per tile");
    add_common(prep);

    FlowArgs fl;
    auto* flow = app.add_subcommand("flow", "Estimate dense flow between two slices");
    flow->add_option("--a", fl.a, "Reference image (.png/.tif)")->required()->check(CLI::ExistingFile);
    flow->add_option("--b", fl.b, "Target image (.png/.tif)")->required()->check(CLI::ExistingFile);
    flow->add_option("--out", fl.out, "Output .flo path")->required();
    flow->add_option("--viz", fl.viz, "Optional colour-wheel PNG");
    fl.flow.attach(flow);
    add_common(flow);

    SynthArgs sy;
    auto* synth_cmd = app.add_subcommand("synth", "Generate analytic test volumes");
    synth_cmd->add_option("--kind", sy.kind, "Volume kind")->required()->check(
        CLI::IsMember({"sphere", "disk-translate", "ramp"}));
    synth_cmd->add_option("--size", sy.size, "Volume shape ZxHxW")->required();
    synth_cmd->add_option("--out", sy.out, "Output volume")->required();
    synth_cmd->add_option("--center", sy.center, "sphere: z,y,x (default centre); disk-translate: y0,x0 of the first disk");
    synth_cmd->add_option("--radius", sy.radius, "sphere radius (default 24) or disk radius (default 10)");
    synth_cmd->add_option("--displacement", sy.displacement, "disk-translate: dx,dy from first to last slice");
    synth_cmd->add_option("--axis", sy.axis, "ramp axis")->check(CLI::IsMember({"z", "y", "x"}));
    synth_cmd->add_flag("--populate-all", sy.populate_all, "disk-translate: draw interior slices too");
    synth_cmd->add_option("--bit-depth", sy.bit_depth, "Stored bit depth")->check(CLI::IsMember({8, 16}));
    add_common(synth_cmd);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    configure_logging(common.verbosity, err);
    try {
        if (*upscale) return cmd_upscale(up, common, out);
        if (*eval) return cmd_eval(ev, common, out);
        if (*prep) return cmd_prep(pr, out);
        if (*flow) return cmd_flow(fl, common, out);
        return cmd_synth(sy, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kProcessingError;
    }
}

}  // namespace zup::cli
