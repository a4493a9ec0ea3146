#include "zup/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "zup/baseline.hpp"
#include "zup/metrics.hpp"
#include "zup/version.hpp"
#include "zup/volume_io.hpp"

namespace zup {

using nlohmann::json;

const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> methods{"average", "bicubic", "flow", "linear", "nearest"};
    return methods;
}

Volume reconstruct(const Volume& kept, int factor, const std::string& method, const PipelineConfig& config,
                   int threads) {
    if (method == "flow") return upscale_volume(kept, factor, config.synthesis, {}, threads);
    if (method == "bicubic") return interp_z(kept, factor, {KernelKind::CubicConvolution}, threads);
    if (method == "linear") return interp_z(kept, factor, {KernelKind::Linear}, threads);
    if (method == "nearest") return interp_z(kept, factor, {KernelKind::Nearest}, threads);
    if (method == "average") return average_z(kept, factor);
    throw ArgumentError("unknown method '" + method + "'");
}

MetricRow score_slices(const Volume& truth, const Volume& recon, const std::vector<int>& indices,
                       const SsimParams& ssim_params, int threads) {
    if (truth.height() != recon.height() || truth.width() != recon.width()) {
        throw ShapeError("score_slices: lateral shapes differ");
    }
    if (indices.empty()) throw ArgumentError("score_slices: no slices to score");
    MetricRow row;
    double psum = 0.0;
    double ssum = 0.0;
    int prev = -1;
    for (const int z : indices) {
        if (z <= prev) throw ArgumentError("score_slices: indices must be strictly increasing");
        if (z >= truth.depth() || z >= recon.depth()) throw ArgumentError("score_slices: index out of range");
        prev = z;
        const Image t = truth.slice(z);
        const Image r = recon.slice(z);
        SliceScore s{z, psnr(t, r), ssim(t, r, ssim_params, threads)};
        psum += s.psnr;
        ssum += s.ssim;
        row.per_slice.push_back(s);
    }
    row.psnr_mean = psum / static_cast<double>(indices.size());
    row.ssim_mean = ssum / static_cast<double>(indices.size());
    return row;
}

EvalReport run_skip_eval(const Volume& isotropic, int factor, const std::vector<std::string>& methods,
                         const PipelineConfig& config, int threads) {
    if (methods.empty()) throw ArgumentError("run_skip_eval: no methods requested");
    for (const auto& m : methods) {
        if (std::ranges::find(known_methods(), m) == known_methods().end()) {
            throw ArgumentError("unknown method '" + m + "' (known: average, bicubic, flow, linear, nearest)");
        }
    }
    // The kept stack is a separate value: no method can see the withheld slices.
    const Decimation dec = decimate_z(isotropic, factor);

    const std::set<std::string> ordered(methods.begin(), methods.end());
    EvalReport report;
    for (const auto& method : ordered) {
        const Volume recon = reconstruct(dec.kept, factor, method, config, threads);
        MetricRow row = score_slices(isotropic, recon, dec.skipped_indices, config.ssim, threads);
        row.method = method;
        row.factor = factor;
        row.dataset = config.dataset;
        report.rows.push_back(std::move(row));
    }
    std::ranges::stable_sort(report.rows, [](const MetricRow& a, const MetricRow& b) {
        return std::tie(a.method, a.factor) < std::tie(b.method, b.factor);
    });
    report.config = to_json(config);
    report.config["eval"]["methods"] = std::vector<std::string>(ordered.begin(), ordered.end());
    report.config["eval"]["factor"] = factor;
    report.config["eval"]["trimmed_slices"] = dec.trimmed;
    report.config["eval"]["aggregation"] = "per-slice mean";
    report.version = kVersion;
    report.timestamp = report_timestamp();
    return report;
}

std::string report_timestamp() {
    std::time_t t = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
        t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

ReportFormat parse_report_format(const std::string& s) {
    if (s == "json") return ReportFormat::Json;
    if (s == "csv") return ReportFormat::Csv;
    if (s == "table" || s == "text-table") return ReportFormat::Table;
    throw ArgumentError("report format must be json, csv or table, got '" + s + "'");
}

json report_to_json(const EvalReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        json slices = json::array();
        for (const auto& s : r.per_slice) slices.push_back({{"z", s.z}, {"psnr", s.psnr}, {"ssim", s.ssim}});
        rows.push_back({{"method", r.method},
                        {"factor", r.factor},
                        {"dataset", r.dataset},
                        {"psnr_mean", r.psnr_mean},
                        {"ssim_mean", r.ssim_mean},
                        {"per_slice", std::move(slices)}});
    }
    return {{"rows", std::move(rows)},
            {"config", report.config},
            {"version", report.version},
            {"timestamp", report.timestamp}};
}

namespace {

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

}  // namespace

std::string report_to_csv(const EvalReport& report) {
    std::ostringstream os;
    os << "method,factor,dataset,psnr_mean,ssim_mean\n";
    os << std::setprecision(17);
    for (const auto& r : report.rows) {
        os << r.method << ',' << r.factor << ',' << r.dataset << ',' << r.psnr_mean << ',' << r.ssim_mean << '\n';
    }
    return os.str();
}

std::string report_to_table(const EvalReport& report) {
    std::set<int> factors;
    std::vector<std::string> methods;
    std::map<std::pair<std::string, int>, const MetricRow*> cells;
    for (const auto& r : report.rows) {
        factors.insert(r.factor);
        if (std::ranges::find(methods, r.method) == methods.end()) methods.push_back(r.method);
        cells[{r.method, r.factor}] = &r;
    }
    const std::string dataset = report.rows.empty() ? "" : report.rows.front().dataset;
    constexpr int kMethodCol = 10;
    constexpr int kCell = 18;
    std::ostringstream os;
    os << std::left << std::setw(kMethodCol) << "Method";
    for (const int f : factors) os << std::setw(kCell) << ("x" + std::to_string(f) + " PSNR/SSIM");
    os << "\n" << std::string(kMethodCol + kCell * factors.size(), '-') << "\n";
    for (const auto& m : methods) {
        os << std::setw(kMethodCol) << m;
        for (const int f : factors) {
            const auto it = cells.find({m, f});
            os << std::setw(kCell)
               << (it == cells.end() ? std::string("-")
                                     : fixed(it->second->psnr_mean, 2) + " / " + fixed(it->second->ssim_mean, 3));
        }
        os << "\n";
    }
    os << "dataset: " << dataset << "; per-slice mean over skipped slices\n";
    return os.str();
}

void emit_report(const EvalReport& report, const std::filesystem::path& path, ReportFormat format) {
    if (report.rows.empty()) throw ArgumentError("emit_report: report has no rows");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    switch (format) {
        case ReportFormat::Json:
            out << report_to_json(report).dump(2) << '\n';
            break;
        case ReportFormat::Csv:
            out << report_to_csv(report);
            break;
        case ReportFormat::Table:
            out << report_to_table(report);
            break;
    }
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace zup
