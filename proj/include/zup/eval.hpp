#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zup/config.hpp"
#include "zup/volume.hpp"

namespace zup {

struct SliceScore {
    int z = 0;
    double psnr = 0.0;
    double ssim = 0.0;
};

struct MetricRow {
    std::string method;
    int factor = 0;
    std::string dataset;
    double psnr_mean = 0.0;
    double ssim_mean = 0.0;
    std::vector<SliceScore> per_slice;
};

struct EvalReport {
    std::vector<MetricRow> rows;
    nlohmann::json config;
    std::string version;
    std::string timestamp;
};

/// Methods understood by run_skip_eval.
[[nodiscard]] const std::vector<std::string>& known_methods();

/// Reconstructs `kept` at `factor` with the named method.
[[nodiscard]] Volume reconstruct(const Volume& kept, int factor, const std::string& method,
                                 const PipelineConfig& config, int threads = 0);

/// Scores `reconstruction` against `truth` at the given slice indices and
/// averages into a row. The two volumes must share lateral shape and cover
/// every index.
[[nodiscard]] MetricRow score_slices(const Volume& truth, const Volume& reconstruction,
                                     const std::vector<int>& indices, const SsimParams& ssim_params,
                                     int threads = 0);

/// Skip-frame protocol: decimate `isotropic` by `factor`, rebuild the skipped
/// slices from the kept ones with each method, and score only the skipped
/// slices. Rows are ordered by method name, then factor. Methods listed twice
/// are evaluated once.
[[nodiscard]] EvalReport run_skip_eval(const Volume& isotropic, int factor,
                                       const std::vector<std::string>& methods,
                                       const PipelineConfig& config = {}, int threads = 0);

/// UTC ISO-8601 time; honours SOURCE_DATE_EPOCH for reproducible output.
[[nodiscard]] std::string report_timestamp();

enum class ReportFormat { Json, Csv, Table };

[[nodiscard]] ReportFormat parse_report_format(const std::string& s);

[[nodiscard]] nlohmann::json report_to_json(const EvalReport& report);
[[nodiscard]] std::string report_to_csv(const EvalReport& report);
/// Methods as rows, factors as columns, each cell "PSNR / SSIM".
[[nodiscard]] std::string report_to_table(const EvalReport& report);

/// Throws ArgumentError for an empty report.
void emit_report(const EvalReport& report, const std::filesystem::path& path, ReportFormat format);

}  // namespace zup
