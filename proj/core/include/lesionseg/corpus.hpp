#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lesionseg/metrics.hpp"
#include "lesionseg/pipeline.hpp"

namespace lesionseg {

/// One benchmark case: a directory holding image.{png,pgm},
/// truth.{png,pgm} and optionally roi.json.
struct CorpusCase {
  std::string id;
  std::filesystem::path image;
  std::filesystem::path truth;
  std::optional<std::filesystem::path> roi;
};

/// Case subdirectories of `root`, sorted by name. Directories without an
/// image or truth file are skipped. Throws FormatError if `root` is missing.
std::vector<CorpusCase> discover_corpus(const std::filesystem::path& root);

struct BenchmarkOptions {
  std::vector<PipelineConfig> methods;
  PixelSpacing spacing{};
  int jobs = 1;
  /// Inclusive marker-count range for the MCWT sweep.
  std::optional<std::pair<int, int>> marker_sweep;
  /// Where per-case masks and overlays go; empty disables them.
  std::filesystem::path mask_dir;
};

struct SweepPoint {
  std::string case_id;
  int n_markers = 0;
  std::optional<double> dsc;
  std::string error;
};

struct BenchmarkResult {
  /// Case-major, methods in option order.
  std::vector<CaseMetrics> rows;
  std::vector<std::pair<std::string, MetricReport>> summaries;
  std::vector<SweepPoint> sweep;
};

/// Runs every method on every case. A failing case becomes a row with an
/// error message and the run continues. Output order does not depend on
/// `jobs`.
BenchmarkResult run_benchmark(const std::vector<CorpusCase>& cases, const BenchmarkOptions& opts);

/// Per-method aggregation of benchmark rows.
std::vector<std::pair<std::string, MetricReport>> summarize_by_method(
    const std::vector<CaseMetrics>& rows, const std::vector<std::string>& method_order);

/// "case,method,dsc,ji,hd_mm,pr,re" plus ",error" when requested.
std::string csv_header(bool with_error = false);
/// Undefined metrics become empty cells.
std::string csv_row(const CaseMetrics& m, bool with_error = false);
/// "SUMMARY,<method>,<mean±std per metric>"; the error cell holds the failed
/// case count when with_error is set.
std::string summary_row(const std::string& method, const MetricReport& report,
                        bool with_error = false);
/// Human-readable table with one row per method.
std::string render_summary_table(const std::vector<std::pair<std::string, MetricReport>>& summaries);

std::string sweep_csv(const std::vector<SweepPoint>& sweep);

/// Writes results.csv (rows + SUMMARY rows), summary.txt and, when present,
/// sweep.csv into `out_dir`.
void write_benchmark_outputs(const BenchmarkResult& result, const std::filesystem::path& out_dir);

/// Parses "A:B" with 1 <= A <= B.
std::pair<int, int> parse_range(const std::string& text);
/// Parses "DXxDY" (e.g. "0.7x0.7").
PixelSpacing parse_spacing(const std::string& text);

}  // namespace lesionseg
