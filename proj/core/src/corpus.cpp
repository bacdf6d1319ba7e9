#include "lesionseg/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "lesionseg/error.hpp"
#include "lesionseg/io.hpp"
#include "lesionseg/overlay.hpp"

namespace lesionseg {
namespace fs = std::filesystem;
namespace {

std::optional<fs::path> find_raster(const fs::path& dir, const std::string& stem) {
  for (const char* ext : {".png", ".pgm"}) {
    fs::path p = dir / (stem + ext);
    if (fs::is_regular_file(p)) return p;
  }
  return std::nullopt;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Keeps one CSV cell per error message.
std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

struct CaseOutcome {
  std::vector<CaseMetrics> rows;
  std::vector<SweepPoint> sweep;
};

CaseOutcome run_case(const CorpusCase& c, const BenchmarkOptions& opts) {
  CaseOutcome out;
  std::optional<GrayImage> image;
  std::optional<BinaryMask> truth;
  RegionOfInterest roi;
  std::string load_error;
  try {
    image = load_image(c.image);
    truth = load_mask(c.truth);
    if (truth->width() != image->width() || truth->height() != image->height()) {
      throw ShapeMismatchError("truth mask shape differs from image shape");
    }
    roi = c.roi ? load_roi(*c.roi) : RegionOfInterest::full(image->width(), image->height());
    roi.validate(image->width(), image->height());
  } catch (const std::exception& e) {
    load_error = e.what();
  }

  fs::path case_dir;
  if (!opts.mask_dir.empty() && load_error.empty()) {
    case_dir = opts.mask_dir / c.id;
    fs::create_directories(case_dir);
  }

  for (const PipelineConfig& cfg : opts.methods) {
    CaseMetrics row;
    if (load_error.empty()) {
      try {
        const BinaryMask mask = segment_image(*image, roi, cfg);
        row = evaluate_case(mask, *truth, opts.spacing);
        if (!case_dir.empty()) {
          const std::string stem(method_name(cfg.method));
          save_mask(mask, case_dir / (stem + "_mask.png"));
          save_overlay(case_dir / (stem + "_overlay.png"), *image, mask, &*truth);
        }
      } catch (const std::exception& e) {
        row = CaseMetrics{};
        row.error = e.what();
      }
    } else {
      row.error = load_error;
    }
    row.case_id = c.id;
    row.method = std::string(method_name(cfg.method));
    out.rows.push_back(std::move(row));
  }

  if (opts.marker_sweep) {
    PipelineConfig sweep_cfg;
    for (const auto& cfg : opts.methods) {
      if (cfg.method == Method::Mcwt) sweep_cfg = cfg;
    }
    sweep_cfg.method = Method::Mcwt;
    std::optional<GrayImage> prepared;
    std::string prep_error = load_error;
    if (prep_error.empty()) {
      try {
        prepared = preprocess_roi(*image, roi, sweep_cfg);
      } catch (const std::exception& e) {
        prep_error = e.what();
      }
    }
    for (int n = opts.marker_sweep->first; n <= opts.marker_sweep->second; ++n) {
      SweepPoint pt;
      pt.case_id = c.id;
      pt.n_markers = n;
      if (prep_error.empty()) {
        try {
          sweep_cfg.mcwt.n_markers = n;
          const BinaryMask region = segment_roi(*prepared, sweep_cfg);
          pt.dsc = dice(embed_roi(region, roi, image->width(), image->height()), *truth);
        } catch (const std::exception& e) {
          pt.error = e.what();
        }
      } else {
        pt.error = prep_error;
      }
      out.sweep.push_back(std::move(pt));
    }
  }
  return out;
}

}  // namespace

std::vector<CorpusCase> discover_corpus(const fs::path& root) {
  if (!fs::is_directory(root)) throw FormatError("corpus directory '" + root.string() + "' not found");
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<CorpusCase> cases;
  for (const auto& dir : dirs) {
    auto image = find_raster(dir, "image");
    auto truth = find_raster(dir, "truth");
    if (!image || !truth) continue;
    CorpusCase c{dir.filename().string(), *image, *truth, std::nullopt};
    if (fs::is_regular_file(dir / "roi.json")) c.roi = dir / "roi.json";
    cases.push_back(std::move(c));
  }
  return cases;
}

BenchmarkResult run_benchmark(const std::vector<CorpusCase>& cases, const BenchmarkOptions& opts) {
  if (opts.methods.empty()) throw ConfigError("benchmark needs at least one method");
  if (cases.empty()) throw ConfigError("benchmark corpus is empty");
  for (const auto& cfg : opts.methods) cfg.validate();
  opts.spacing.validate();
  if (opts.marker_sweep && (opts.marker_sweep->first < 1 ||
                            opts.marker_sweep->first > opts.marker_sweep->second)) {
    throw ConfigError("marker sweep range must satisfy 1 <= A <= B");
  }

  std::vector<CaseOutcome> outcomes(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) outcomes[i] = run_case(cases[i], opts);
  };
  const auto jobs = static_cast<std::size_t>(std::clamp(opts.jobs, 1, 256));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(jobs, cases.size()); ++t) pool.emplace_back(worker);
  }

  BenchmarkResult result;
  for (auto& o : outcomes) {
    std::move(o.rows.begin(), o.rows.end(), std::back_inserter(result.rows));
    std::move(o.sweep.begin(), o.sweep.end(), std::back_inserter(result.sweep));
  }
  std::vector<std::string> order;
  for (const auto& cfg : opts.methods) order.emplace_back(method_name(cfg.method));
  result.summaries = summarize_by_method(result.rows, order);
  return result;
}

std::vector<std::pair<std::string, MetricReport>> summarize_by_method(
    const std::vector<CaseMetrics>& rows, const std::vector<std::string>& method_order) {
  std::vector<std::pair<std::string, MetricReport>> out;
  for (const auto& method : method_order) {
    if (std::any_of(out.begin(), out.end(), [&](const auto& p) { return p.first == method; })) continue;
    std::vector<CaseMetrics> subset;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(subset),
                 [&](const CaseMetrics& r) { return r.method == method; });
    if (subset.empty()) continue;
    out.emplace_back(method, aggregate(std::move(subset)));
  }
  return out;
}

std::string csv_header(bool with_error) {
  std::string h = "case,method";
  for (Metric m : kAllMetrics) {
    h += ',';
    h += metric_column(m);
  }
  if (with_error) h += ",error";
  return h;
}

std::string csv_row(const CaseMetrics& m, bool with_error) {
  std::string row = m.case_id + "," + m.method;
  for (Metric metric : kAllMetrics) {
    row += ',';
    if (auto v = m.get(metric)) row += format_value(*v);
  }
  if (with_error) row += "," + sanitize(m.error);
  return row;
}

std::string summary_row(const std::string& method, const MetricReport& report, bool with_error) {
  std::string row = "SUMMARY," + method;
  for (Metric m : kAllMetrics) row += "," + format_mean_std(report.stats(m));
  if (with_error) {
    const auto failed = std::count_if(report.per_case.begin(), report.per_case.end(),
                                      [](const CaseMetrics& c) { return !c.error.empty(); });
    row += ",";
    if (failed > 0) row += "failed=" + std::to_string(failed);
  }
  return row;
}

std::string render_summary_table(const std::vector<std::pair<std::string, MetricReport>>& summaries) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %-16s %-16s %-16s %-16s %-16s\n", "Methods", "DSC", "JI",
                "HD(mm)", "PR", "RE");
  out << buf;
  for (const auto& [method, report] : summaries) {
    out << method;
    for (std::size_t pad = method.size(); pad < 11; ++pad) out << ' ';
    for (Metric m : kAllMetrics) {
      std::string cell = format_mean_std(report.stats(m));
      if (cell.empty()) cell = "n/a";
      out << cell;
      // "±" is two bytes but one column.
      const std::size_t width = cell.size() - (cell.find("\xC2\xB1") != std::string::npos ? 1 : 0);
      for (std::size_t pad = width; pad < 17; ++pad) out << ' ';
    }
    out << '\n';
  }
  return out.str();
}

std::string sweep_csv(const std::vector<SweepPoint>& sweep) {
  std::string out = "case,n_markers,dsc,error\n";
  for (const auto& p : sweep) {
    out += p.case_id + "," + std::to_string(p.n_markers) + ",";
    if (p.dsc) out += format_value(*p.dsc);
    out += "," + sanitize(p.error) + "\n";
  }
  return out;
}

void write_benchmark_outputs(const BenchmarkResult& result, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  auto write = [&](const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw FormatError("cannot write '" + p.string() + "'");
    f << text;
  };
  std::string csv = csv_header(true) + "\n";
  for (const auto& r : result.rows) csv += csv_row(r, true) + "\n";
  for (const auto& [method, report] : result.summaries) csv += summary_row(method, report, true) + "\n";
  write(out_dir / "results.csv", csv);
  write(out_dir / "summary.txt", render_summary_table(result.summaries));
  if (!result.sweep.empty()) write(out_dir / "sweep.csv", sweep_csv(result.sweep));
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  int a = 0;
  int b = 0;
  try {
    if (colon == std::string::npos) throw ConfigError("");
    std::size_t used = 0;
    a = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw ConfigError("");
    const std::string rest = text.substr(colon + 1);
    b = std::stoi(rest, &used);
    if (used != rest.size()) throw ConfigError("");
  } catch (const std::exception&) {
    throw ConfigError("range '" + text + "' must look like A:B");
  }
  if (a < 1 || a > b) throw ConfigError("range '" + text + "' must satisfy 1 <= A <= B");
  return {a, b};
}

PixelSpacing parse_spacing(const std::string& text) {
  const auto x = text.find_first_of("xX");
  PixelSpacing s;
  try {
    if (x == std::string::npos) throw ConfigError("");
    std::size_t used = 0;
    s.dx = std::stod(text.substr(0, x), &used);
    if (used != x) throw ConfigError("");
    const std::string rest = text.substr(x + 1);
    s.dy = std::stod(rest, &used);
    if (used != rest.size()) throw ConfigError("");
  } catch (const std::exception&) {
    throw ConfigError("spacing '" + text + "' must look like DXxDY");
  }
  s.validate();
  return s;
}

}  // namespace lesionseg
