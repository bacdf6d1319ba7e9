#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lesionseg/image.hpp"

namespace lesionseg {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Throws ShapeMismatchError if the masks differ in shape.
ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth);

/// 2tp / (2tp + fp + fn). Two empty masks agree perfectly (1.0).
double dice(const BinaryMask& pred, const BinaryMask& truth);

/// tp / (tp + fp + fn). Two empty masks agree perfectly (1.0).
double jaccard(const BinaryMask& pred, const BinaryMask& truth);

/// Symmetric Hausdorff distance between the boundary pixel sets, in the units
/// of `spacing`. Throws UndefinedMetricError if either mask is empty.
double hausdorff(const BinaryMask& pred, const BinaryMask& truth,
                 const PixelSpacing& spacing = {});

/// tp / (tp + fp); undefined for an empty prediction.
double precision(const BinaryMask& pred, const BinaryMask& truth);
/// tp / (tp + fn); undefined for an empty truth mask.
double recall(const BinaryMask& pred, const BinaryMask& truth);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};
/// Throws UndefinedMetricError if either value is undefined.
PrecisionRecall precision_recall(const BinaryMask& pred, const BinaryMask& truth);

enum class Metric { Dsc = 0, Ji, Hd, Pr, Re };
inline constexpr std::size_t kMetricCount = 5;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::Dsc, Metric::Ji, Metric::Hd, Metric::Pr, Metric::Re};

/// CSV column name: dsc, ji, hd_mm, pr, re.
std::string_view metric_column(Metric m);

/// All five metrics for one segmentation. Undefined metrics stay empty; a
/// failed case carries `error` and no values.
struct CaseMetrics {
  std::string case_id;
  std::string method;
  std::array<std::optional<double>, kMetricCount> values{};
  std::string error;

  std::optional<double> get(Metric m) const { return values[static_cast<std::size_t>(m)]; }
};

CaseMetrics evaluate_case(const BinaryMask& pred, const BinaryMask& truth,
                          const PixelSpacing& spacing = {});

struct MetricStats {
  std::size_t count = 0;    // cases contributing
  std::size_t missing = 0;  // cases where the metric was undefined
  double mean = 0.0;
  double stddev = 0.0;      // population (divide by count)
};

/// Mean and population standard deviation of the defined values.
MetricStats summarize(std::span<const std::optional<double>> values);

struct MetricReport {
  std::vector<CaseMetrics> per_case;
  std::array<MetricStats, kMetricCount> summary{};

  const MetricStats& stats(Metric m) const { return summary[static_cast<std::size_t>(m)]; }
};

/// Per-metric summary over every case. Throws ConfigError on empty input.
MetricReport aggregate(std::vector<CaseMetrics> cases);

/// "0.786±0.172"; empty when no case contributed.
std::string format_mean_std(const MetricStats& s, int decimals = 3);

}  // namespace lesionseg
