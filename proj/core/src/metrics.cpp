#include "lesionseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "lesionseg/error.hpp"

namespace lesionseg {
namespace {

void require_same_shape(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw ShapeMismatchError("mask shapes differ: " + std::to_string(a.width()) + "x" +
                             std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                             "x" + std::to_string(b.height()));
  }
}

// max over a of min over b of the squared scaled distance.
double directed_sq(const std::vector<Pixel>& from, const std::vector<Pixel>& to,
                   const PixelSpacing& s) {
  double worst = 0.0;
  for (const Pixel& a : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const Pixel& b : to) {
      const double dx = (a.x - b.x) * s.dx;
      const double dy = (a.y - b.y) * s.dy;
      best = std::min(best, dx * dx + dy * dy);
      if (best <= worst) break;  // cannot raise the running maximum
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth) {
  require_same_shape(pred, truth);
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i];
    const bool t = truth[i];
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double dice(const BinaryMask& pred, const BinaryMask& truth) {
  const ConfusionCounts c = confusion(pred, truth);
  const std::size_t denom = 2 * c.tp + c.fp + c.fn;
  if (denom == 0) return 1.0;
  return 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

double jaccard(const BinaryMask& pred, const BinaryMask& truth) {
  const ConfusionCounts c = confusion(pred, truth);
  const std::size_t denom = c.tp + c.fp + c.fn;
  if (denom == 0) return 1.0;
  return static_cast<double>(c.tp) / static_cast<double>(denom);
}

double hausdorff(const BinaryMask& pred, const BinaryMask& truth, const PixelSpacing& spacing) {
  require_same_shape(pred, truth);
  spacing.validate();
  if (!pred.any() || !truth.any()) {
    throw UndefinedMetricError("Hausdorff distance is undefined for an empty mask");
  }
  const auto a = boundary_pixels(pred);
  const auto b = boundary_pixels(truth);
  return std::sqrt(std::max(directed_sq(a, b, spacing), directed_sq(b, a, spacing)));
}

double precision(const BinaryMask& pred, const BinaryMask& truth) {
  const ConfusionCounts c = confusion(pred, truth);
  if (c.tp + c.fp == 0) throw UndefinedMetricError("precision is undefined for an empty prediction");
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall(const BinaryMask& pred, const BinaryMask& truth) {
  const ConfusionCounts c = confusion(pred, truth);
  if (c.tp + c.fn == 0) throw UndefinedMetricError("recall is undefined for an empty truth mask");
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

PrecisionRecall precision_recall(const BinaryMask& pred, const BinaryMask& truth) {
  return {precision(pred, truth), recall(pred, truth)};
}

std::string_view metric_column(Metric m) {
  switch (m) {
    case Metric::Dsc: return "dsc";
    case Metric::Ji: return "ji";
    case Metric::Hd: return "hd_mm";
    case Metric::Pr: return "pr";
    case Metric::Re: return "re";
  }
  return "?";
}

CaseMetrics evaluate_case(const BinaryMask& pred, const BinaryMask& truth,
                          const PixelSpacing& spacing) {
  require_same_shape(pred, truth);
  CaseMetrics m;
  auto put = [&](Metric which, auto&& compute) {
    try {
      m.values[static_cast<std::size_t>(which)] = compute();
    } catch (const UndefinedMetricError&) {
    }
  };
  put(Metric::Dsc, [&] { return dice(pred, truth); });
  put(Metric::Ji, [&] { return jaccard(pred, truth); });
  put(Metric::Hd, [&] { return hausdorff(pred, truth, spacing); });
  put(Metric::Pr, [&] { return precision(pred, truth); });
  put(Metric::Re, [&] { return recall(pred, truth); });
  return m;
}

MetricStats summarize(std::span<const std::optional<double>> values) {
  MetricStats s;
  double sum = 0.0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++s.count;
    } else {
      ++s.missing;
    }
  }
  if (s.count == 0) return s;
  s.mean = sum / static_cast<double>(s.count);
  double sq = 0.0;
  for (const auto& v : values) {
    if (v) sq += (*v - s.mean) * (*v - s.mean);
  }
  s.stddev = std::sqrt(sq / static_cast<double>(s.count));
  return s;
}

MetricReport aggregate(std::vector<CaseMetrics> cases) {
  if (cases.empty()) throw ConfigError("cannot aggregate an empty case list");
  MetricReport report;
  report.per_case = std::move(cases);
  std::vector<std::optional<double>> column(report.per_case.size());
  for (Metric m : kAllMetrics) {
    for (std::size_t i = 0; i < report.per_case.size(); ++i) column[i] = report.per_case[i].get(m);
    report.summary[static_cast<std::size_t>(m)] = summarize(column);
  }
  return report;
}

std::string format_mean_std(const MetricStats& s, int decimals) {
  if (s.count == 0) return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f\xC2\xB1%.*f", decimals, s.mean, decimals, s.stddev);
  return buf;
}

}  // namespace lesionseg
