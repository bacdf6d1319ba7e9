#include "lesionseg/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lesionseg/error.hpp"

namespace lesionseg {
namespace {

std::vector<double> distinct_values(const GrayImage& img) {
  std::vector<double> v(img.pixels().begin(), img.pixels().end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Nearest centroid per pixel, ties to the lower index. Returns the objective.
double assign(const GrayImage& img, const std::vector<double>& centroids,
              std::vector<int>& labels) {
  double objective = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double x = img[i];
    int best = 0;
    double best_d = (x - centroids[0]) * (x - centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
      const double d = (x - centroids[c]) * (x - centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    labels[i] = best;
    objective += best_d;
  }
  return objective;
}

}  // namespace

void KmeansConfig::validate() const {
  if (k < 1) throw ConfigError("k must be >= 1, got " + std::to_string(k));
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (!(tol >= 0.0) || !std::isfinite(tol)) throw ConfigError("tol must be finite and >= 0");
}

std::vector<double> init_centroids_farthest(const GrayImage& img, int k) {
  if (k < 1) throw ConfigError("k must be >= 1, got " + std::to_string(k));
  const std::vector<double> values = distinct_values(img);
  if (values.size() < static_cast<std::size_t>(k)) {
    throw DegenerateInputError("image has " + std::to_string(values.size()) +
                               " distinct intensities, fewer than k=" + std::to_string(k));
  }
  std::vector<double> chosen{values.front()};
  if (k == 1) return chosen;
  chosen.push_back(values.back());

  // Distance from each candidate to its nearest chosen centroid.
  std::vector<double> nearest(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    nearest[i] = std::min(values[i] - values.front(), values.back() - values[i]);
  }
  while (chosen.size() < static_cast<std::size_t>(k)) {
    std::size_t pick = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (nearest[i] > best) {  // strict: ascending scan keeps the smaller value on ties
        best = nearest[i];
        pick = i;
      }
    }
    chosen.push_back(values[pick]);
    for (std::size_t i = 0; i < values.size(); ++i) {
      nearest[i] = std::min(nearest[i], std::abs(values[i] - values[pick]));
    }
  }
  return chosen;
}

double kmeans_objective(const GrayImage& img, const LabelMap& labels,
                        const std::vector<double>& centroids) {
  double s = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double d = img[i] - centroids[static_cast<std::size_t>(labels[i])];
    s += d * d;
  }
  return s;
}

KmeansResult kmeans_cluster(const GrayImage& img, const KmeansConfig& cfg) {
  cfg.validate();
  return kmeans_refine(img, init_centroids_farthest(img, cfg.k), cfg);
}

KmeansResult kmeans_refine(const GrayImage& img, std::vector<double> centroids,
                           const KmeansConfig& cfg) {
  KmeansConfig c = cfg;
  c.k = static_cast<int>(centroids.size());
  c.validate();
  if (img.empty()) throw DegenerateInputError("empty image");

  const auto k = centroids.size();
  const std::size_t n = img.size();
  std::vector<int> labels(n, 0);
  std::vector<int> previous;
  std::vector<double> sum(k);
  std::vector<std::size_t> count(k);

  KmeansResult result;
  for (int iter = 0; iter < c.max_iter; ++iter) {
    result.objective_trace.push_back(assign(img, centroids, labels));
    ++result.iterations;
    // Same assignment as last round: centroids are already its means.
    if (labels == previous) break;
    // Out of iterations: stop here so labels match the returned centroids.
    if (iter + 1 == c.max_iter) break;
    previous = labels;

    std::fill(sum.begin(), sum.end(), 0.0);
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto l = static_cast<std::size_t>(labels[i]);
      sum[l] += img[i];
      ++count[l];
    }
    double movement = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (count[j] == 0) continue;
      const double updated = std::clamp(sum[j] / static_cast<double>(count[j]), 0.0, 1.0);
      movement = std::max(movement, std::abs(updated - centroids[j]));
      centroids[j] = updated;
    }
    // Empty clusters take the pixel farthest from its own centroid.
    for (std::size_t j = 0; j < k; ++j) {
      if (count[j] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(img[i] - centroids[static_cast<std::size_t>(labels[i])]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      movement = std::max(movement, std::abs(img[far] - centroids[j]));
      centroids[j] = img[far];
      const auto old = static_cast<std::size_t>(labels[far]);
      --count[old];
      labels[far] = static_cast<int>(j);
      count[j] = 1;
    }
    if (movement <= c.tol) {
      result.objective_trace.push_back(assign(img, centroids, labels));
      break;
    }
  }
  result.labels = LabelMap(img.width(), img.height(), c.k, std::move(labels));
  result.centroids = std::move(centroids);
  return result;
}

}  // namespace lesionseg
