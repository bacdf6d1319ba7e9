#include "lesionseg/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lesionseg/error.hpp"
#include "lesionseg/kmeans.hpp"

namespace lesionseg {
namespace {

constexpr double kCollapseMass = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> terms) {
  double hi = kNegInf;
  for (double t : terms) hi = std::max(hi, t);
  if (hi == kNegInf) return kNegInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - hi);
  return hi + std::log(s);
}

// Per-component log(w_j) + log N(x | j) for one pixel.
void joint_log_terms(double x, const GmmParams& params, std::vector<double>& out) {
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double w = params.weights[j];
    out[j] = w > 0.0 ? std::log(w) + log_gaussian_pdf(x, params.means[j], params.variances[j])
                     : kNegInf;
  }
}

double sample_variance(const GrayImage& img) {
  double mean = 0.0;
  for (double v : img.pixels()) mean += v;
  mean /= static_cast<double>(img.size());
  double var = 0.0;
  for (double v : img.pixels()) var += (v - mean) * (v - mean);
  return var / static_cast<double>(img.size());
}

}  // namespace

void GmmParams::validate() const {
  const std::size_t k = means.size();
  if (k == 0) throw ConfigError("mixture needs at least one component");
  if (variances.size() != k || weights.size() != k) {
    throw ConfigError("mixture parameter arrays differ in length");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    if (!(weights[j] >= 0.0)) throw ConfigError("mixture weight must be non-negative");
    if (!(variances[j] >= kVarianceFloor)) {
      throw ConfigError("component variance " + std::to_string(variances[j]) + " below floor");
    }
    if (!std::isfinite(means[j])) throw ConfigError("component mean must be finite");
    total += weights[j];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("mixture weights sum to " + std::to_string(total) + ", not 1");
  }
}

Posteriors::Posteriors(std::size_t n, std::size_t k, std::vector<double> values)
    : n_(n), k_(k), p_(std::move(values)) {
  if (p_.size() != n * k) throw ConfigError("posterior buffer size mismatch");
}

void GmmConfig::validate() const {
  if (k < 1) throw ConfigError("k must be >= 1, got " + std::to_string(k));
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (!(tol >= 0.0) || !std::isfinite(tol)) throw ConfigError("tol must be finite and >= 0");
}

double log_gaussian_pdf(double x, double mean, double var) {
  if (!(var > 0.0)) throw ConfigError("variance must be positive");
  const double d = x - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
}

double gaussian_pdf(double x, double mean, double var) {
  return std::exp(log_gaussian_pdf(x, mean, var));
}

Posteriors e_step(const GrayImage& img, const GmmParams& params) {
  params.validate();
  const auto k = static_cast<std::size_t>(params.k());
  Posteriors post(img.size(), k);
  std::vector<double> terms(k);
  for (std::size_t i = 0; i < img.size(); ++i) {
    joint_log_terms(img[i], params, terms);
    const double norm = log_sum_exp(terms);
    for (std::size_t j = 0; j < k; ++j) post.at(i, j) = std::exp(terms[j] - norm);
  }
  return post;
}

double log_likelihood(const GrayImage& img, const GmmParams& params) {
  params.validate();
  std::vector<double> terms(static_cast<std::size_t>(params.k()));
  double ll = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    joint_log_terms(img[i], params, terms);
    ll += log_sum_exp(terms);
  }
  return ll;
}

GmmParams m_step(const GrayImage& img, const Posteriors& post, bool pooled, std::uint64_t seed) {
  if (post.rows() != img.size() || post.cols() == 0) {
    throw ShapeMismatchError("posterior matrix does not match the image");
  }
  const std::size_t n = img.size();
  const std::size_t k = post.cols();
  GmmParams params;
  params.means.assign(k, 0.0);
  params.variances.assign(k, kVarianceFloor);
  params.weights.assign(k, 0.0);

  std::vector<double> mass(k, 0.0);
  std::vector<double> weighted(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      mass[j] += post.at(i, j);
      weighted[j] += post.at(i, j) * img[i];
    }
  }
  std::vector<bool> collapsed(k, false);
  for (std::size_t j = 0; j < k; ++j) {
    if (mass[j] < kCollapseMass) {
      collapsed[j] = true;
      continue;
    }
    params.means[j] = weighted[j] / mass[j];
  }

  std::vector<double> spread(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (collapsed[j]) continue;
      const double d = img[i] - params.means[j];
      spread[j] += post.at(i, j) * d * d;
    }
  }
  if (pooled) {
    double total_spread = 0.0;
    double total_mass = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (collapsed[j]) continue;
      total_spread += spread[j];
      total_mass += mass[j];
    }
    const double shared = std::max(total_spread / total_mass, kVarianceFloor);
    std::fill(params.variances.begin(), params.variances.end(), shared);
  } else {
    for (std::size_t j = 0; j < k; ++j) {
      if (!collapsed[j]) params.variances[j] = std::max(spread[j] / mass[j], kVarianceFloor);
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    params.weights[j] = mass[j] / static_cast<double>(n);
  }

  if (std::find(collapsed.begin(), collapsed.end(), true) != collapsed.end()) {
    // Worst-explained pixels: lowest maximum responsibility.
    std::vector<std::size_t> worst;
    double worst_max = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = post.row(i);
      const double m = *std::max_element(r.begin(), r.end());
      if (m < worst_max) {
        worst_max = m;
        worst.assign(1, i);
      } else if (m == worst_max) {
        worst.push_back(i);
      }
    }
    const double global_var = std::max(sample_variance(img), kVarianceFloor);
    std::size_t next = static_cast<std::size_t>(seed % worst.size());
    for (std::size_t j = 0; j < k; ++j) {
      if (!collapsed[j]) continue;
      params.means[j] = img[worst[next]];
      params.variances[j] = global_var;
      params.weights[j] = 1.0 / static_cast<double>(n);
      next = (next + 1) % worst.size();
    }
  }

  double total = 0.0;
  for (double w : params.weights) total += w;
  for (double& w : params.weights) w /= total;
  return params;
}

GmmParams gmm_init_from_kmeans(const GrayImage& img, int k) {
  KmeansConfig kc;
  kc.k = k;
  const KmeansResult km = kmeans_cluster(img, kc);
  const auto kk = static_cast<std::size_t>(k);
  std::vector<double> spread(kk, 0.0);
  const std::vector<std::size_t> counts = km.labels.histogram();
  for (std::size_t i = 0; i < img.size(); ++i) {
    const auto l = static_cast<std::size_t>(km.labels[i]);
    const double d = img[i] - km.centroids[l];
    spread[l] += d * d;
  }
  GmmParams params;
  params.means = km.centroids;
  params.variances.resize(kk);
  params.weights.resize(kk);
  const double global_var = std::max(sample_variance(img), kVarianceFloor);
  for (std::size_t j = 0; j < kk; ++j) {
    if (counts[j] == 0) {
      params.variances[j] = global_var;
      params.weights[j] = 1.0 / static_cast<double>(img.size());
      continue;
    }
    params.variances[j] = std::max(spread[j] / static_cast<double>(counts[j]), kVarianceFloor);
    params.weights[j] = static_cast<double>(counts[j]) / static_cast<double>(img.size());
  }
  double total = 0.0;
  for (double w : params.weights) total += w;
  for (double& w : params.weights) w /= total;
  return params;
}

LabelMap hard_labels(const GrayImage& img, const Posteriors& post) {
  std::vector<int> labels(img.size(), 0);
  for (std::size_t i = 0; i < img.size(); ++i) {
    const auto r = post.row(i);
    labels[i] = static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return LabelMap(img.width(), img.height(), static_cast<int>(post.cols()), std::move(labels));
}

GmmResult gmm_segment(const GrayImage& img, const GmmConfig& cfg) {
  cfg.validate();
  GmmResult result;
  GmmParams params = gmm_init_from_kmeans(img, cfg.k);
  if (cfg.pooled_variance) {
    // Start inside the pooled family, otherwise the first M-step can lower
    // the likelihood of the per-cluster start.
    double shared = 0.0;
    for (int j = 0; j < params.k(); ++j) {
      shared += params.weights[static_cast<std::size_t>(j)] * params.variances[static_cast<std::size_t>(j)];
    }
    std::fill(params.variances.begin(), params.variances.end(), std::max(shared, kVarianceFloor));
  }
  Posteriors post = e_step(img, params);
  result.ll_trace.push_back(log_likelihood(img, params));
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    params = m_step(img, post, cfg.pooled_variance, cfg.seed);
    post = e_step(img, params);
    const double ll = log_likelihood(img, params);
    const double prev = result.ll_trace.back();
    result.ll_trace.push_back(ll);
    ++result.iterations;
    if (std::abs(ll - prev) <= cfg.tol * std::abs(ll)) break;
  }
  result.labels = hard_labels(img, post);
  result.params = std::move(params);
  return result;
}

}  // namespace lesionseg
