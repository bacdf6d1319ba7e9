#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lesionseg/image.hpp"

namespace lesionseg {

/// Lower bound on every component variance, in normalized intensity units
/// squared. Keeps components on constant regions non-singular.
inline constexpr double kVarianceFloor = 1e-6;

/// One-dimensional mixture parameters; index j is component j.
struct GmmParams {
  std::vector<double> means;
  std::vector<double> variances;
  std::vector<double> weights;

  int k() const { return static_cast<int>(means.size()); }
  /// Throws ConfigError on inconsistent sizes, negative weights, weights not
  /// summing to 1 within 1e-9, or variances below the floor.
  void validate() const;
};

/// Row-major N x k responsibility matrix.
class Posteriors {
 public:
  Posteriors() = default;
  Posteriors(std::size_t n, std::size_t k) : n_(n), k_(k), p_(n * k, 0.0) {}
  Posteriors(std::size_t n, std::size_t k, std::vector<double> values);

  std::size_t rows() const { return n_; }
  std::size_t cols() const { return k_; }
  double at(std::size_t i, std::size_t j) const { return p_[i * k_ + j]; }
  double& at(std::size_t i, std::size_t j) { return p_[i * k_ + j]; }
  std::span<const double> row(std::size_t i) const { return {p_.data() + i * k_, k_}; }

  friend bool operator==(const Posteriors&, const Posteriors&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<double> p_;
};

struct GmmConfig {
  int k = 2;
  int max_iter = 200;
  double tol = 1e-7;  // relative log-likelihood change
  std::uint64_t seed = 0;
  bool pooled_variance = false;

  void validate() const;
};

struct GmmResult {
  LabelMap labels;
  GmmParams params;
  std::vector<double> ll_trace;
  int iterations = 0;
};

/// Univariate normal density (2*pi*var)^(-1/2) * exp(-(x-mean)^2 / (2*var)).
double gaussian_pdf(double x, double mean, double var);
double log_gaussian_pdf(double x, double mean, double var);

/// Responsibilities P_ij = w_j N(x_i|j) / sum_l w_l N(x_i|l), evaluated with
/// log-sum-exp.
Posteriors e_step(const GrayImage& img, const GmmParams& params);

/// Maximization step. Per-component variances by default; `pooled` shares one
/// variance across all components. A component whose total responsibility
/// falls below 1e-12 is re-seeded at the worst-explained pixel (lowest
/// maximum responsibility; `seed` picks among ties).
GmmParams m_step(const GrayImage& img, const Posteriors& post, bool pooled = false,
                 std::uint64_t seed = 0);

/// sum_i log sum_j w_j N(x_i | mean_j, var_j).
double log_likelihood(const GrayImage& img, const GmmParams& params);

/// Parameters from a K-means partition: centroids, floored within-cluster
/// variances and cluster fractions.
GmmParams gmm_init_from_kmeans(const GrayImage& img, int k);

/// Argmax responsibility per pixel, ties to the lower component.
LabelMap hard_labels(const GrayImage& img, const Posteriors& post);

/// EM from a K-means start until |dLL| <= tol*|LL| or max_iter M-steps.
GmmResult gmm_segment(const GrayImage& img, const GmmConfig& cfg);

}  // namespace lesionseg
