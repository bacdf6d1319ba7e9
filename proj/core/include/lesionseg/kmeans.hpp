#pragma once

#include <vector>

#include "lesionseg/image.hpp"

namespace lesionseg {

struct KmeansConfig {
  int k = 2;
  int max_iter = 100;
  double tol = 1e-6;  // max centroid movement that counts as converged

  void validate() const;
};

struct KmeansResult {
  LabelMap labels;
  std::vector<double> centroids;
  /// Sum of squared pixel-to-centroid distances after every assignment step.
  std::vector<double> objective_trace;
  int iterations = 0;
};

/// Greedy farthest-point seeding on scalar intensities.
///
/// The first two picks are the minimum and maximum intensity (the pair at
/// maximum distance). Each further pick maximizes the distance to the nearest
/// already-chosen centroid, ties going to the smaller intensity. With k = 1
/// the smallest intensity is returned. Centroids come back in pick order.
/// Throws DegenerateInputError if the image has fewer than k distinct values.
std::vector<double> init_centroids_farthest(const GrayImage& img, int k);

/// Sum over pixels of the squared distance to the assigned centroid.
double kmeans_objective(const GrayImage& img, const LabelMap& labels,
                        const std::vector<double>& centroids);

/// Lloyd iterations starting from farthest-point seeds.
KmeansResult kmeans_cluster(const GrayImage& img, const KmeansConfig& cfg);

/// Lloyd iterations from caller-supplied centroids (cfg.k is taken from
/// their count).
KmeansResult kmeans_refine(const GrayImage& img, std::vector<double> centroids,
                           const KmeansConfig& cfg);

}  // namespace lesionseg
