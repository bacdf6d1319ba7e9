#pragma once

#include <vector>

#include "lesionseg/image.hpp"
#include "lesionseg/morphology.hpp"

namespace lesionseg {

/// Label 0 is reserved for the external (background) marker.
inline constexpr int kBackgroundLabel = 0;

struct Marker {
  Pixel pos;
  int label = 1;  // >= 1
};

struct MarkerSet {
  std::vector<Marker> internal;
  std::vector<Pixel> external;

  /// Largest label + 1.
  int label_count() const;
  /// Throws ConfigError / BoundsError unless both sets are non-empty, inside
  /// the image, duplicate-free and disjoint, with internal labels >= 1.
  void validate(int width, int height) const;
};

enum class Connectivity { Four = 4, Eight = 8 };

/// The n brightest pixels (ties in row-major order) become internal markers.
/// With `merge`, 8-connected markers share one label; otherwise every pixel
/// gets its own. Border pixels that are not internal markers form the
/// external marker.
///
/// Throws ConfigError unless 1 <= n <= N - perimeter, and MarkerConflictError
/// when the internal markers occupy the whole border.
MarkerSet select_markers(const GrayImage& img, int n, bool merge = true);

/// Priority flood from the markers. Pixels are labelled when first reached
/// and queued at max(own gradient, parent priority); equal priorities pop in
/// insertion order. Marker pixels are queued in row-major order. Every pixel
/// receives a label; there is no watershed-line label.
///
/// `pop_trace`, when given, receives the priority of every popped pixel.
LabelMap watershed_flood(const GrayImage& gradient, const MarkerSet& markers,
                         Connectivity connectivity = Connectivity::Eight,
                         std::vector<double>* pop_trace = nullptr);

struct McwtConfig {
  int n_markers = 45;
  StructuringElement se{};
  bool merge_markers = true;

  void validate() const;
};

/// Gradient, marker selection and flood; foreground is every pixel that ends
/// up in an internal-marker region.
BinaryMask mcwt_segment(const GrayImage& img, const McwtConfig& cfg = {});

}  // namespace lesionseg
