#pragma once

#include <span>
#include <vector>

#include "lesionseg/image.hpp"

namespace lesionseg {

/// Contrast-limited adaptive histogram equalization parameters.
///
/// clip_limit is the fraction of a tile's pixel count any single histogram
/// bin may hold; 1.0 disables clipping.
struct ClaheConfig {
  int tiles_x = 8;
  int tiles_y = 8;
  double clip_limit = 0.01;
  int bins = 256;

  void validate() const;
};

/// Histogram bin of a normalized intensity: min(bins-1, floor(v*bins)).
int intensity_bin(double v, int bins);

/// Clipped, redistributed and cumulated histogram of one tile, scaled so the
/// last entry is 1. Entry b is the output level for input bin b.
std::vector<double> clahe_tile_mapping(std::span<const double> tile_pixels,
                                       const ClaheConfig& cfg);

/// Bilinearly interpolated per-tile equalization. Pixels outside the outermost
/// tile centres use the nearest tile mappings. Throws ConfigError if the tile
/// grid does not fit the image.
GrayImage clahe(const GrayImage& img, const ClaheConfig& cfg);

}  // namespace lesionseg
