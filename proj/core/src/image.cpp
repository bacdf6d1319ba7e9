#include "lesionseg/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lesionseg/error.hpp"

namespace lesionseg {
namespace {

void check_extent(int width, int height) {
  if (width < 1 || height < 1) {
    throw ConfigError("image extent must be positive, got " + std::to_string(width) +
                      "x" + std::to_string(height));
  }
}

std::size_t area(int width, int height) {
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

}  // namespace

GrayImage::GrayImage(int width, int height, double fill)
    : GrayImage(width, height, std::vector<double>(area(std::max(width, 0), std::max(height, 0)), fill)) {}

GrayImage::GrayImage(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_extent(width, height);
  if (pixels_.size() != area(width, height)) {
    throw ConfigError("pixel buffer has " + std::to_string(pixels_.size()) +
                      " values, expected " + std::to_string(area(width, height)));
  }
  for (double v : pixels_) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ConfigError("pixel value " + std::to_string(v) + " outside [0,1]");
    }
  }
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height) {
  check_extent(width, height);
  bits_.assign(area(width, height), fill ? 1 : 0);
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_extent(width, height);
  if (bits_.size() != area(width, height)) {
    throw ConfigError("mask buffer has " + std::to_string(bits_.size()) +
                      " values, expected " + std::to_string(area(width, height)));
  }
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

LabelMap::LabelMap(int width, int height, int k, std::vector<int> labels)
    : width_(width), height_(height), k_(k), labels_(std::move(labels)) {
  check_extent(width, height);
  if (k < 1) throw ConfigError("label count must be at least 1");
  if (labels_.size() != area(width, height)) {
    throw ConfigError("label buffer has " + std::to_string(labels_.size()) +
                      " values, expected " + std::to_string(area(width, height)));
  }
  for (int l : labels_) {
    if (l < 0 || l >= k) {
      throw ConfigError("label " + std::to_string(l) + " outside [0," +
                        std::to_string(k) + ")");
    }
  }
}

std::vector<std::size_t> LabelMap::histogram() const {
  std::vector<std::size_t> h(static_cast<std::size_t>(k_), 0);
  for (int l : labels_) ++h[static_cast<std::size_t>(l)];
  return h;
}

void RegionOfInterest::validate(int width, int height) const {
  if (x < 0 || y < 0 || w < 1 || h < 1 || x > width - w || y > height - h) {
    throw BoundsError("ROI (" + std::to_string(x) + "," + std::to_string(y) + "," +
                      std::to_string(w) + "," + std::to_string(h) +
                      ") does not fit a " + std::to_string(width) + "x" +
                      std::to_string(height) + " image");
  }
}

void PixelSpacing::validate() const {
  if (!std::isfinite(dx) || !std::isfinite(dy) || dx <= 0.0 || dy <= 0.0) {
    throw ConfigError("pixel spacing must be finite and positive");
  }
}

GrayImage crop_roi(const GrayImage& img, const RegionOfInterest& roi) {
  roi.validate(img.width(), img.height());
  std::vector<double> out;
  out.reserve(area(roi.w, roi.h));
  for (int j = 0; j < roi.h; ++j) {
    for (int i = 0; i < roi.w; ++i) out.push_back(img.at(roi.x + i, roi.y + j));
  }
  return GrayImage(roi.w, roi.h, std::move(out));
}

BinaryMask crop_roi(const BinaryMask& mask, const RegionOfInterest& roi) {
  roi.validate(mask.width(), mask.height());
  BinaryMask out(roi.w, roi.h);
  for (int j = 0; j < roi.h; ++j) {
    for (int i = 0; i < roi.w; ++i) out.set(i, j, mask.at(roi.x + i, roi.y + j));
  }
  return out;
}

BinaryMask embed_roi(const BinaryMask& region, const RegionOfInterest& roi,
                     int width, int height) {
  roi.validate(width, height);
  if (region.width() != roi.w || region.height() != roi.h) {
    throw ShapeMismatchError("region mask does not match ROI extent");
  }
  BinaryMask out(width, height);
  for (int j = 0; j < roi.h; ++j) {
    for (int i = 0; i < roi.w; ++i) out.set(roi.x + i, roi.y + j, region.at(i, j));
  }
  return out;
}

GrayImage normalize_minmax(const GrayImage& img) {
  auto px = img.pixels();
  auto [lo, hi] = std::minmax_element(px.begin(), px.end());
  const double lo_v = *lo;
  const double range = *hi - *lo;
  std::vector<double> out(px.size(), 0.0);
  if (range > 0.0) {
    for (std::size_t i = 0; i < px.size(); ++i) {
      out[i] = std::clamp((px[i] - lo_v) / range, 0.0, 1.0);
    }
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

BinaryMask select_lesion_cluster(const LabelMap& labels, const GrayImage& img) {
  if (labels.width() != img.width() || labels.height() != img.height()) {
    throw ShapeMismatchError("label map and image shapes differ");
  }
  const auto k = static_cast<std::size_t>(labels.k());
  std::vector<double> sum(k, 0.0);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < img.size(); ++i) {
    const auto l = static_cast<std::size_t>(labels[i]);
    sum[l] += img[i];
    ++count[l];
  }
  int best = -1;
  double best_mean = -std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < k; ++l) {
    if (count[l] == 0) continue;
    const double mean = sum[l] / static_cast<double>(count[l]);
    if (mean > best_mean) {
      best_mean = mean;
      best = static_cast<int>(l);
    }
  }
  BinaryMask mask(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) mask.set(i, labels[i] == best);
  return mask;
}

std::vector<Pixel> boundary_pixels(const BinaryMask& mask) {
  std::vector<Pixel> out;
  const int w = mask.width();
  const int h = mask.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      const bool edge = x == 0 || y == 0 || x == w - 1 || y == h - 1;
      if (edge || !mask.at(x - 1, y) || !mask.at(x + 1, y) || !mask.at(x, y - 1) ||
          !mask.at(x, y + 1)) {
        out.push_back({x, y});
      }
    }
  }
  return out;
}

}  // namespace lesionseg
