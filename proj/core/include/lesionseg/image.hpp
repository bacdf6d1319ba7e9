#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lesionseg {

/// Pixel coordinate: x is the column, y is the row.
struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// 2D grayscale image with intensities normalized to [0,1], row-major.
class GrayImage {
 public:
  GrayImage() = default;
  /// Constant image. Throws ConfigError on a non-positive extent or a value
  /// outside [0,1].
  GrayImage(int width, int height, double fill = 0.0);
  /// Takes ownership of row-major pixels; validates length and range.
  GrayImage(int width, int height, std::vector<double> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  double at(int x, int y) const { return pixels_[index(x, y)]; }
  double operator[](std::size_t i) const { return pixels_[i]; }
  std::span<const double> pixels() const { return pixels_; }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }
  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

/// 2D boolean mask, row-major. True is foreground.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);
  BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }

  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(int x, int y, bool v) { bits_[index(x, y)] = v ? 1 : 0; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }

  std::size_t count() const;
  bool any() const { return count() > 0; }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }
  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Row-major cluster or region assignment with labels in [0, k).
///
/// Only the range is enforced. A label in [0, k) may be unused, which happens
/// legitimately when a mixture component wins no pixel in the argmax step.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height, int k, std::vector<int> labels);

  int width() const { return width_; }
  int height() const { return height_; }
  int k() const { return k_; }
  std::size_t size() const { return labels_.size(); }

  int at(int x, int y) const {
    return labels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }
  int operator[](std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const { return labels_; }

  /// Pixel count per label, length k.
  std::vector<std::size_t> histogram() const;

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int k_ = 0;
  std::vector<int> labels_;
};

struct RegionOfInterest {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  /// Throws BoundsError unless the region lies inside a width x height image.
  void validate(int width, int height) const;
  static RegionOfInterest full(int width, int height) { return {0, 0, width, height}; }
  friend bool operator==(const RegionOfInterest&, const RegionOfInterest&) = default;
};

/// Millimeters per pixel along x and y.
struct PixelSpacing {
  double dx = 1.0;
  double dy = 1.0;

  void validate() const;
};

/// Copy of the pixels inside roi. Output pixel (i,j) is input (roi.x+i, roi.y+j).
GrayImage crop_roi(const GrayImage& img, const RegionOfInterest& roi);
BinaryMask crop_roi(const BinaryMask& mask, const RegionOfInterest& roi);

/// Places a region mask back into an all-background mask of the full size.
BinaryMask embed_roi(const BinaryMask& region, const RegionOfInterest& roi,
                     int width, int height);

/// Linearly rescales to [0,1]. A constant image maps to all zeros.
GrayImage normalize_minmax(const GrayImage& img);

/// Foreground = every pixel whose label has the highest mean intensity.
/// Unused labels are skipped; ties go to the lower label index.
BinaryMask select_lesion_cluster(const LabelMap& labels, const GrayImage& img);

/// Foreground pixels with a background 4-neighbour or lying on the image edge.
std::vector<Pixel> boundary_pixels(const BinaryMask& mask);

}  // namespace lesionseg
