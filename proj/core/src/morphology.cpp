#include "lesionseg/morphology.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "lesionseg/error.hpp"

namespace lesionseg {
namespace {

// Square windows are separable: a row pass followed by a column pass.
template <typename Pick>
std::vector<double> square_filter(const GrayImage& img, int r, Pick pick) {
  const int w = img.width();
  const int h = img.height();
  std::vector<double> rows(img.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = img.at(x, y);
      for (int xx = std::max(0, x - r); xx <= std::min(w - 1, x + r); ++xx) v = pick(v, img.at(xx, y));
      rows[img.index(x, y)] = v;
    }
  }
  std::vector<double> out(img.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = rows[img.index(x, y)];
      for (int yy = std::max(0, y - r); yy <= std::min(h - 1, y + r); ++yy) v = pick(v, rows[img.index(x, yy)]);
      out[img.index(x, y)] = v;
    }
  }
  return out;
}

}  // namespace

void StructuringElement::validate() const {
  if (radius < 1) throw ConfigError("structuring element radius must be >= 1, got " + std::to_string(radius));
}

GrayImage dilate(const GrayImage& img, const StructuringElement& se) {
  se.validate();
  return GrayImage(img.width(), img.height(),
                   square_filter(img, se.radius, [](double a, double b) { return std::max(a, b); }));
}

GrayImage erode(const GrayImage& img, const StructuringElement& se) {
  se.validate();
  return GrayImage(img.width(), img.height(),
                   square_filter(img, se.radius, [](double a, double b) { return std::min(a, b); }));
}

GrayImage morphological_gradient(const GrayImage& img, const StructuringElement& se) {
  const GrayImage hi = dilate(img, se);
  const GrayImage lo = erode(img, se);
  std::vector<double> out(img.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = hi[i] - lo[i];
  return GrayImage(img.width(), img.height(), std::move(out));
}

}  // namespace lesionseg
