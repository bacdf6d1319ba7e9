#include "lesionseg/overlay.hpp"

#include <cmath>

#include "lesionseg/error.hpp"
#include "lesionseg/io.hpp"

namespace lesionseg {

std::vector<std::uint8_t> render_overlay(const GrayImage& img, const BinaryMask& mask,
                                         const BinaryMask* truth) {
  if (mask.width() != img.width() || mask.height() != img.height() ||
      (truth != nullptr && (truth->width() != img.width() || truth->height() != img.height()))) {
    throw ShapeMismatchError("overlay masks must match the image shape");
  }
  std::vector<std::uint8_t> out(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(std::lround(img[i] * 255.0));
  }
  if (truth != nullptr) {
    for (const Pixel& p : boundary_pixels(*truth)) out[img.index(p.x, p.y)] = kTruthContourLevel;
  }
  for (const Pixel& p : boundary_pixels(mask)) out[img.index(p.x, p.y)] = kMaskContourLevel;
  return out;
}

void save_overlay(const std::filesystem::path& path, const GrayImage& img,
                  const BinaryMask& mask, const BinaryMask* truth) {
  save_gray8(img.width(), img.height(), render_overlay(img, mask, truth), path);
}

}  // namespace lesionseg
