#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include "lesionseg/image.hpp"

namespace lesionseg {

/// A decoded single-channel raster plus the bit depth it was stored at.
struct Raster {
  GrayImage image;
  int bit_depth = 8;  // 8 or 16
};

/// Reads an 8/16-bit grayscale PNG or binary PGM (P5). The format is chosen
/// from the file signature, not the extension. Throws FormatError for
/// unreadable files, unsupported formats and multi-channel images.
Raster read_raster(const std::filesystem::path& path);

/// Intensities rescaled to [0,1] (v / 255 or v / 65535).
inline GrayImage load_image(const std::filesystem::path& path) {
  return read_raster(path).image;
}

/// Writes the image quantized to bit_depth (8 or 16) as round(v * maxval).
/// Extension ".pgm" selects PGM, anything else PNG.
void save_image(const GrayImage& img, const std::filesystem::path& path,
                int bit_depth = 8);

/// Any nonzero sample is foreground.
BinaryMask load_mask(const std::filesystem::path& path);

/// 8-bit raster with 0 = background, 255 = foreground.
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

/// Raw 8-bit samples, row-major.
void save_gray8(int width, int height, std::span<const std::uint8_t> samples,
                const std::filesystem::path& path);

/// ROI file: one JSON object {"x":int,"y":int,"w":int,"h":int}.
RegionOfInterest load_roi(const std::filesystem::path& path);
void save_roi(const RegionOfInterest& roi, const std::filesystem::path& path);

}  // namespace lesionseg
