#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "lesionseg/image.hpp"

namespace lesionseg {

inline constexpr std::uint8_t kMaskContourLevel = 255;
inline constexpr std::uint8_t kTruthContourLevel = 64;

/// 8-bit composite: the image with the mask contour drawn at
/// kMaskContourLevel and, when given, the truth contour at kTruthContourLevel.
/// The mask contour wins where both meet.
std::vector<std::uint8_t> render_overlay(const GrayImage& img, const BinaryMask& mask,
                                         const BinaryMask* truth = nullptr);

void save_overlay(const std::filesystem::path& path, const GrayImage& img,
                  const BinaryMask& mask, const BinaryMask* truth = nullptr);

}  // namespace lesionseg
