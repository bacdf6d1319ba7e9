#pragma once

#include "lesionseg/image.hpp"

namespace lesionseg {

/// Square structuring element of side 2*radius+1.
struct StructuringElement {
  int radius = 1;

  void validate() const;
};

/// Neighbourhood max/min with the window clipped at the image border.
GrayImage dilate(const GrayImage& img, const StructuringElement& se);
GrayImage erode(const GrayImage& img, const StructuringElement& se);

/// dilate - erode. Non-negative; zero exactly where the window is constant.
GrayImage morphological_gradient(const GrayImage& img, const StructuringElement& se);

}  // namespace lesionseg
