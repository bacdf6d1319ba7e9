#pragma once

#include <map>
#include <string>
#include <string_view>

#include "lesionseg/gmm.hpp"
#include "lesionseg/image.hpp"
#include "lesionseg/kmeans.hpp"
#include "lesionseg/preprocess.hpp"
#include "lesionseg/watershed.hpp"

namespace lesionseg {

/// Toolkit version recorded in manifests.
std::string_view version();

enum class Method { KMeans, Gmm, Mcwt };

/// "kmeans", "gmm", "mcwt".
std::string_view method_name(Method m);
/// Throws ConfigError for an unknown name.
Method parse_method(std::string_view name);

/// Everything needed to turn an image plus ROI into a lesion mask.
struct PipelineConfig {
  Method method = Method::Mcwt;
  KmeansConfig kmeans{};
  GmmConfig gmm{};
  McwtConfig mcwt{};
  ClaheConfig clahe{};
  bool use_clahe = true;
  bool clahe_full_image = false;  // enhance before cropping instead of after

  /// Validates the parameters of the selected method and of CLAHE.
  void validate() const;
};

/// Crop plus optional CLAHE, in the order the config asks for.
GrayImage preprocess_roi(const GrayImage& img, const RegionOfInterest& roi,
                         const PipelineConfig& cfg);

/// Runs the configured method on an already preprocessed ROI image.
BinaryMask segment_roi(const GrayImage& roi_img, const PipelineConfig& cfg);

/// Preprocess, segment and embed; the result has the full image extent.
BinaryMask segment_image(const GrayImage& img, const RegionOfInterest& roi,
                         const PipelineConfig& cfg);

/// Reproducibility record written next to every output.
struct RunManifest {
  std::string command;
  PipelineConfig config{};
  PixelSpacing spacing{};
  std::map<std::string, std::string> paths;
  std::map<std::string, std::string> extra;
  std::string version{lesionseg::version()};
};

std::string manifest_to_json(const RunManifest& m);
/// Missing fields keep their defaults. Throws FormatError on malformed JSON.
RunManifest manifest_from_json(const std::string& text);

}  // namespace lesionseg
