#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lesionseg/image.hpp"

namespace lesionseg {

struct Disk {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 1.0;
};

/// Synthetic bright-lesion image description.
struct PhantomSpec {
  int width = 64;
  int height = 64;
  std::vector<Disk> disks;
  double lesion_intensity = 0.8;
  double background_intensity = 0.25;
  double softness = 0.0;     // Gaussian blur sigma, pixels
  double noise_sigma = 0.0;  // additive Gaussian noise sigma
  std::uint64_t seed = 0;

  /// Throws ConfigError for non-positive extents, a lesion not brighter than
  /// the background, intensities outside [0,1], negative sigmas or a disk
  /// that does not lie inside the image.
  void validate() const;
};

struct Phantom {
  GrayImage image;
  BinaryMask truth;
};

/// Pixels whose centre lies within radius of some disk centre (<=).
BinaryMask rasterize_disks(int width, int height, const std::vector<Disk>& disks);

/// Background plus disks, blurred by `softness`, plus seeded noise, clamped to
/// [0,1]. The truth mask is the un-blurred disk union.
Phantom generate_phantom(const PhantomSpec& spec);

/// Zero-mean, unit-variance normal deviates from mt19937_64 through the
/// Box-Muller transform. Portable: identical on every conforming platform.
std::vector<double> standard_normal_field(std::uint64_t seed, std::size_t count);

/// Name of the noise algorithm, recorded in run manifests.
std::string noise_generator_name();

PhantomSpec load_phantom_spec(const std::filesystem::path& path);
std::string phantom_spec_to_json(const PhantomSpec& spec);
PhantomSpec phantom_spec_from_json(const std::string& text);

/// `count` single-disk phantoms with radii in [10,18] placed inside a
/// size x size image, derived deterministically from `seed`.
std::vector<PhantomSpec> phantom_corpus(int count, std::uint64_t seed, double noise_sigma,
                                        double softness, int size = 64);

}  // namespace lesionseg
