#include <cmath>
#include <set>

#include "doctest.h"
#include "lesionseg/error.hpp"
#include "lesionseg/phantom.hpp"
#include "oracles.hpp"

using namespace lesionseg;

namespace {

PhantomSpec two_disks() {
  PhantomSpec spec;
  spec.width = 48;
  spec.height = 40;
  spec.disks = {{15, 15, 6.5}, {22, 20, 8}};
  return spec;
}

}  // namespace

TEST_CASE("noise-free phantom is two-valued and thresholds to the truth") {
  const PhantomSpec spec = two_disks();
  const Phantom ph = generate_phantom(spec);
  const double mid = 0.5 * (spec.lesion_intensity + spec.background_intensity);
  for (std::size_t i = 0; i < ph.image.size(); ++i) {
    const double v = ph.image[i];
    REQUIRE((v == spec.lesion_intensity || v == spec.background_intensity));
    REQUIRE((v > mid) == ph.truth[i]);
  }
}

TEST_CASE("rasterization matches direct pixel counting") {
  oracle::Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int w = rng.integer(8, 40);
    const int h = rng.integer(8, 40);
    std::vector<Disk> disks;
    for (int d = 0; d < rng.integer(1, 3); ++d) {
      const double r = 1.0 + 3.0 * rng.unit();
      disks.push_back({r + (w - 1 - 2 * r) * rng.unit(), r + (h - 1 - 2 * r) * rng.unit(), r});
    }
    const BinaryMask m = rasterize_disks(w, h, disks);
    std::size_t expected = 0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        bool inside = false;
        for (const Disk& d : disks) {
          inside = inside || (x - d.cx) * (x - d.cx) + (y - d.cy) * (y - d.cy) <= d.radius * d.radius;
        }
        expected += inside ? 1 : 0;
        REQUIRE(m.at(x, y) == inside);
      }
    }
    REQUIRE(m.count() == expected);
  }
  // Radius 1 at a pixel centre is the 5-pixel plus shape.
  CHECK(rasterize_disks(5, 5, {{2, 2, 1}}).count() == 5);
}

TEST_CASE("seeded noise is deterministic and only the noise depends on the seed") {
  PhantomSpec spec = two_disks();
  spec.noise_sigma = 0.1;
  spec.softness = 1.5;
  spec.seed = 5;
  const Phantom a = generate_phantom(spec);
  const Phantom b = generate_phantom(spec);
  CHECK(a.image == b.image);
  CHECK(a.truth == b.truth);
  spec.seed = 6;
  const Phantom c = generate_phantom(spec);
  CHECK(c.truth == a.truth);
  CHECK_FALSE(c.image == a.image);
  for (double v : a.image.pixels()) REQUIRE((v >= 0.0 && v <= 1.0));
}

TEST_CASE("normal field statistics") {
  const auto z = standard_normal_field(1234, 200000);
  REQUIRE(z.size() == 200000);
  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= static_cast<double>(z.size());
  double var = 0.0;
  for (double v : z) var += (v - mean) * (v - mean);
  var /= static_cast<double>(z.size());
  CHECK(std::abs(mean) < 0.01);
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
  CHECK(standard_normal_field(1234, 7) == std::vector<double>(z.begin(), z.begin() + 7));
  CHECK_FALSE(noise_generator_name().empty());
}

TEST_CASE("spec validation") {
  PhantomSpec spec = two_disks();
  CHECK_NOTHROW(spec.validate());
  PhantomSpec bad = spec;
  bad.lesion_intensity = bad.background_intensity;
  CHECK_THROWS_AS(generate_phantom(bad), ConfigError);
  bad = spec;
  bad.disks.push_back({1, 1, 3});
  CHECK_THROWS_AS(generate_phantom(bad), ConfigError);
  bad = spec;
  bad.noise_sigma = -0.1;
  CHECK_THROWS_AS(generate_phantom(bad), ConfigError);
  bad = spec;
  bad.width = 0;
  CHECK_THROWS_AS(generate_phantom(bad), ConfigError);
  bad = spec;
  bad.lesion_intensity = 1.2;
  CHECK_THROWS_AS(generate_phantom(bad), ConfigError);
}

TEST_CASE("JSON round trip") {
  PhantomSpec spec = two_disks();
  spec.seed = 123456789012345ULL;
  spec.noise_sigma = 0.05;
  const PhantomSpec back = phantom_spec_from_json(phantom_spec_to_json(spec));
  CHECK(back.width == spec.width);
  CHECK(back.height == spec.height);
  CHECK(back.seed == spec.seed);
  CHECK(back.noise_sigma == spec.noise_sigma);
  REQUIRE(back.disks.size() == 2);
  CHECK(back.disks[1].radius == 8);
  CHECK_THROWS_AS(phantom_spec_from_json("{not json"), FormatError);
}

TEST_CASE("corpus is deterministic and valid") {
  const auto a = phantom_corpus(30, 42, 0.1, 1.5);
  const auto b = phantom_corpus(30, 42, 0.1, 1.5);
  REQUIRE(a.size() == 30);
  std::set<std::uint64_t> seeds;
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE_NOTHROW(a[i].validate());
    REQUIRE(a[i].disks.size() == 1);
    REQUIRE(a[i].disks[0].radius >= 10);
    REQUIRE(a[i].disks[0].radius <= 18);
    REQUIRE(phantom_spec_to_json(a[i]) == phantom_spec_to_json(b[i]));
    seeds.insert(a[i].seed);
  }
  CHECK(seeds.size() == 30);
}
