#include <cstdlib>

#include "doctest.h"
#include "lesionseg/error.hpp"
#include "lesionseg/morphology.hpp"
#include "oracles.hpp"

using namespace lesionseg;

TEST_CASE("constant image has zero gradient") {
  const GrayImage g = morphological_gradient(GrayImage(7, 5, 0.6), {1});
  for (double v : g.pixels()) CHECK(v == 0.0);
}

TEST_CASE("single bright pixel") {
  std::vector<double> px(25, 0.0);
  px[12] = 1.0;
  const GrayImage img(5, 5, px);
  const GrayImage d = dilate(img, {1});
  const GrayImage e = erode(img, {1});
  const GrayImage g = morphological_gradient(img, {1});
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 5; ++x) {
      const bool near = std::abs(x - 2) <= 1 && std::abs(y - 2) <= 1;
      CHECK(d.at(x, y) == (near ? 1.0 : 0.0));
      CHECK(e.at(x, y) == 0.0);
      CHECK(g.at(x, y) == (near ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("step edge gives a two-pixel band") {
  std::vector<double> px(6 * 3);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 6; ++x) px[static_cast<std::size_t>(y * 6 + x)] = x < 3 ? 0.2 : 0.7;
  const GrayImage g = morphological_gradient(GrayImage(6, 3, px), {1});
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 6; ++x) {
      CHECK(g.at(x, y) == doctest::Approx((x == 2 || x == 3) ? 0.5 : 0.0));
    }
  }
}

TEST_CASE("separable filtering matches the direct window") {
  oracle::Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const GrayImage img = oracle::random_image(rng, rng.integer(1, 12), rng.integer(1, 12));
    const int r = rng.integer(1, 4);
    const GrayImage g = morphological_gradient(img, {r});
    const GrayImage ref = oracle::direct_gradient(img, r);
    REQUIRE(g == ref);
    for (double v : g.pixels()) REQUIRE(v >= 0.0);
  }
}

TEST_CASE("structuring element radius must be positive") {
  CHECK_THROWS_AS(dilate(GrayImage(3, 3), {0}), ConfigError);
}
