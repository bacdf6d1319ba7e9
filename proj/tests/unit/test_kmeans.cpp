#include <algorithm>
#include <set>

#include "doctest.h"
#include "lesionseg/error.hpp"
#include "lesionseg/kmeans.hpp"
#include "oracles.hpp"

using namespace lesionseg;

TEST_CASE("farthest-point initialization") {
  SUBCASE("k=2 picks the extreme pair") {
    const GrayImage img(3, 1, std::vector<double>{0.1, 1.0, 0.0});
    CHECK(init_centroids_farthest(img, 2) == std::vector<double>{0.0, 1.0});
  }
  SUBCASE("k=1 returns the smallest intensity") {
    const GrayImage img(3, 1, std::vector<double>{0.4, 0.2, 0.7});
    CHECK(init_centroids_farthest(img, 1) == std::vector<double>{0.2});
  }
  SUBCASE("k=3 adds the max-min point") {
    const GrayImage img(3, 1, std::vector<double>{0.5, 1.0, 0.0});
    CHECK(init_centroids_farthest(img, 3) == std::vector<double>{0.0, 1.0, 0.5});
  }
  SUBCASE("ties prefer the smaller value") {
    // 0.25 and 0.75 are both 0.25 from the nearest of {0, 1}
    const GrayImage img(4, 1, std::vector<double>{0.75, 0.25, 1.0, 0.0});
    CHECK(init_centroids_farthest(img, 3)[2] == 0.25);
  }
  SUBCASE("too few distinct values") {
    const GrayImage img(4, 1, std::vector<double>{0.5, 0.5, 0.2, 0.2});
    CHECK_THROWS_AS(init_centroids_farthest(img, 3), DegenerateInputError);
  }
}

TEST_CASE("initialization matches the exhaustive greedy oracle") {
  oracle::Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const GrayImage img = oracle::random_image(rng, rng.integer(1, 6), rng.integer(1, 6), rng.integer(2, 12));
    std::set<double> distinct(img.pixels().begin(), img.pixels().end());
    const int k = rng.integer(1, static_cast<int>(distinct.size()));
    REQUIRE(init_centroids_farthest(img, k) == oracle::farthest_seeds(img, k));
  }
}

TEST_CASE("k=1 converges to the mean") {
  const GrayImage img(4, 1, std::vector<double>{0.1, 0.2, 0.6, 0.7});
  const KmeansResult r = kmeans_cluster(img, {1, 100, 1e-9});
  CHECK(r.centroids[0] == doctest::Approx(0.4));
  // 0.09 + 0.04 + 0.04 + 0.09
  CHECK(r.objective_trace.back() == doctest::Approx(0.26));
}

TEST_CASE("two constant patches reach zero objective") {
  std::vector<double> px(16);
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = (i % 4) < 2 ? 0.1 : 0.9;
  const GrayImage img(4, 4, px);
  const KmeansResult r = kmeans_cluster(img, {2, 100, 1e-6});
  CHECK(oracle::best_partition_objective(img, 2) == doctest::Approx(0.0));
  CHECK(r.objective_trace.back() == doctest::Approx(0.0));
  std::vector<double> c = r.centroids;
  std::sort(c.begin(), c.end());
  CHECK(c[0] == doctest::Approx(0.1));
  CHECK(c[1] == doctest::Approx(0.9));
  for (std::size_t i = 0; i < px.size(); ++i) {
    CHECK(r.labels[i] == r.labels[(i % 4) < 2 ? 0 : 2]);
  }
  CHECK(r.labels[0] != r.labels[2]);
}

TEST_CASE("separated constant regions are recovered exactly (brute force over assignments)") {
  oracle::Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = rng.integer(2, 3);
    const int n = rng.integer(k, k == 2 ? 16 : 10);
    std::vector<double> levels = {0.05, 0.5, 0.95};
    std::vector<int> region(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) region[static_cast<std::size_t>(i)] = i < k ? i : rng.integer(0, k - 1);
    std::shuffle(region.begin(), region.end(), rng.engine);
    std::vector<double> px;
    for (int r : region) px.push_back(levels[static_cast<std::size_t>(r * (k == 2 ? 2 : 1))]);
    const GrayImage img(n, 1, px);
    REQUIRE(oracle::best_partition_objective(img, k) == doctest::Approx(0.0));
    const KmeansResult res = kmeans_cluster(img, {k, 100, 0.0});
    REQUIRE(res.objective_trace.back() == doctest::Approx(0.0).epsilon(1e-15));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        REQUIRE((res.labels[static_cast<std::size_t>(i)] == res.labels[static_cast<std::size_t>(j)]) ==
                (region[static_cast<std::size_t>(i)] == region[static_cast<std::size_t>(j)]));
      }
    }
  }
}

TEST_CASE("objective is non-increasing and centroids stay in range") {
  oracle::Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const GrayImage img = oracle::random_image(rng, rng.integer(2, 24), rng.integer(2, 24));
    const int k = rng.integer(1, 4);
    const KmeansResult r = kmeans_cluster(img, {k, 100, 1e-6});
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      REQUIRE(r.objective_trace[i] <= r.objective_trace[i - 1]);
    }
    for (double c : r.centroids) REQUIRE((c >= 0.0 && c <= 1.0));
    REQUIRE(kmeans_objective(img, r.labels, r.centroids) == doctest::Approx(r.objective_trace.back()));
  }
}

TEST_CASE("converged result is a fixed point") {
  oracle::Rng rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    const GrayImage img = oracle::random_image(rng, rng.integer(2, 16), rng.integer(2, 16));
    const KmeansConfig cfg{rng.integer(1, 3), 1000, 0.0};
    const KmeansResult first = kmeans_cluster(img, cfg);
    const KmeansResult again = kmeans_refine(img, first.centroids, cfg);
    REQUIRE(again.labels == first.labels);
    REQUIRE(again.centroids == first.centroids);
  }
}

TEST_CASE("empty clusters are re-seeded") {
  // Seeds 0.0 and 1.0 with a third seed at 0.9 that wins nothing once the
  // others move: re-seeding keeps every centroid inside the data.
  const GrayImage img(6, 1, std::vector<double>{0.0, 0.05, 0.1, 0.9, 0.95, 1.0});
  const KmeansResult r = kmeans_refine(img, {0.5, 0.5, 0.95}, {3, 100, 0.0});
  const auto hist = r.labels.histogram();
  CHECK(std::count(hist.begin(), hist.end(), 0u) == 0);
}

TEST_CASE("configuration errors") {
  const GrayImage img(2, 1, std::vector<double>{0.0, 1.0});
  CHECK_THROWS_AS(kmeans_cluster(img, {0, 10, 0.0}), ConfigError);
  CHECK_THROWS_AS(kmeans_cluster(img, {2, 0, 0.0}), ConfigError);
  CHECK_THROWS_AS(kmeans_cluster(img, {2, 10, -1.0}), ConfigError);
  CHECK_THROWS_AS(kmeans_cluster(img, {3, 10, 0.0}), DegenerateInputError);
}
