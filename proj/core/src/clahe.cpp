#include "lesionseg/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lesionseg/error.hpp"

namespace lesionseg {
namespace {

struct Axis {
  std::vector<int> begin;     // tile start, one extra entry for the end
  std::vector<double> centre;
};

Axis split_axis(int extent, int tiles) {
  Axis a;
  a.begin.resize(static_cast<std::size_t>(tiles) + 1);
  for (int t = 0; t <= tiles; ++t) {
    a.begin[static_cast<std::size_t>(t)] =
        static_cast<int>(static_cast<long long>(t) * extent / tiles);
  }
  a.centre.resize(static_cast<std::size_t>(tiles));
  for (int t = 0; t < tiles; ++t) {
    const auto st = static_cast<std::size_t>(t);
    a.centre[st] = 0.5 * (a.begin[st] + a.begin[st + 1] - 1);
  }
  return a;
}

// Lower tile index and weight of the upper tile for coordinate p.
std::pair<int, double> locate(const Axis& a, int p) {
  const int tiles = static_cast<int>(a.centre.size());
  if (tiles == 1 || p <= a.centre.front()) return {0, 0.0};
  if (p >= a.centre.back()) return {tiles - 1, 0.0};
  int t = 0;
  while (t + 1 < tiles && a.centre[static_cast<std::size_t>(t + 1)] <= p) ++t;
  const double c0 = a.centre[static_cast<std::size_t>(t)];
  const double c1 = a.centre[static_cast<std::size_t>(t + 1)];
  return {t, (p - c0) / (c1 - c0)};
}

}  // namespace

void ClaheConfig::validate() const {
  if (tiles_x < 1 || tiles_y < 1) throw ConfigError("CLAHE tile counts must be >= 1");
  if (!(clip_limit > 0.0 && clip_limit <= 1.0)) {
    throw ConfigError("CLAHE clip limit must be in (0,1], got " + std::to_string(clip_limit));
  }
  if (bins < 2) throw ConfigError("CLAHE needs at least 2 histogram bins");
}

int intensity_bin(double v, int bins) {
  const int b = static_cast<int>(std::floor(v * bins));
  return std::clamp(b, 0, bins - 1);
}

std::vector<double> clahe_tile_mapping(std::span<const double> tile_pixels,
                                       const ClaheConfig& cfg) {
  const auto bins = static_cast<std::size_t>(cfg.bins);
  std::vector<double> hist(bins, 0.0);
  for (double v : tile_pixels) hist[static_cast<std::size_t>(intensity_bin(v, cfg.bins))] += 1.0;

  const auto total = static_cast<double>(tile_pixels.size());
  const double threshold = cfg.clip_limit * total;
  double excess = 0.0;
  for (double& h : hist) {
    if (h > threshold) {
      excess += h - threshold;
      h = threshold;
    }
  }
  const double share = excess / cfg.bins;

  std::vector<double> lut(bins);
  double cdf = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    cdf += hist[b] + share;
    lut[b] = std::clamp(cdf / total, 0.0, 1.0);
  }
  lut.back() = 1.0;
  return lut;
}

GrayImage clahe(const GrayImage& img, const ClaheConfig& cfg) {
  cfg.validate();
  if (cfg.tiles_x > img.width() || cfg.tiles_y > img.height()) {
    throw ConfigError("CLAHE tile grid " + std::to_string(cfg.tiles_x) + "x" +
                      std::to_string(cfg.tiles_y) + " larger than " +
                      std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                      " image");
  }
  const Axis ax = split_axis(img.width(), cfg.tiles_x);
  const Axis ay = split_axis(img.height(), cfg.tiles_y);

  std::vector<std::vector<double>> luts;
  luts.reserve(static_cast<std::size_t>(cfg.tiles_x) * static_cast<std::size_t>(cfg.tiles_y));
  std::vector<double> tile;
  for (int ty = 0; ty < cfg.tiles_y; ++ty) {
    for (int tx = 0; tx < cfg.tiles_x; ++tx) {
      tile.clear();
      for (int y = ay.begin[static_cast<std::size_t>(ty)]; y < ay.begin[static_cast<std::size_t>(ty) + 1]; ++y) {
        for (int x = ax.begin[static_cast<std::size_t>(tx)]; x < ax.begin[static_cast<std::size_t>(tx) + 1]; ++x) {
          tile.push_back(img.at(x, y));
        }
      }
      luts.push_back(clahe_tile_mapping(tile, cfg));
    }
  }
  auto lut_at = [&](int tx, int ty, int bin) {
    return luts[static_cast<std::size_t>(ty) * static_cast<std::size_t>(cfg.tiles_x) +
                static_cast<std::size_t>(tx)][static_cast<std::size_t>(bin)];
  };

  std::vector<double> out(img.size());
  for (int y = 0; y < img.height(); ++y) {
    const auto [ty, wy] = locate(ay, y);
    const int ty1 = std::min(ty + 1, cfg.tiles_y - 1);
    for (int x = 0; x < img.width(); ++x) {
      const auto [tx, wx] = locate(ax, x);
      const int tx1 = std::min(tx + 1, cfg.tiles_x - 1);
      const int b = intensity_bin(img.at(x, y), cfg.bins);
      const double top = (1.0 - wx) * lut_at(tx, ty, b) + wx * lut_at(tx1, ty, b);
      const double bottom = (1.0 - wx) * lut_at(tx, ty1, b) + wx * lut_at(tx1, ty1, b);
      out[img.index(x, y)] = std::clamp((1.0 - wy) * top + wy * bottom, 0.0, 1.0);
    }
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

}  // namespace lesionseg
