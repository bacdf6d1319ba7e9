#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace oracle {

GrayImage random_image(Rng& rng, int w, int h, int levels) {
  std::vector<double> px(static_cast<std::size_t>(w * h));
  for (auto& v : px) {
    v = levels > 1 ? static_cast<double>(rng.integer(0, levels - 1)) / (levels - 1) : rng.unit();
  }
  return GrayImage(w, h, std::move(px));
}

BinaryMask random_mask(Rng& rng, int w, int h, double density) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(w * h));
  for (auto& b : bits) b = rng.coin(density) ? 1 : 0;
  return BinaryMask(w, h, std::move(bits));
}

Counts count_pixels(const BinaryMask& pred, const BinaryMask& truth) {
  Counts c;
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      const bool p = pred.at(x, y);
      const bool t = truth.at(x, y);
      c.tp += p && t;
      c.fp += p && !t;
      c.fn += !p && t;
      c.tn += !p && !t;
    }
  }
  return c;
}

namespace {

std::vector<std::pair<int, int>> edge_points(const BinaryMask& m) {
  std::vector<std::pair<int, int>> pts;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y)) continue;
      bool edge = false;
      const int dxs[] = {1, -1, 0, 0};
      const int dys[] = {0, 0, 1, -1};
      for (int i = 0; i < 4; ++i) {
        const int nx = x + dxs[i];
        const int ny = y + dys[i];
        if (nx < 0 || ny < 0 || nx >= m.width() || ny >= m.height() || !m.at(nx, ny)) edge = true;
      }
      if (edge) pts.emplace_back(x, y);
    }
  }
  return pts;
}

}  // namespace

double hausdorff_all_pairs(const BinaryMask& a, const BinaryMask& b, double dx, double dy) {
  const auto pa = edge_points(a);
  const auto pb = edge_points(b);
  auto directed = [&](const auto& from, const auto& to) {
    double h = 0.0;
    for (const auto& p : from) {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& q : to) {
        m = std::min(m, std::hypot((p.first - q.first) * dx, (p.second - q.second) * dy));
      }
      h = std::max(h, m);
    }
    return h;
  };
  return std::max(directed(pa, pb), directed(pb, pa));
}

GrayImage global_equalization(const GrayImage& img, int bins) {
  auto bin = [bins](double v) { return std::min(bins - 1, static_cast<int>(v * bins)); };
  std::vector<double> out(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    std::size_t below = 0;
    for (std::size_t j = 0; j < img.size(); ++j) below += bin(img[j]) <= bin(img[i]);
    out[i] = static_cast<double>(below) / static_cast<double>(img.size());
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

std::vector<double> farthest_seeds(const GrayImage& img, int k) {
  std::vector<double> vals(img.pixels().begin(), img.pixels().end());
  std::vector<double> chosen;
  if (k == 1) return {*std::min_element(vals.begin(), vals.end())};
  // best pair over all pixel pairs, smaller values preferred on ties
  double best = -1.0;
  std::pair<double, double> pair{0, 0};
  for (double a : vals) {
    for (double b : vals) {
      const double lo = std::min(a, b);
      const double hi = std::max(a, b);
      if (hi - lo > best || (hi - lo == best && lo < pair.first)) {
        best = hi - lo;
        pair = {lo, hi};
      }
    }
  }
  chosen = {pair.first, pair.second};
  while (static_cast<int>(chosen.size()) < k) {
    double pick = 0.0;
    double pick_d = -1.0;
    for (double v : vals) {
      double d = std::numeric_limits<double>::infinity();
      for (double c : chosen) d = std::min(d, std::abs(v - c));
      if (d > pick_d || (d == pick_d && v < pick)) {
        pick_d = d;
        pick = v;
      }
    }
    chosen.push_back(pick);
  }
  return chosen;
}

double best_partition_objective(const GrayImage& img, int k) {
  const std::size_t n = img.size();
  std::vector<int> assign(n, 0);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
    std::vector<int> cnt(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[static_cast<std::size_t>(assign[i])] += img[i];
      ++cnt[static_cast<std::size_t>(assign[i])];
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(assign[i]);
      const double mean = sum[c] / cnt[c];
      s += (img[i] - mean) * (img[i] - mean);
    }
    best = std::min(best, s);
    std::size_t pos = 0;
    while (pos < n && ++assign[pos] == k) assign[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

double naive_log_likelihood(const GrayImage& img, const lesionseg::GmmParams& p) {
  double ll = 0.0;
  for (double x : img.pixels()) {
    double mix = 0.0;
    for (std::size_t j = 0; j < p.means.size(); ++j) {
      const double var = p.variances[j];
      mix += p.weights[j] / std::sqrt(2.0 * M_PI * var) *
             std::exp(-(x - p.means[j]) * (x - p.means[j]) / (2.0 * var));
    }
    ll += std::log(mix);
  }
  return ll;
}

double naive_responsibility(double x, const lesionseg::GmmParams& p, std::size_t j) {
  auto term = [&](std::size_t c) {
    const double var = p.variances[c];
    return p.weights[c] / std::sqrt(2.0 * M_PI * var) *
           std::exp(-(x - p.means[c]) * (x - p.means[c]) / (2.0 * var));
  };
  double total = 0.0;
  for (std::size_t c = 0; c < p.means.size(); ++c) total += term(c);
  return term(j) / total;
}

std::vector<int> naive_flood(const GrayImage& g, const lesionseg::MarkerSet& markers,
                             int connectivity) {
  const int w = g.width();
  const int h = g.height();
  const std::size_t n = g.size();
  std::vector<int> label(n, -1);
  std::vector<double> prio(n, 0.0);
  std::vector<long> order(n, -1);
  std::vector<bool> done(n, false);
  for (const auto& m : markers.internal) label[static_cast<std::size_t>(m.pos.y * w + m.pos.x)] = m.label;
  for (const auto& p : markers.external) label[static_cast<std::size_t>(p.y * w + p.x)] = 0;
  long counter = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] >= 0) {
      prio[i] = g[i];
      order[i] = counter++;
    }
  }
  for (;;) {
    long best = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (label[i] < 0 || done[i]) continue;
      if (best < 0 || prio[i] < prio[static_cast<std::size_t>(best)] ||
          (prio[i] == prio[static_cast<std::size_t>(best)] && order[i] < order[static_cast<std::size_t>(best)])) {
        best = static_cast<long>(i);
      }
    }
    if (best < 0) break;
    const auto b = static_cast<std::size_t>(best);
    done[b] = true;
    const int bx = static_cast<int>(b) % w;
    const int by = static_cast<int>(b) / w;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        if (connectivity == 4 && dx != 0 && dy != 0) continue;
        const int nx = bx + dx;
        const int ny = by + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const auto q = static_cast<std::size_t>(ny * w + nx);
        if (label[q] >= 0) continue;
        label[q] = label[b];
        prio[q] = std::max(g[q], prio[b]);
        order[q] = counter++;
      }
    }
  }
  return label;
}

GrayImage direct_gradient(const GrayImage& img, int r) {
  std::vector<double> out(img.size());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double hi = 0.0;
      double lo = 1.0;
      for (int yy = y - r; yy <= y + r; ++yy) {
        for (int xx = x - r; xx <= x + r; ++xx) {
          if (xx < 0 || yy < 0 || xx >= img.width() || yy >= img.height()) continue;
          hi = std::max(hi, img.at(xx, yy));
          lo = std::min(lo, img.at(xx, yy));
        }
      }
      out[img.index(x, y)] = hi - lo;
    }
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

int component_count(const std::vector<int>& labels, int w, int h, int label, int connectivity) {
  std::vector<bool> seen(labels.size(), false);
  int count = 0;
  std::function<void(int, int)> visit = [&](int x, int y) {
    const auto i = static_cast<std::size_t>(y * w + x);
    if (seen[i] || labels[i] != label) return;
    seen[i] = true;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if ((dx == 0 && dy == 0) || (connectivity == 4 && dx != 0 && dy != 0)) continue;
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx >= 0 && ny >= 0 && nx < w && ny < h) visit(nx, ny);
      }
    }
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto i = static_cast<std::size_t>(y * w + x);
      if (labels[i] == label && !seen[i]) {
        ++count;
        visit(x, y);
      }
    }
  }
  return count;
}

}  // namespace oracle
