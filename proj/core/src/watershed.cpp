#include "lesionseg/watershed.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <string>

#include "lesionseg/error.hpp"

namespace lesionseg {
namespace {

constexpr int kUnlabelled = -1;

struct Offset {
  int dx;
  int dy;
};

constexpr Offset kEight[] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                             {1, 0},   {-1, 1}, {0, 1},  {1, 1}};
constexpr Offset kFour[] = {{0, -1}, {-1, 0}, {1, 0}, {0, 1}};

std::span<const Offset> neighbours(Connectivity c) {
  if (c == Connectivity::Four) return kFour;
  return kEight;
}

bool on_border(int x, int y, int w, int h) {
  return x == 0 || y == 0 || x == w - 1 || y == h - 1;
}

std::size_t perimeter(int w, int h) {
  if (w <= 2 || h <= 2) return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  return 2 * static_cast<std::size_t>(w) + 2 * static_cast<std::size_t>(h) - 4;
}

struct QueueEntry {
  double priority;
  std::uint64_t seq;
  int index;
};

struct LaterFirst {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.priority != b.priority) return a.priority > b.priority;
    return a.seq > b.seq;
  }
};

}  // namespace

int MarkerSet::label_count() const {
  int top = kBackgroundLabel;
  for (const auto& m : internal) top = std::max(top, m.label);
  return top + 1;
}

void MarkerSet::validate(int width, int height) const {
  if (internal.empty() || external.empty()) {
    throw ConfigError("marker set needs at least one internal and one external marker");
  }
  std::vector<int> seen(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), kUnlabelled);
  auto claim = [&](Pixel p, int label) {
    if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) {
      throw BoundsError("marker (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                        ") outside the image");
    }
    auto& slot = seen[static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(p.x)];
    if (slot != kUnlabelled) {
      throw ConfigError("marker (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                        ") listed twice");
    }
    slot = label;
  };
  for (const auto& m : internal) {
    if (m.label <= kBackgroundLabel) throw ConfigError("internal marker labels must be >= 1");
    claim(m.pos, m.label);
  }
  for (const auto& p : external) claim(p, kBackgroundLabel);
}

MarkerSet select_markers(const GrayImage& img, int n, bool merge) {
  const int w = img.width();
  const int h = img.height();
  const std::size_t limit = img.size() - perimeter(w, h);
  if (n < 1 || static_cast<std::size_t>(n) > limit) {
    throw ConfigError("marker count " + std::to_string(n) + " outside [1," +
                      std::to_string(limit) + "] for a " + std::to_string(w) + "x" +
                      std::to_string(h) + " ROI");
  }
  std::vector<std::size_t> order(img.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return img[a] > img[b]; });

  std::vector<int> label(img.size(), kUnlabelled);
  constexpr int kSelected = 0;
  for (int i = 0; i < n; ++i) label[order[static_cast<std::size_t>(i)]] = kSelected;

  MarkerSet markers;
  int next = 1;
  std::vector<std::size_t> stack;
  for (std::size_t idx = 0; idx < img.size(); ++idx) {
    if (label[idx] != kSelected) continue;
    if (!merge) {
      label[idx] = next++;
      continue;
    }
    const int current = next++;
    label[idx] = current;
    stack.assign(1, idx);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const int px = static_cast<int>(p % static_cast<std::size_t>(w));
      const int py = static_cast<int>(p / static_cast<std::size_t>(w));
      for (const auto& o : kEight) {
        const int qx = px + o.dx;
        const int qy = py + o.dy;
        if (!img.contains(qx, qy)) continue;
        const std::size_t q = img.index(qx, qy);
        if (label[q] == kSelected) {
          label[q] = current;
          stack.push_back(q);
        }
      }
    }
  }

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int l = label[img.index(x, y)];
      if (l > 0) {
        markers.internal.push_back({{x, y}, l});
      } else if (on_border(x, y, w, h)) {
        markers.external.push_back({x, y});
      }
    }
  }
  if (markers.external.empty()) {
    throw MarkerConflictError("internal markers cover the whole ROI border; no external marker left");
  }
  return markers;
}

LabelMap watershed_flood(const GrayImage& gradient, const MarkerSet& markers,
                         Connectivity connectivity, std::vector<double>* pop_trace) {
  const int w = gradient.width();
  const int h = gradient.height();
  markers.validate(w, h);

  std::vector<int> label(gradient.size(), kUnlabelled);
  for (const auto& m : markers.internal) label[gradient.index(m.pos.x, m.pos.y)] = m.label;
  for (const auto& p : markers.external) label[gradient.index(p.x, p.y)] = kBackgroundLabel;

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, LaterFirst> queue;
  std::uint64_t seq = 0;
  for (std::size_t i = 0; i < gradient.size(); ++i) {
    if (label[i] != kUnlabelled) queue.push({gradient[i], seq++, static_cast<int>(i)});
  }

  const auto offsets = neighbours(connectivity);
  while (!queue.empty()) {
    const QueueEntry top = queue.top();
    queue.pop();
    if (pop_trace != nullptr) pop_trace->push_back(top.priority);
    const int px = top.index % w;
    const int py = top.index / w;
    const int l = label[static_cast<std::size_t>(top.index)];
    for (const auto& o : offsets) {
      const int qx = px + o.dx;
      const int qy = py + o.dy;
      if (!gradient.contains(qx, qy)) continue;
      const std::size_t q = gradient.index(qx, qy);
      if (label[q] != kUnlabelled) continue;
      label[q] = l;
      queue.push({std::max(gradient[q], top.priority), seq++, static_cast<int>(q)});
    }
  }
  return LabelMap(w, h, markers.label_count(), std::move(label));
}

void McwtConfig::validate() const {
  se.validate();
  if (n_markers < 1) throw ConfigError("marker count must be >= 1, got " + std::to_string(n_markers));
}

BinaryMask mcwt_segment(const GrayImage& img, const McwtConfig& cfg) {
  cfg.validate();
  const GrayImage gradient = morphological_gradient(img, cfg.se);
  const MarkerSet markers = select_markers(img, cfg.n_markers, cfg.merge_markers);
  const LabelMap regions = watershed_flood(gradient, markers, Connectivity::Eight);
  BinaryMask mask(img.width(), img.height());
  for (std::size_t i = 0; i < regions.size(); ++i) mask.set(i, regions[i] != kBackgroundLabel);
  return mask;
}

}  // namespace lesionseg
