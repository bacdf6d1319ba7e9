#include "lesionseg/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "lesionseg/error.hpp"

namespace lesionseg {
namespace {

using json = nlohmann::json;

// Uniform in (0,1) from the top 53 bits; never 0, so log() is finite.
double open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> gaussian_kernel(double sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    const double v = std::exp(-0.5 * i * i / (sigma * sigma));
    k[static_cast<std::size_t>(i + r)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable blur with replicated borders.
std::vector<double> blur(const std::vector<double>& src, int w, int h, double sigma) {
  const auto kernel = gaussian_kernel(sigma);
  const int r = static_cast<int>(kernel.size() / 2);
  auto at = [w](int x, int y) { return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x); };
  std::vector<double> tmp(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) {
        s += kernel[static_cast<std::size_t>(i + r)] * src[at(std::clamp(x + i, 0, w - 1), y)];
      }
      tmp[at(x, y)] = s;
    }
  }
  std::vector<double> out(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) {
        s += kernel[static_cast<std::size_t>(i + r)] * tmp[at(x, std::clamp(y + i, 0, h - 1))];
      }
      out[at(x, y)] = s;
    }
  }
  return out;
}

void check_unit(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw ConfigError(std::string(what) + " must be in [0,1]");
  }
}

}  // namespace

void PhantomSpec::validate() const {
  if (width < 1 || height < 1) throw ConfigError("phantom extent must be positive");
  check_unit(lesion_intensity, "lesion intensity");
  check_unit(background_intensity, "background intensity");
  if (!(lesion_intensity > background_intensity)) {
    throw ConfigError("lesion intensity must exceed background intensity");
  }
  if (!(softness >= 0.0) || !std::isfinite(softness)) throw ConfigError("softness must be >= 0");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw ConfigError("noise sigma must be >= 0");
  for (const Disk& d : disks) {
    if (!(d.radius > 0.0) || d.cx - d.radius < 0.0 || d.cy - d.radius < 0.0 ||
        d.cx + d.radius > width - 1 || d.cy + d.radius > height - 1) {
      throw ConfigError("disk at (" + std::to_string(d.cx) + "," + std::to_string(d.cy) +
                        ") radius " + std::to_string(d.radius) + " does not lie inside the image");
    }
  }
}

BinaryMask rasterize_disks(int width, int height, const std::vector<Disk>& disks) {
  BinaryMask mask(width, height);
  for (const Disk& d : disks) {
    const int x0 = std::max(0, static_cast<int>(std::floor(d.cx - d.radius)));
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(d.cx + d.radius)));
    const int y0 = std::max(0, static_cast<int>(std::floor(d.cy - d.radius)));
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(d.cy + d.radius)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double dx = x - d.cx;
        const double dy = y - d.cy;
        if (dx * dx + dy * dy <= d.radius * d.radius) mask.set(x, y, true);
      }
    }
  }
  return mask;
}

std::vector<double> standard_normal_field(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 engine(seed);
  std::vector<double> out;
  out.reserve(count + 1);
  while (out.size() < count) {
    const double u1 = open_unit(engine());
    const double u2 = open_unit(engine());
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out.push_back(radius * std::cos(angle));
    out.push_back(radius * std::sin(angle));
  }
  out.resize(count);
  return out;
}

std::string noise_generator_name() { return "mt19937_64+box-muller"; }

Phantom generate_phantom(const PhantomSpec& spec) {
  spec.validate();
  BinaryMask truth = rasterize_disks(spec.width, spec.height, spec.disks);
  std::vector<double> px(truth.size());
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = truth[i] ? spec.lesion_intensity : spec.background_intensity;
  }
  if (spec.softness > 0.0) px = blur(px, spec.width, spec.height, spec.softness);
  if (spec.noise_sigma > 0.0) {
    const auto noise = standard_normal_field(spec.seed, px.size());
    for (std::size_t i = 0; i < px.size(); ++i) px[i] += spec.noise_sigma * noise[i];
  }
  for (double& v : px) v = std::clamp(v, 0.0, 1.0);
  return {GrayImage(spec.width, spec.height, std::move(px)), std::move(truth)};
}

std::string phantom_spec_to_json(const PhantomSpec& spec) {
  json disks = json::array();
  for (const Disk& d : spec.disks) disks.push_back({{"cx", d.cx}, {"cy", d.cy}, {"radius", d.radius}});
  json doc = {{"width", spec.width},
              {"height", spec.height},
              {"disks", disks},
              {"lesion_intensity", spec.lesion_intensity},
              {"background_intensity", spec.background_intensity},
              {"softness", spec.softness},
              {"noise_sigma", spec.noise_sigma},
              {"seed", spec.seed}};
  return doc.dump(2);
}

PhantomSpec phantom_spec_from_json(const std::string& text) {
  PhantomSpec spec;
  try {
    const json doc = json::parse(text);
    spec.width = doc.value("width", spec.width);
    spec.height = doc.value("height", spec.height);
    spec.lesion_intensity = doc.value("lesion_intensity", spec.lesion_intensity);
    spec.background_intensity = doc.value("background_intensity", spec.background_intensity);
    spec.softness = doc.value("softness", spec.softness);
    spec.noise_sigma = doc.value("noise_sigma", spec.noise_sigma);
    spec.seed = doc.value("seed", spec.seed);
    for (const auto& d : doc.at("disks")) {
      spec.disks.push_back({d.at("cx").get<double>(), d.at("cy").get<double>(),
                            d.at("radius").get<double>()});
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid phantom spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

PhantomSpec load_phantom_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open phantom spec '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return phantom_spec_from_json(text.str());
}

std::vector<PhantomSpec> phantom_corpus(int count, std::uint64_t seed, double noise_sigma,
                                        double softness, int size) {
  if (count < 1) throw ConfigError("corpus size must be >= 1");
  if (size < 40) throw ConfigError("corpus images must be at least 40 pixels wide");
  std::mt19937_64 engine(seed);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * open_unit(engine()); };
  std::vector<PhantomSpec> out;
  for (int i = 0; i < count; ++i) {
    PhantomSpec spec;
    spec.width = size;
    spec.height = size;
    spec.softness = softness;
    spec.noise_sigma = noise_sigma;
    const double r = std::round(uniform(10.0, 18.0));
    const double margin = r + 4.0;
    spec.disks.push_back({std::round(uniform(margin, size - 1 - margin)),
                          std::round(uniform(margin, size - 1 - margin)), r});
    spec.seed = engine();
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace lesionseg
