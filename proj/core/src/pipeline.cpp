#include "lesionseg/pipeline.hpp"

#include "json.hpp"
#include "lesionseg/error.hpp"

namespace lesionseg {
namespace {

using json = nlohmann::json;

json config_to_json(const PipelineConfig& c) {
  return {
      {"method", std::string(method_name(c.method))},
      {"kmeans", {{"k", c.kmeans.k}, {"max_iter", c.kmeans.max_iter}, {"tol", c.kmeans.tol}}},
      {"gmm",
       {{"k", c.gmm.k},
        {"max_iter", c.gmm.max_iter},
        {"tol", c.gmm.tol},
        {"seed", c.gmm.seed},
        {"pooled_variance", c.gmm.pooled_variance}}},
      {"mcwt",
       {{"markers", c.mcwt.n_markers},
        {"se_radius", c.mcwt.se.radius},
        {"merge_markers", c.mcwt.merge_markers}}},
      {"clahe",
       {{"enabled", c.use_clahe},
        {"full_image", c.clahe_full_image},
        {"tiles_x", c.clahe.tiles_x},
        {"tiles_y", c.clahe.tiles_y},
        {"clip_limit", c.clahe.clip_limit},
        {"bins", c.clahe.bins}}},
  };
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig c;
  if (j.contains("method")) c.method = parse_method(j.at("method").get<std::string>());
  if (j.contains("kmeans")) {
    const auto& k = j.at("kmeans");
    c.kmeans.k = k.value("k", c.kmeans.k);
    c.kmeans.max_iter = k.value("max_iter", c.kmeans.max_iter);
    c.kmeans.tol = k.value("tol", c.kmeans.tol);
  }
  if (j.contains("gmm")) {
    const auto& g = j.at("gmm");
    c.gmm.k = g.value("k", c.gmm.k);
    c.gmm.max_iter = g.value("max_iter", c.gmm.max_iter);
    c.gmm.tol = g.value("tol", c.gmm.tol);
    c.gmm.seed = g.value("seed", c.gmm.seed);
    c.gmm.pooled_variance = g.value("pooled_variance", c.gmm.pooled_variance);
  }
  if (j.contains("mcwt")) {
    const auto& m = j.at("mcwt");
    c.mcwt.n_markers = m.value("markers", c.mcwt.n_markers);
    c.mcwt.se.radius = m.value("se_radius", c.mcwt.se.radius);
    c.mcwt.merge_markers = m.value("merge_markers", c.mcwt.merge_markers);
  }
  if (j.contains("clahe")) {
    const auto& h = j.at("clahe");
    c.use_clahe = h.value("enabled", c.use_clahe);
    c.clahe_full_image = h.value("full_image", c.clahe_full_image);
    c.clahe.tiles_x = h.value("tiles_x", c.clahe.tiles_x);
    c.clahe.tiles_y = h.value("tiles_y", c.clahe.tiles_y);
    c.clahe.clip_limit = h.value("clip_limit", c.clahe.clip_limit);
    c.clahe.bins = h.value("bins", c.clahe.bins);
  }
  return c;
}

}  // namespace

std::string_view version() { return LESIONSEG_VERSION; }

std::string_view method_name(Method m) {
  switch (m) {
    case Method::KMeans: return "kmeans";
    case Method::Gmm: return "gmm";
    case Method::Mcwt: return "mcwt";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "kmeans" || name == "km") return Method::KMeans;
  if (name == "gmm") return Method::Gmm;
  if (name == "mcwt" || name == "watershed") return Method::Mcwt;
  throw ConfigError("unknown method '" + std::string(name) + "' (expected kmeans, gmm or mcwt)");
}

void PipelineConfig::validate() const {
  switch (method) {
    case Method::KMeans: kmeans.validate(); break;
    case Method::Gmm: gmm.validate(); break;
    case Method::Mcwt: mcwt.validate(); break;
  }
  if (use_clahe) clahe.validate();
}

GrayImage preprocess_roi(const GrayImage& img, const RegionOfInterest& roi,
                         const PipelineConfig& cfg) {
  if (!cfg.use_clahe) return crop_roi(img, roi);
  if (cfg.clahe_full_image) return crop_roi(clahe(img, cfg.clahe), roi);
  return clahe(crop_roi(img, roi), cfg.clahe);
}

BinaryMask segment_roi(const GrayImage& roi_img, const PipelineConfig& cfg) {
  cfg.validate();
  switch (cfg.method) {
    case Method::KMeans: {
      const KmeansResult r = kmeans_cluster(roi_img, cfg.kmeans);
      return select_lesion_cluster(r.labels, roi_img);
    }
    case Method::Gmm: {
      const GmmResult r = gmm_segment(roi_img, cfg.gmm);
      return select_lesion_cluster(r.labels, roi_img);
    }
    case Method::Mcwt:
      return mcwt_segment(roi_img, cfg.mcwt);
  }
  throw ConfigError("unhandled method");
}

BinaryMask segment_image(const GrayImage& img, const RegionOfInterest& roi,
                         const PipelineConfig& cfg) {
  cfg.validate();
  roi.validate(img.width(), img.height());
  const GrayImage prepared = preprocess_roi(img, roi, cfg);
  return embed_roi(segment_roi(prepared, cfg), roi, img.width(), img.height());
}

std::string manifest_to_json(const RunManifest& m) {
  json doc = {{"command", m.command},
              {"config", config_to_json(m.config)},
              {"spacing", {{"dx", m.spacing.dx}, {"dy", m.spacing.dy}}},
              {"paths", m.paths},
              {"version", m.version}};
  if (!m.extra.empty()) doc["extra"] = m.extra;
  return doc.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  RunManifest m;
  try {
    const json doc = json::parse(text);
    m.command = doc.value("command", m.command);
    if (doc.contains("config")) m.config = config_from_json(doc.at("config"));
    if (doc.contains("spacing")) {
      m.spacing.dx = doc.at("spacing").value("dx", 1.0);
      m.spacing.dy = doc.at("spacing").value("dy", 1.0);
    }
    if (doc.contains("paths")) m.paths = doc.at("paths").get<std::map<std::string, std::string>>();
    if (doc.contains("extra")) m.extra = doc.at("extra").get<std::map<std::string, std::string>>();
    m.version = doc.value("version", m.version);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid manifest: ") + e.what());
  }
  return m;
}

}  // namespace lesionseg
