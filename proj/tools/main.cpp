// lesionseg: segment bright lesions, evaluate masks and benchmark corpora.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lesionseg/corpus.hpp"
#include "lesionseg/error.hpp"
#include "lesionseg/io.hpp"
#include "lesionseg/metrics.hpp"
#include "lesionseg/overlay.hpp"
#include "lesionseg/phantom.hpp"
#include "lesionseg/pipeline.hpp"

namespace fs = std::filesystem;
using namespace lesionseg;

namespace {

struct GlobalOptions {
  std::string out_dir = ".";
  int jobs = 1;
  std::optional<std::string> spacing;
};

// Flags shared by segment and benchmark. Unset optionals keep the value
// coming from the manifest or the per-method default.
struct MethodFlags {
  std::optional<int> k;
  std::optional<int> max_iter;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> markers;
  std::optional<int> se_radius;
  bool no_merge_markers = false;
  bool pooled_variance = false;
  std::optional<std::string> clahe_tiles;
  std::optional<double> clahe_clip;
  bool no_clahe = false;
  bool clahe_full_image = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--k", k, "Cluster / mixture component count");
    cmd->add_option("--max-iter", max_iter, "Iteration cap");
    cmd->add_option("--tol", tol, "Convergence threshold");
    cmd->add_option("--seed", seed, "Seed for the GMM collapse re-initialization");
    cmd->add_option("--markers", markers, "MCWT internal marker count");
    cmd->add_option("--se-radius", se_radius, "Structuring element radius");
    cmd->add_flag("--no-merge-markers", no_merge_markers, "Keep touching markers as separate seeds");
    cmd->add_flag("--pooled-variance", pooled_variance, "Share one variance across GMM components");
    cmd->add_option("--clahe-tiles", clahe_tiles, "CLAHE tile grid NxM");
    cmd->add_option("--clahe-clip", clahe_clip, "CLAHE clip limit in (0,1]");
    cmd->add_flag("--no-clahe", no_clahe, "Skip contrast enhancement");
    cmd->add_flag("--clahe-full-image", clahe_full_image, "Enhance the full image before cropping");
  }

  void apply(PipelineConfig& c) const {
    if (k) c.kmeans.k = c.gmm.k = *k;
    if (max_iter) c.kmeans.max_iter = c.gmm.max_iter = *max_iter;
    if (tol) c.kmeans.tol = c.gmm.tol = *tol;
    if (seed) c.gmm.seed = *seed;
    if (markers) c.mcwt.n_markers = *markers;
    if (se_radius) c.mcwt.se.radius = *se_radius;
    if (no_merge_markers) c.mcwt.merge_markers = false;
    if (pooled_variance) c.gmm.pooled_variance = true;
    if (clahe_tiles) {
      const auto x = clahe_tiles->find_first_of("xX");
      try {
        if (x == std::string::npos) throw std::invalid_argument("");
        c.clahe.tiles_x = std::stoi(clahe_tiles->substr(0, x));
        c.clahe.tiles_y = std::stoi(clahe_tiles->substr(x + 1));
      } catch (const std::exception&) {
        throw ConfigError("--clahe-tiles expects NxM, got '" + *clahe_tiles + "'");
      }
    }
    if (clahe_clip) c.clahe.clip_limit = *clahe_clip;
    if (no_clahe) c.use_clahe = false;
    if (clahe_full_image) c.clahe_full_image = true;
  }
};

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw FormatError("cannot open '" + p.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + p.string() + "'");
  out << text;
}

PixelSpacing spacing_from(const GlobalOptions& g, const PixelSpacing& fallback) {
  return g.spacing ? parse_spacing(*g.spacing) : fallback;
}

// ---------------------------------------------------------------- segment

struct SegmentArgs {
  std::string image;
  std::string roi;
  std::string truth;
  std::string method;
  std::string manifest;
  MethodFlags flags;
};

int cmd_segment(const GlobalOptions& g, const SegmentArgs& a) {
  RunManifest m;
  if (!a.manifest.empty()) m = manifest_from_json(read_text(a.manifest));
  m.command = "segment";
  if (!a.method.empty()) m.config.method = parse_method(a.method);
  a.flags.apply(m.config);
  m.spacing = spacing_from(g, m.spacing);
  m.config.validate();
  m.spacing.validate();

  if (!a.image.empty()) m.paths["image"] = a.image;
  if (!a.roi.empty()) m.paths["roi"] = a.roi;
  if (!a.truth.empty()) m.paths["truth"] = a.truth;
  if (!m.paths.contains("image")) throw ConfigError("segment needs --image (or a manifest naming one)");

  const GrayImage img = load_image(m.paths.at("image"));
  const RegionOfInterest roi = m.paths.contains("roi")
                                   ? load_roi(m.paths.at("roi"))
                                   : RegionOfInterest::full(img.width(), img.height());
  std::optional<BinaryMask> truth;
  if (m.paths.contains("truth")) truth = load_mask(m.paths.at("truth"));

  const BinaryMask mask = segment_image(img, roi, m.config);

  const fs::path out_dir(g.out_dir);
  fs::create_directories(out_dir);
  const fs::path mask_path = out_dir / "mask.png";
  const fs::path overlay_path = out_dir / "overlay.png";
  save_mask(mask, mask_path);
  save_overlay(overlay_path, img, mask, truth ? &*truth : nullptr);
  m.paths["mask"] = mask_path.string();
  m.paths["overlay"] = overlay_path.string();
  write_text(out_dir / "manifest.json", manifest_to_json(m));

  if (truth) {
    CaseMetrics row = evaluate_case(mask, *truth, m.spacing);
    row.case_id = fs::path(m.paths.at("image")).stem().string();
    row.method = std::string(method_name(m.config.method));
    std::cout << csv_header() << '\n' << csv_row(row) << '\n';
  }
  std::cerr << "wrote " << mask_path.string() << ", " << overlay_path.string() << ", "
            << (out_dir / "manifest.json").string() << '\n';
  return 0;
}

// --------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string pred;
  std::string truth;
  std::string case_id;
  std::string method = "-";
  std::string output;
};

int cmd_evaluate(const GlobalOptions& g, const EvaluateArgs& a) {
  const PixelSpacing spacing = spacing_from(g, PixelSpacing{});
  const BinaryMask pred = load_mask(a.pred);
  const BinaryMask truth = load_mask(a.truth);
  CaseMetrics row = evaluate_case(pred, truth, spacing);
  row.case_id = a.case_id.empty() ? fs::path(a.pred).stem().string() : a.case_id;
  row.method = a.method;
  for (Metric m : kAllMetrics) {
    if (!row.get(m)) {
      std::cerr << "warning: " << metric_column(m) << " is undefined for these masks\n";
    }
  }
  const std::string text = csv_header() + "\n" + csv_row(row) + "\n";
  if (a.output.empty()) {
    std::cout << text;
  } else {
    write_text(a.output, text);
  }
  return 0;
}

// -------------------------------------------------------------- benchmark

struct BenchmarkArgs {
  std::string corpus;
  std::optional<std::string> methods;
  std::optional<std::string> marker_sweep;
  bool no_masks = false;
  std::string manifest;
  MethodFlags flags;
};

// Every method shares the base config; only the method differs. A manifest
// supplies the base, the method list, the corpus and the sweep, and any flag
// given on the command line overrides it.
int cmd_benchmark(const GlobalOptions& g, const BenchmarkArgs& a) {
  RunManifest m;
  if (!a.manifest.empty()) {
    m = manifest_from_json(read_text(a.manifest));
    if (m.command != "benchmark") throw ConfigError("'" + a.manifest + "' is not a benchmark manifest");
  }
  if (!a.corpus.empty()) m.paths["corpus"] = a.corpus;
  if (!m.paths.contains("corpus")) throw ConfigError("benchmark needs --corpus (or a manifest naming one)");
  if (a.methods) m.extra["methods"] = *a.methods;
  if (!m.extra.contains("methods")) m.extra["methods"] = "kmeans,gmm,mcwt";
  if (a.marker_sweep) m.extra["marker_sweep"] = *a.marker_sweep;
  a.flags.apply(m.config);
  m.command = "benchmark";
  m.spacing = spacing_from(g, m.spacing);
  m.version = std::string(version());

  BenchmarkOptions opts;
  std::stringstream list(m.extra["methods"]);
  for (std::string name; std::getline(list, name, ',');) {
    if (name.empty()) continue;
    PipelineConfig cfg = m.config;
    cfg.method = parse_method(name);
    cfg.validate();
    opts.methods.push_back(cfg);
  }
  if (opts.methods.empty()) throw ConfigError("--methods names no method");
  m.config.method = opts.methods.front().method;
  opts.spacing = m.spacing;
  opts.jobs = g.jobs;
  if (m.extra.contains("marker_sweep")) opts.marker_sweep = parse_range(m.extra["marker_sweep"]);

  const fs::path out_dir(g.out_dir);
  if (!a.no_masks) opts.mask_dir = out_dir / "cases";

  const std::string corpus = m.paths["corpus"];
  const auto cases = discover_corpus(corpus);
  if (cases.empty()) throw ConfigError("no cases found under '" + corpus + "'");
  const BenchmarkResult result = run_benchmark(cases, opts);
  write_benchmark_outputs(result, out_dir);

  m.paths["results"] = (out_dir / "results.csv").string();
  m.extra["cases"] = std::to_string(cases.size());
  write_text(out_dir / "manifest.json", manifest_to_json(m));

  std::cout << render_summary_table(result.summaries);
  std::size_t failed = 0;
  for (const auto& r : result.rows) failed += r.error.empty() ? 0 : 1;
  if (failed > 0) std::cerr << "warning: " << failed << " case/method runs failed; see results.csv\n";
  return 0;
}

// ---------------------------------------------------------------- phantom

struct PhantomArgs {
  std::string spec;
  int corpus = 0;
  std::uint64_t seed = 1;
  double noise = 0.1;
  double softness = 1.5;
  int size = 64;
};

void write_phantom(const PhantomSpec& spec, const fs::path& dir) {
  fs::create_directories(dir);
  const Phantom p = generate_phantom(spec);
  save_image(p.image, dir / "image.png", 16);
  save_mask(p.truth, dir / "truth.png");
  RunManifest m;
  m.command = "phantom";
  m.paths["image"] = (dir / "image.png").string();
  m.paths["truth"] = (dir / "truth.png").string();
  m.extra["noise_generator"] = noise_generator_name();
  m.extra["phantom_spec"] = phantom_spec_to_json(spec);
  write_text(dir / "manifest.json", manifest_to_json(m));
}

int cmd_phantom(const GlobalOptions& g, const PhantomArgs& a) {
  const fs::path out_dir(g.out_dir);
  if (!a.spec.empty()) {
    write_phantom(load_phantom_spec(a.spec), out_dir);
    std::cerr << "wrote phantom to " << out_dir.string() << '\n';
    return 0;
  }
  if (a.corpus < 1) throw ConfigError("phantom needs --spec FILE or --corpus N");
  const auto specs = phantom_corpus(a.corpus, a.seed, a.noise, a.softness, a.size);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "case%03zu", i);
    write_phantom(specs[i], out_dir / name);
  }
  std::cerr << "wrote " << specs.size() << " phantom cases to " << out_dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised lesion segmentation (K-means, GMM-EM, marker-controlled watershed)"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(version()));

  GlobalOptions g;
  app.add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Concurrent cases in benchmark")->check(CLI::Range(1, 256));
  app.add_option("--spacing", g.spacing, "Pixel spacing DXxDY in mm (default 1x1)");

  SegmentArgs seg;
  auto* segment = app.add_subcommand("segment", "Segment one image");
  segment->add_option("--image", seg.image, "Input image (PNG/PGM)");
  segment->add_option("--roi", seg.roi, "ROI JSON file");
  segment->add_option("--truth", seg.truth, "Ground-truth mask for overlay and metrics");
  segment->add_option("--method", seg.method, "kmeans | gmm | mcwt (default mcwt)");
  segment->add_option("--manifest", seg.manifest, "Re-run from a manifest.json");
  seg.flags.add_to(segment);

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score a mask against ground truth");
  evaluate->add_option("--pred", ev.pred, "Predicted mask")->required();
  evaluate->add_option("--truth", ev.truth, "Ground-truth mask")->required();
  evaluate->add_option("--case", ev.case_id, "Case id for the CSV row");
  evaluate->add_option("--method", ev.method, "Method label for the CSV row");
  evaluate->add_option("--output", ev.output, "Write the CSV here instead of stdout");

  BenchmarkArgs bench;
  auto* benchmark = app.add_subcommand("benchmark", "Run methods over a corpus");
  benchmark->add_option("--corpus", bench.corpus, "Directory of case subdirectories");
  benchmark->add_option("--methods", bench.methods, "Comma-separated method list (default kmeans,gmm,mcwt)");
  benchmark->add_option("--manifest", bench.manifest, "Re-run from a benchmark manifest.json");
  benchmark->add_option("--marker-sweep", bench.marker_sweep, "MCWT marker sweep A:B");
  benchmark->add_flag("--no-masks", bench.no_masks, "Do not write per-case masks and overlays");
  bench.flags.add_to(benchmark);

  PhantomArgs ph;
  auto* phantom = app.add_subcommand("phantom", "Generate synthetic lesion phantoms");
  phantom->add_option("--spec", ph.spec, "Phantom spec JSON");
  phantom->add_option("--corpus", ph.corpus, "Generate N random cases instead");
  phantom->add_option("--seed", ph.seed, "Corpus seed")->capture_default_str();
  phantom->add_option("--noise", ph.noise, "Corpus noise sigma")->capture_default_str();
  phantom->add_option("--softness", ph.softness, "Corpus blur sigma")->capture_default_str();
  phantom->add_option("--size", ph.size, "Corpus image size")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (segment->parsed()) return cmd_segment(g, seg);
    if (evaluate->parsed()) return cmd_evaluate(g, ev);
    if (benchmark->parsed()) return cmd_benchmark(g, bench);
    if (phantom->parsed()) return cmd_phantom(g, ph);
  } catch (const std::exception& e) {
    std::cerr << "lesionseg: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
