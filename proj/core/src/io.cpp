#include "lesionseg/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lesionseg/error.hpp"

namespace lesionseg {
namespace {

using json = nlohmann::json;

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) {
    throw FormatError("cannot open '" + path.string() + "'");
  }
  return f;
}

// Decoded samples before normalization.
struct Samples {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  std::uint32_t maxval = 255;
  std::vector<std::uint16_t> values;
};

struct PngReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::string error;
  ~PngReadState() {
    if (png != nullptr) png_destroy_read_struct(&png, info != nullptr ? &info : nullptr, nullptr);
  }
};

void png_error_handler(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngReadState*>(png_get_error_ptr(png));
  state->error = msg;
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

const char* color_type_name(int color_type) {
  switch (color_type) {
    case PNG_COLOR_TYPE_RGB: return "RGB";
    case PNG_COLOR_TYPE_RGB_ALPHA: return "RGBA";
    case PNG_COLOR_TYPE_GRAY_ALPHA: return "gray+alpha";
    case PNG_COLOR_TYPE_PALETTE: return "palette";
    default: return "unknown";
  }
}

// Reads rows into `out`; returns false with state->error set on libpng failure.
// Only trivially destructible locals live in this frame across setjmp.
bool read_png_rows(std::FILE* file, PngReadState* state, Samples* out,
                   std::vector<png_byte>* buffer, std::vector<png_bytep>* rows,
                   std::string* format_problem) {
  if (setjmp(png_jmpbuf(state->png))) return false;
  png_init_io(state->png, file);
  png_read_info(state->png, state->info);

  const int color_type = png_get_color_type(state->png, state->info);
  const int depth = png_get_bit_depth(state->png, state->info);
  if (color_type != PNG_COLOR_TYPE_GRAY) {
    format_problem->assign(color_type_name(color_type));
    return true;
  }
  if (depth < 8) png_set_expand_gray_1_2_4_to_8(state->png);
  png_read_update_info(state->png, state->info);

  out->width = static_cast<int>(png_get_image_width(state->png, state->info));
  out->height = static_cast<int>(png_get_image_height(state->png, state->info));
  out->bit_depth = depth == 16 ? 16 : 8;
  out->maxval = depth == 16 ? 65535u : 255u;

  const std::size_t rowbytes = png_get_rowbytes(state->png, state->info);
  buffer->resize(rowbytes * static_cast<std::size_t>(out->height));
  rows->resize(static_cast<std::size_t>(out->height));
  for (int y = 0; y < out->height; ++y) {
    (*rows)[static_cast<std::size_t>(y)] = buffer->data() + rowbytes * static_cast<std::size_t>(y);
  }
  png_read_image(state->png, rows->data());
  png_read_end(state->png, nullptr);
  return true;
}

Samples read_png(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  PngReadState state;
  state.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &state, png_error_handler,
                                     png_warning_handler);
  if (state.png == nullptr) throw FormatError("libpng initialisation failed");
  state.info = png_create_info_struct(state.png);
  if (state.info == nullptr) throw FormatError("libpng initialisation failed");

  Samples out;
  std::vector<png_byte> buffer;
  std::vector<png_bytep> rows;
  std::string problem;
  if (!read_png_rows(file.get(), &state, &out, &buffer, &rows, &problem)) {
    throw FormatError("corrupt PNG '" + path.string() + "': " + state.error);
  }
  if (!problem.empty()) {
    throw FormatError("'" + path.string() + "' is a multi-channel or non-gray PNG (" + problem +
                      "); only single-channel gray is supported");
  }

  const std::size_t n = static_cast<std::size_t>(out.width) * static_cast<std::size_t>(out.height);
  out.values.resize(n);
  if (out.bit_depth == 16) {
    for (std::size_t i = 0; i < n; ++i) {
      out.values[i] = static_cast<std::uint16_t>((buffer[2 * i] << 8) | buffer[2 * i + 1]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) out.values[i] = buffer[i];
  }
  return out;
}

// Skips whitespace and '#' comments, then reads one unsigned integer.
std::uint32_t read_pgm_field(std::istream& in, const std::string& what,
                             const std::filesystem::path& path) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      in.get();
    } else {
      break;
    }
  }
  std::uint32_t v = 0;
  if (!(in >> v)) throw FormatError("bad PGM header field '" + what + "' in '" + path.string() + "'");
  return v;
}

Samples read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::array<char, 2> magic{};
  in.read(magic.data(), 2);
  if (magic[0] != 'P') throw FormatError("'" + path.string() + "' is not a PGM file");
  if (magic[1] == '6' || magic[1] == '3') {
    throw FormatError("'" + path.string() + "' is a multi-channel PPM; only single-channel gray is supported");
  }
  if (magic[1] != '5') {
    throw FormatError("'" + path.string() + "': only binary PGM (P5) is supported");
  }
  Samples out;
  out.width = static_cast<int>(read_pgm_field(in, "width", path));
  out.height = static_cast<int>(read_pgm_field(in, "height", path));
  out.maxval = read_pgm_field(in, "maxval", path);
  if (out.width < 1 || out.height < 1 || out.maxval < 1 || out.maxval > 65535) {
    throw FormatError("invalid PGM header in '" + path.string() + "'");
  }
  in.get();  // single whitespace before the raster
  out.bit_depth = out.maxval > 255 ? 16 : 8;
  const std::size_t n = static_cast<std::size_t>(out.width) * static_cast<std::size_t>(out.height);
  const std::size_t bytes = n * (out.bit_depth == 16 ? 2 : 1);
  std::vector<unsigned char> raw(bytes);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) {
    throw FormatError("truncated PGM raster in '" + path.string() + "'");
  }
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = out.bit_depth == 16
                        ? static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1])
                        : raw[i];
    if (out.values[i] > out.maxval) {
      throw FormatError("PGM sample exceeds maxval in '" + path.string() + "'");
    }
  }
  return out;
}

Samples read_samples(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw FormatError("cannot open '" + path.string() + "'");
  std::array<unsigned char, 8> sig{};
  probe.read(reinterpret_cast<char*>(sig.data()), sig.size());
  const auto got = static_cast<std::size_t>(probe.gcount());
  probe.close();
  if (got == 8 && png_sig_cmp(sig.data(), 0, 8) == 0) return read_png(path);
  if (got >= 2 && sig[0] == 'P') return read_pgm(path);
  throw FormatError("unsupported image format: '" + path.string() + "'");
}

bool wants_pgm(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".pgm";
}

struct PngWriteState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::string error;
  ~PngWriteState() {
    if (png != nullptr) png_destroy_write_struct(&png, info != nullptr ? &info : nullptr);
  }
};

void png_write_error_handler(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngWriteState*>(png_get_error_ptr(png));
  state->error = msg;
  png_longjmp(png, 1);
}

bool write_png_rows(std::FILE* file, PngWriteState* state, int width, int height,
                    int bit_depth, png_bytep* rows) {
  if (setjmp(png_jmpbuf(state->png))) return false;
  png_init_io(state->png, file);
  png_set_IHDR(state->png, state->info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bit_depth, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(state->png, state->info);
  png_write_image(state->png, rows);
  png_write_end(state->png, nullptr);
  return true;
}

// `bytes` holds big-endian samples for 16-bit output.
void write_raster(int width, int height, int bit_depth, std::span<const std::uint8_t> bytes,
                  const std::filesystem::path& path) {
  const std::size_t row_bytes = static_cast<std::size_t>(width) * (bit_depth == 16 ? 2 : 1);
  if (wants_pgm(path)) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write '" + path.string() + "'");
    out << "P5\n" << width << ' ' << height << '\n' << (bit_depth == 16 ? 65535 : 255) << '\n';
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("write failed for '" + path.string() + "'");
    return;
  }
  FilePtr file = open_file(path, "wb");
  PngWriteState state;
  state.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state, png_write_error_handler,
                                      png_warning_handler);
  if (state.png == nullptr) throw FormatError("libpng initialisation failed");
  state.info = png_create_info_struct(state.png);
  if (state.info == nullptr) throw FormatError("libpng initialisation failed");

  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    rows[static_cast<std::size_t>(y)] =
        const_cast<png_bytep>(bytes.data() + row_bytes * static_cast<std::size_t>(y));
  }
  if (!write_png_rows(file.get(), &state, width, height, bit_depth, rows.data())) {
    throw FormatError("PNG encoding failed for '" + path.string() + "': " + state.error);
  }
}

}  // namespace

Raster read_raster(const std::filesystem::path& path) {
  Samples s = read_samples(path);
  std::vector<double> px(s.values.size());
  const double scale = static_cast<double>(s.maxval);
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<double>(s.values[i]) / scale;
  return Raster{GrayImage(s.width, s.height, std::move(px)), s.bit_depth};
}

void save_image(const GrayImage& img, const std::filesystem::path& path, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) throw ConfigError("bit depth must be 8 or 16");
  const double maxval = bit_depth == 16 ? 65535.0 : 255.0;
  std::vector<std::uint8_t> bytes;
  bytes.reserve(img.size() * (bit_depth == 16 ? 2 : 1));
  for (double v : img.pixels()) {
    const auto q = static_cast<std::uint32_t>(std::lround(std::clamp(v, 0.0, 1.0) * maxval));
    if (bit_depth == 16) {
      bytes.push_back(static_cast<std::uint8_t>(q >> 8));
      bytes.push_back(static_cast<std::uint8_t>(q & 0xff));
    } else {
      bytes.push_back(static_cast<std::uint8_t>(q));
    }
  }
  write_raster(img.width(), img.height(), bit_depth, bytes, path);
}

BinaryMask load_mask(const std::filesystem::path& path) {
  Samples s = read_samples(path);
  std::vector<std::uint8_t> bits(s.values.size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = s.values[i] != 0 ? 1 : 0;
  return BinaryMask(s.width, s.height, std::move(bits));
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes(mask.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask[i] ? 255 : 0;
  write_raster(mask.width(), mask.height(), 8, bytes, path);
}

void save_gray8(int width, int height, std::span<const std::uint8_t> samples,
                const std::filesystem::path& path) {
  if (samples.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw ConfigError("sample buffer does not match raster extent");
  }
  write_raster(width, height, 8, samples, path);
}

RegionOfInterest load_roi(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open ROI file '" + path.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw FormatError("ROI file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  RegionOfInterest roi;
  try {
    roi.x = doc.at("x").get<int>();
    roi.y = doc.at("y").get<int>();
    roi.w = doc.at("w").get<int>();
    roi.h = doc.at("h").get<int>();
  } catch (const json::exception& e) {
    throw FormatError("ROI file '" + path.string() + "' needs integer x, y, w, h: " + e.what());
  }
  return roi;
}

void save_roi(const RegionOfInterest& roi, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << json{{"x", roi.x}, {"y", roi.y}, {"w", roi.w}, {"h", roi.h}}.dump() << '\n';
}

}  // namespace lesionseg
