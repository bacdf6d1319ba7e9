#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "lesionseg/error.hpp"
#include "lesionseg/io.hpp"
#include "oracles.hpp"

using namespace lesionseg;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  fs::path d(LESIONSEG_TEST_TMP);
  fs::create_directories(d);
  return d;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

}  // namespace

TEST_CASE("8-bit rasters rescale by 255") {
  for (const char* ext : {".png", ".pgm"}) {
    const fs::path p = tmp_dir() / (std::string("u8") + ext);
    std::vector<std::uint8_t> samples = {255, 255, 0, 128};
    save_gray8(2, 2, samples, p);
    const Raster r = read_raster(p);
    CHECK(r.bit_depth == 8);
    CHECK(r.image.at(0, 0) == 1.0);
    CHECK(r.image.at(1, 0) == 1.0);
    CHECK(r.image.at(0, 1) == 0.0);
    CHECK(r.image.at(1, 1) == doctest::Approx(128.0 / 255.0).epsilon(1e-15));
  }
}

TEST_CASE("uniform 255 and 0 images") {
  const fs::path p = tmp_dir() / "white.png";
  save_gray8(3, 3, std::vector<std::uint8_t>(9, 255), p);
  CHECK(load_image(p) == GrayImage(3, 3, 1.0));
  save_gray8(3, 3, std::vector<std::uint8_t>(9, 0), p);
  CHECK(load_image(p) == GrayImage(3, 3, 0.0));
}

TEST_CASE("load -> save -> load round-trips bit-exactly at the source depth") {
  oracle::Rng rng(3);
  for (int depth : {8, 16}) {
    for (const char* ext : {".png", ".pgm"}) {
      const int levels = depth == 16 ? 65536 : 256;
      std::vector<double> px(35);
      for (auto& v : px) v = rng.integer(0, levels - 1) / static_cast<double>(levels - 1);
      const GrayImage img(7, 5, px);
      const fs::path a = tmp_dir() / ("rt_a" + std::to_string(depth) + ext);
      const fs::path b = tmp_dir() / ("rt_b" + std::to_string(depth) + ext);
      save_image(img, a, depth);
      const Raster first = read_raster(a);
      CHECK(first.bit_depth == depth);
      CHECK(first.image == img);
      save_image(first.image, b, first.bit_depth);
      CHECK(read_raster(b).image == first.image);
      std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
      const std::string ba((std::istreambuf_iterator<char>(fa)), {});
      const std::string bb((std::istreambuf_iterator<char>(fb)), {});
      CHECK(ba == bb);
    }
  }
}

TEST_CASE("masks: any nonzero sample is foreground") {
  const fs::path p = tmp_dir() / "mask_in.pgm";
  save_gray8(3, 1, std::vector<std::uint8_t>{0, 1, 200}, p);
  const BinaryMask m = load_mask(p);
  CHECK_FALSE(m.at(0, 0));
  CHECK(m.at(1, 0));
  CHECK(m.at(2, 0));
  const fs::path q = tmp_dir() / "mask_out.png";
  save_mask(m, q);
  const Raster r = read_raster(q);
  CHECK(r.image.at(1, 0) == 1.0);
  CHECK(load_mask(q) == m);
}

TEST_CASE("PGM header comments and maxval") {
  const fs::path p = tmp_dir() / "comment.pgm";
  write_bytes(p, std::string("P5\n# made by hand\n2 1\n# depth\n255\n") + '\x00' + '\xff');
  const GrayImage img = load_image(p);
  CHECK(img.width() == 2);
  CHECK(img.at(1, 0) == 1.0);
}

TEST_CASE("format errors") {
  SUBCASE("missing file names the path") {
    try {
      load_image(tmp_dir() / "does_not_exist.png");
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("does_not_exist.png") != std::string::npos);
    }
  }
  SUBCASE("unknown signature") {
    const fs::path p = tmp_dir() / "junk.bin";
    write_bytes(p, "GIF89a....");
    CHECK_THROWS_AS(load_image(p), FormatError);
  }
  SUBCASE("multi-channel PPM") {
    const fs::path p = tmp_dir() / "rgb.ppm";
    write_bytes(p, std::string("P6\n1 1\n255\n") + "abc");
    try {
      load_image(p);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("multi-channel") != std::string::npos);
    }
  }
  SUBCASE("multi-channel PNG") {
    // 1x1 8-bit RGB PNG
    static const unsigned char rgb[] =
        "\x89\x50\x4e\x47\x0d\x0a\x1a\x0a\x00\x00\x00\x0d\x49\x48\x44\x52\x00\x00\x00\x01"
        "\x00\x00\x00\x01\x08\x02\x00\x00\x00\x90\x77\x53\xde\x00\x00\x00\x0c\x49\x44\x41"
        "\x54\x78\x9c\x63\x10\x50\x30\x00\x00\x00\xa4\x00\x61\x34\x66\x7d\x72\x00\x00\x00"
        "\x00\x49\x45\x4e\x44\xae\x42\x60\x82";
    const fs::path p = tmp_dir() / "rgb.png";
    write_bytes(p, std::string(reinterpret_cast<const char*>(rgb), sizeof rgb - 1));
    try {
      load_image(p);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("RGB") != std::string::npos);
    }
  }
  SUBCASE("truncated PGM") {
    const fs::path p = tmp_dir() / "short.pgm";
    write_bytes(p, "P5\n4 4\n255\nab");
    CHECK_THROWS_AS(load_image(p), FormatError);
  }
  SUBCASE("corrupt PNG") {
    const fs::path p = tmp_dir() / "corrupt.png";
    write_bytes(p, std::string("\x89PNG\r\n\x1a\n", 8) + "garbage-garbage-garbage");
    CHECK_THROWS_AS(load_image(p), FormatError);
  }
}

TEST_CASE("ROI files") {
  const fs::path p = tmp_dir() / "roi.json";
  save_roi({3, 4, 5, 6}, p);
  CHECK(load_roi(p) == RegionOfInterest{3, 4, 5, 6});
  write_bytes(p, R"({"x": 1, "y": 2, "w": "wide"})");
  CHECK_THROWS_AS(load_roi(p), FormatError);
  write_bytes(p, "not json");
  CHECK_THROWS_AS(load_roi(p), FormatError);
}
