#include "slicekit/shapes.hpp"
#include "slicekit/slice.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>

using namespace slicekit;

namespace {

Polyline circle(double r, int n) {
  Polyline p;
  p.points.resize(n, 2);
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    p.points.row(i) << r * std::cos(a), r * std::sin(a);
  }
  return p;
}

}  // namespace

TEST_CASE("unit square in a 3x3 window fills a ninth") {
  const auto r = slice(shapes::box(), PlaneSpec(Eigen::Vector3d::UnitZ(), 0.5));
  REQUIRE(r.loops.size() == 1);
  const Eigen::Vector2d lo = r.loops[0].points.colwise().minCoeff().transpose();
  Window w{lo - Eigen::Vector2d::Ones(), 3.0};
  const auto img = rasterize_slice(r, 100, w);
  CHECK(img.width == 100);
  CHECK(img.height == 100);
  const double ratio = static_cast<double>(img.filled_count()) / (100.0 * 100.0);
  CHECK(ratio == doctest::Approx(1.0 / 9.0).epsilon(0.02));
}

TEST_CASE("annulus fills the ring and leaves the hole empty") {
  SliceResult r;
  r.loops = {circle(1.0, 128), circle(0.5, 128)};
  const auto img = rasterize_slice(r, 64, Window{Eigen::Vector2d(-1.25, -1.25), 2.5});
  CHECK(img.at(32, 32) == 0);
  CHECK(img.at(32, 4) == 0);
  CHECK(img.at(32, 8) == 255);
  CHECK(img.at(8, 32) == 255);
  const double px = 2.5 / 64;
  const double expected = std::numbers::pi * (1.0 - 0.25) / (px * px);
  CHECK(static_cast<double>(img.filled_count()) == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("row zero is the top of the window") {
  SliceResult r;
  Polyline tri;
  tri.points.resize(3, 2);
  tri.points << 0, 0, 1, 0, 0, 1;  // filled towards the bottom-left
  r.loops = {tri};
  const auto img = rasterize_slice(r, 16, Window{Eigen::Vector2d(0, 0), 1.0});
  CHECK(img.at(15, 0) == 255);
  CHECK(img.at(0, 15) == 0);
  CHECK(img.at(15, 15) == 0);
}

TEST_CASE("empty slice gives an all-zero mask") {
  const auto r = slice(shapes::box(), PlaneSpec(Eigen::Vector3d::UnitY(), 5.0));
  const auto img = rasterize_slice(r, 32);
  CHECK(img.pixels.size() == 32u * 32u);
  CHECK(img.filled_count() == 0);
}

TEST_CASE("auto window pads the loop box") {
  SliceResult r;
  r.loops = {circle(2.0, 64)};
  const auto w = auto_window(r);
  REQUIRE(w);
  CHECK(w->size == doctest::Approx(4.0 * 1.1));
  CHECK(w->min.x() == doctest::Approx(-2.2));
  const auto img = rasterize_slice(r, 128);
  for (int i = 0; i < 128; ++i) {
    CHECK(img.at(0, i) == 0);
    CHECK(img.at(i, 0) == 0);
  }
  CHECK(img.at(64, 64) == 255);
}

TEST_CASE("rasterizing is deterministic and resolution is checked") {
  const auto r = slice(shapes::icosphere(1.0, 3), PlaneSpec::normalized(Eigen::Vector3d(1, 2, 3), 0.1));
  CHECK(rasterize_slice(r, 64).pixels == rasterize_slice(r, 64).pixels);
  CHECK_THROWS_AS(rasterize_slice(r, 15), std::invalid_argument);
  CHECK_NOTHROW(rasterize_slice(r, 16));
}

TEST_CASE("PGM output") {
  SliceResult r;
  r.loops = {circle(1.0, 32)};
  const auto img = rasterize_slice(r, 20);
  const auto path = std::filesystem::temp_directory_path() / "slicekit_raster_test.pgm";
  write_pgm(img, path);
  std::ifstream in(path, std::ios::binary);
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string header = "P5\n20 20\n255\n";
  REQUIRE(data.size() == header.size() + 400);
  CHECK(data.substr(0, header.size()) == header);
  CHECK(std::equal(img.pixels.begin(), img.pixels.end(), reinterpret_cast<const std::uint8_t*>(data.data() + header.size())));
  std::filesystem::remove(path);
}
