#include "slicekit/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace slicekit;

namespace {

Polyline2<double> regular_polygon(int n, double radius, double phase = 0.0) {
  Polyline2<double> p(n, 2);
  for (int i = 0; i < n; ++i) {
    const double a = phase + 2.0 * std::numbers::pi * i / n;
    p.row(i) << radius * std::cos(a), radius * std::sin(a);
  }
  return p;
}

// Max over all point pairs; min over every pair direction of the point-set width.
std::pair<double, double> brute_feret(const Polyline2<double>& p) {
  double mx = 0, mn = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = i + 1; j < p.rows(); ++j) {
      const Eigen::Vector2d d = (p.row(j) - p.row(i)).transpose();
      mx = std::max(mx, d.norm());
      if (d.norm() == 0) continue;
      const Eigen::Vector2d nrm = Eigen::Vector2d(-d.y(), d.x()).normalized();
      const Eigen::VectorXd proj = p * nrm;
      mn = std::min(mn, proj.maxCoeff() - proj.minCoeff());
    }
  return {mx, mn};
}

}  // namespace

TEST_CASE("square of side 2") {
  Polyline2<double> sq(4, 2);
  sq << 0, 0, 2, 0, 2, 2, 0, 2;
  const auto m = compute_metrics(sq);
  CHECK(m.area == doctest::Approx(4.0));
  CHECK(m.perimeter == doctest::Approx(8.0));
  CHECK(m.max_feret == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(m.min_feret == doctest::Approx(2.0));
  CHECK(m.centroid.isApprox(Eigen::Vector2d(1, 1)));
  CHECK_FALSE(m.self_intersecting);
  CHECK(m.equivalent_diameter == doctest::Approx(2.0 * std::sqrt(4.0 / std::numbers::pi)));
}

TEST_CASE("orientation does not change the metrics") {
  Polyline2<double> sq(4, 2);
  sq << 0, 0, 0, 2, 2, 2, 2, 0;
  CHECK(compute_metrics(sq).area == doctest::Approx(4.0));
  CHECK(signed_area(sq) == doctest::Approx(-4.0));
}

TEST_CASE("360-gon of radius 12.25 has equivalent diameter 24.5") {
  const auto m = compute_metrics(regular_polygon(360, 12.25));
  CHECK(m.equivalent_diameter == doctest::Approx(24.5).epsilon(0.001));
}

TEST_CASE("oblique cylinder section ellipse") {
  const double c = std::cos(std::numbers::pi / 6.0);
  Polyline2<double> e(720, 2);
  for (int i = 0; i < 720; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 720;
    e.row(i) << std::cos(t), std::sin(t) / c;
  }
  const auto m = compute_metrics(e);
  CHECK(m.max_feret == doctest::Approx(2.0 / c).epsilon(0.005));
  CHECK(m.min_feret == doctest::Approx(2.0).epsilon(0.005));
}

TEST_CASE("Feret diameters match a brute-force search") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    Polyline2<double> pts(3 + trial % 20, 2);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) pts.row(i) << u(rng), u(rng);
    const auto [mx, mn] = feret_diameters(convex_hull(pts));
    const auto [bmx, bmn] = brute_feret(pts);
    CHECK(mx == doctest::Approx(bmx).epsilon(1e-12));
    CHECK(mn == doctest::Approx(bmn).epsilon(1e-12));
  }
}

TEST_CASE("convex hull drops interior and collinear points") {
  Polyline2<double> p(7, 2);
  p << 0, 0, 1, 0, 2, 0, 2, 2, 1, 1, 0, 2, 0, 1;
  const auto h = convex_hull(p);
  CHECK(h.rows() == 4);
  CHECK(signed_area(h) == doctest::Approx(4.0));
}

TEST_CASE("metrics are scale equivariant") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(0.5, 1.5);
  Polyline2<double> p(40, 2);
  for (int i = 0; i < 40; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 40, rad = r(rng);
    p.row(i) << rad * std::cos(a), rad * std::sin(a);
  }
  const auto m = compute_metrics(p);
  for (double k : {0.01, 3.0, 250.0}) {
    const auto s = compute_metrics(Polyline2<double>(k * p));
    CHECK(s.area == doctest::Approx(k * k * m.area).epsilon(1e-12));
    CHECK(s.perimeter == doctest::Approx(k * m.perimeter).epsilon(1e-12));
    CHECK(s.equivalent_diameter == doctest::Approx(k * m.equivalent_diameter).epsilon(1e-12));
    CHECK(s.max_feret == doctest::Approx(k * m.max_feret).epsilon(1e-12));
    CHECK(s.min_feret == doctest::Approx(k * m.min_feret).epsilon(1e-12));
  }
}

TEST_CASE("Feret ordering and convex equivalent-diameter bound") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double a = u(rng), b = u(rng);
    Polyline2<double> e(64, 2);
    for (int i = 0; i < 64; ++i) {
      const double t = 2.0 * std::numbers::pi * i / 64;
      e.row(i) << a * std::cos(t), b * std::sin(t);
    }
    const auto m = compute_metrics(e);
    CHECK(m.min_feret <= m.max_feret);
    CHECK(m.equivalent_diameter <= m.max_feret * (1 + 1e-9));
  }
}

TEST_CASE("self-intersecting loops are flagged but still measured") {
  Polyline2<double> bow(4, 2);
  bow << 0, 0, 2, 2, 2, 0, 0, 2;
  const auto m = compute_metrics(bow);
  CHECK(m.self_intersecting);
  CHECK(m.max_feret == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK_FALSE(compute_metrics(regular_polygon(50, 1.0)).self_intersecting);
  Polyline2<double> touch(6, 2);
  touch << 0, 0, 2, 0, 1, 1, 2, 2, 0, 2, 1, 1;
  CHECK(loop_self_intersects(touch));
}

TEST_CASE("metrics far from the origin keep precision") {
  Polyline2<double> sq(4, 2);
  sq << 0, 0, 1, 0, 1, 1, 0, 1;
  sq.col(0).array() += 1e7;
  sq.col(1).array() -= 3e7;
  const auto m = compute_metrics(sq);
  CHECK(m.area == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.centroid.x() == doctest::Approx(1e7 + 0.5).epsilon(1e-15));
}

TEST_CASE("float instantiation") {
  Polyline2<float> sq(4, 2);
  sq << 0, 0, 2, 0, 2, 2, 0, 2;
  const auto m = compute_metrics(sq);
  CHECK(m.area == doctest::Approx(4.0f));
  CHECK(m.min_feret == doctest::Approx(2.0f));
}

TEST_CASE("fewer than three points is rejected") {
  Polyline2<double> two(2, 2);
  two << 0, 0, 1, 1;
  CHECK_THROWS_AS(compute_metrics(two), std::invalid_argument);
}
