#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace slicekit {

template <typename Scalar>
using Polyline2 = Eigen::Matrix<Scalar, Eigen::Dynamic, 2, Eigen::RowMajor>;

template <typename Scalar>
struct BasicSliceMetrics {
  Scalar area = 0;  // absolute enclosed area
  Scalar perimeter = 0;
  Scalar equivalent_diameter = 0;  // 2 sqrt(area / pi)
  Scalar max_feret = 0;
  Scalar min_feret = 0;
  Eigen::Matrix<Scalar, 2, 1> centroid = Eigen::Matrix<Scalar, 2, 1>::Zero();
  bool self_intersecting = false;
};

using SliceMetrics = BasicSliceMetrics<double>;

/// Signed shoelace area; positive for counter-clockwise loops.
template <typename Derived>
typename Derived::Scalar signed_area(const Eigen::MatrixBase<Derived>& loop) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = loop.rows();
  Scalar twice = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = (i + 1) % n;
    twice += loop(i, 0) * loop(j, 1) - loop(j, 0) * loop(i, 1);
  }
  return twice / 2;
}

/// Convex hull by monotone chain, counter-clockwise, no collinear points.
template <typename Derived>
Polyline2<typename Derived::Scalar> convex_hull(const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  using P = Eigen::Matrix<Scalar, 2, 1>;
  std::vector<P> pts(static_cast<size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) pts[i] = points.row(i).transpose();
  std::sort(pts.begin(), pts.end(), [](const P& a, const P& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) {
    Polyline2<Scalar> out(static_cast<Eigen::Index>(pts.size()), 2);
    for (size_t i = 0; i < pts.size(); ++i) out.row(i) = pts[i].transpose();
    return out;
  }
  auto cross = [](const P& o, const P& a, const P& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<P> hull(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  Polyline2<Scalar> out(static_cast<Eigen::Index>(hull.size()), 2);
  for (size_t i = 0; i < hull.size(); ++i) out.row(i) = hull[i].transpose();
  return out;
}

/// Largest and smallest caliper width of a convex CCW polygon via rotating calipers.
template <typename Derived>
std::pair<typename Derived::Scalar, typename Derived::Scalar> feret_diameters(const Eigen::MatrixBase<Derived>& hull) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = hull.rows();
  if (n == 0) return {Scalar(0), Scalar(0)};
  if (n == 1) return {Scalar(0), Scalar(0)};
  if (n == 2) return {(hull.row(1) - hull.row(0)).norm(), Scalar(0)};
  auto area2 = [&](Eigen::Index a, Eigen::Index b, Eigen::Index c) {
    const auto ab = hull.row(b) - hull.row(a);
    const auto ac = hull.row(c) - hull.row(a);
    return std::abs(ab(0) * ac(1) - ab(1) * ac(0));
  };
  Scalar max_w = 0, min_w = std::numeric_limits<Scalar>::infinity();
  Eigen::Index j = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index i1 = (i + 1) % n;
    while (area2(i, i1, (j + 1) % n) > area2(i, i1, j)) j = (j + 1) % n;
    const Scalar edge = (hull.row(i1) - hull.row(i)).norm();
    min_w = std::min(min_w, area2(i, i1, j) / edge);
    max_w = std::max({max_w, (hull.row(j) - hull.row(i)).norm(), (hull.row(j) - hull.row(i1)).norm()});
  }
  return {max_w, min_w};
}

/// True when two non-adjacent edges of the closed loop touch or cross.
template <typename Derived>
bool loop_self_intersects(const Eigen::MatrixBase<Derived>& loop) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = loop.rows();
  if (n < 4) return false;
  struct Seg {
    Eigen::Index i;
    Scalar lo, hi;
  };
  std::vector<Seg> segs(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = (i + 1) % n;
    segs[i] = {i, std::min(loop(i, 0), loop(j, 0)), std::max(loop(i, 0), loop(j, 0))};
  }
  std::sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) { return a.lo < b.lo; });
  auto orient = [&](Eigen::Index a, Eigen::Index b, Eigen::Index c) {
    const Scalar v = (loop(b, 0) - loop(a, 0)) * (loop(c, 1) - loop(a, 1)) -
                     (loop(b, 1) - loop(a, 1)) * (loop(c, 0) - loop(a, 0));
    return (v > 0) - (v < 0);
  };
  auto on_segment = [&](Eigen::Index a, Eigen::Index b, Eigen::Index c) {
    return std::min(loop(a, 0), loop(b, 0)) <= loop(c, 0) && loop(c, 0) <= std::max(loop(a, 0), loop(b, 0)) &&
           std::min(loop(a, 1), loop(b, 1)) <= loop(c, 1) && loop(c, 1) <= std::max(loop(a, 1), loop(b, 1));
  };
  for (size_t s = 0; s < segs.size(); ++s) {
    for (size_t t = s + 1; t < segs.size() && segs[t].lo <= segs[s].hi; ++t) {
      const Eigen::Index i = segs[s].i, k = segs[t].i;
      const Eigen::Index gap = std::abs(i - k);
      if (gap == 1 || gap == n - 1) continue;
      const Eigen::Index a = i, b = (i + 1) % n, c = k, d = (k + 1) % n;
      const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
      if (o1 != o2 && o3 != o4) return true;
      if ((o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
          (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b)))
        return true;
    }
  }
  return false;
}

/// Area, perimeter, centroid, equivalent and Feret diameters of a closed
/// polyline (first point not repeated). Throws std::invalid_argument below 3 points.
template <typename Derived>
BasicSliceMetrics<typename Derived::Scalar> compute_metrics(const Eigen::MatrixBase<Derived>& loop) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = loop.rows();
  if (n < 3) throw std::invalid_argument("a loop needs at least 3 points");
  BasicSliceMetrics<Scalar> m;
  Scalar twice = 0;
  Eigen::Matrix<Scalar, 2, 1> c = Eigen::Matrix<Scalar, 2, 1>::Zero();
  // Shift to the first point to limit cancellation for loops far from the origin.
  const Eigen::Matrix<Scalar, 1, 2> o = loop.row(0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = (i + 1) % n;
    const Eigen::Matrix<Scalar, 1, 2> p = loop.row(i) - o, q = loop.row(j) - o;
    const Scalar cr = p(0) * q(1) - q(0) * p(1);
    twice += cr;
    c(0) += (p(0) + q(0)) * cr;
    c(1) += (p(1) + q(1)) * cr;
    m.perimeter += (loop.row(j) - loop.row(i)).norm();
  }
  m.area = std::abs(twice) / 2;
  if (twice != 0) {
    m.centroid = c / (3 * twice) + o.transpose();
  } else {
    m.centroid = loop.colwise().mean().transpose();
  }
  m.equivalent_diameter = 2 * std::sqrt(m.area / std::numbers::pi_v<Scalar>);
  const auto hull = convex_hull(loop);
  std::tie(m.max_feret, m.min_feret) = feret_diameters(hull);
  m.self_intersecting = loop_self_intersects(loop);
  return m;
}

}  // namespace slicekit
