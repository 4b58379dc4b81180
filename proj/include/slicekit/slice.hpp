#pragma once

#include "slicekit/mesh.hpp"
#include "slicekit/metrics.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace slicekit {

/// Plane {x : normal . x = offset} with a unit normal.
template <typename Scalar>
struct BasicPlane {
  using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
  Vec3 normal = Vec3::UnitY();
  Scalar offset = 0;

  BasicPlane() = default;
  /// Throws std::invalid_argument unless |normal| = 1 within 1e-9.
  BasicPlane(const Vec3& n, Scalar s) : normal(n), offset(s) {
    if (!n.allFinite() || !std::isfinite(s) || std::abs(n.norm() - Scalar(1)) > Scalar(1e-9))
      throw std::invalid_argument("plane normal must be a finite unit vector");
  }
  /// Normalizes a non-zero normal; the offset is measured along the unit normal.
  static BasicPlane normalized(const Vec3& n, Scalar s) {
    const Scalar len = n.norm();
    if (!n.allFinite() || !(len > Scalar(0)) || !std::isfinite(s))
      throw std::invalid_argument("plane normal must be finite and non-zero");
    return BasicPlane(n / len, s);
  }

  Scalar signed_distance(const Vec3& p) const { return normal.dot(p) - offset; }
};

using PlaneSpec = BasicPlane<double>;

enum class Axis { X = 0, Y = 1, Z = 2 };

/// Intersection of segment ab with the plane. An endpoint within `on_plane_tol`
/// of the plane is returned as is; when both are, the face-level logic owns the
/// case and nothing is returned.
template <typename Scalar>
std::optional<Eigen::Matrix<Scalar, 3, 1>> intersect_edge_plane(const Eigen::Matrix<Scalar, 3, 1>& a,
                                                                const Eigen::Matrix<Scalar, 3, 1>& b,
                                                                const BasicPlane<Scalar>& plane,
                                                                Scalar on_plane_tol = 0) {
  const Scalar da = plane.signed_distance(a), db = plane.signed_distance(b);
  const bool a_on = std::abs(da) <= on_plane_tol, b_on = std::abs(db) <= on_plane_tol;
  if (a_on && b_on) return std::nullopt;
  if (a_on) return a;
  if (b_on) return b;
  if ((da > 0) == (db > 0)) return std::nullopt;
  const Scalar t = da / (da - db);
  return Eigen::Matrix<Scalar, 3, 1>(a + t * (b - a));
}

/// Orthonormal frame of a plane: world = origin + x * u + y * v.
struct PlaneFrame {
  Eigen::Vector3d origin;
  Eigen::Vector3d u;
  Eigen::Vector3d v;
  Eigen::Vector3d normal;

  static PlaneFrame of(const PlaneSpec& plane);
  Eigen::Vector2d to_plane(const Eigen::Vector3d& p) const { return {u.dot(p - origin), v.dot(p - origin)}; }
  Eigen::Vector3d to_world(const Eigen::Vector2d& q) const { return origin + q.x() * u + q.y() * v; }
};

struct Segment {
  Eigen::Vector3d a;
  Eigen::Vector3d b;
  int face = -1;
  // Intersection node ids: a vertex id, or vertex_count + edge id for an edge crossing.
  std::int64_t node_a = -1;
  std::int64_t node_b = -1;
};

struct Polyline {
  Polyline2<double> points;      // plane frame
  std::vector<int> segments;     // indices into SliceResult::segments, in walk order
  bool ambiguous = false;        // passed a junction of more than two segments
};

struct SliceResult {
  PlaneSpec plane;
  PlaneFrame frame;
  std::vector<Segment> segments;
  std::vector<Polyline> loops;        // closed, >= 3 points, first point not repeated
  std::vector<Polyline> open_chains;
  std::vector<SliceMetrics> metrics;  // one per loop
  int crossed_face_count = 0;
  int coplanar_face_count = 0;
  double snap_tolerance = 0.0;

  /// Loop points mapped back to 3-D.
  std::vector<Eigen::Vector3d> world_points(const Polyline& line) const;
};

/// Wall-clock split of one slice call, in seconds.
struct SliceTimings {
  double intersect = 0.0;
  double assemble = 0.0;
  double metrics = 0.0;
  double total() const { return intersect + assemble + metrics; }
};

struct SliceOptions {
  /// Vertices closer than this (relative to the bbox diagonal) count as on-plane.
  double relative_snap_tolerance = 1e-7;
  bool compute_metrics = true;
  SliceTimings* timings = nullptr;
};

SliceResult slice(const Mesh& mesh, const PlaneSpec& plane, const SliceOptions& options = {});
SliceResult slice_axial(const Mesh& mesh, Axis axis, double offset, const SliceOptions& options = {});

/// Splits every strictly crossed face into three triangles (quad side split on
/// the shorter diagonal) and faces with one on-plane vertex and a crossing into
/// two. Crossing points are shared between neighbouring faces.
Mesh subdivide_crossed_faces(const Mesh& mesh, const PlaneSpec& plane, double relative_snap_tolerance = 1e-7);

/// Square 8-bit mask, row 0 at the top (largest v), 0 background and 255 interior.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int row, int col) const { return pixels[static_cast<size_t>(row) * width + col]; }
  long filled_count() const;
};

struct Window {
  Eigen::Vector2d min = Eigen::Vector2d::Zero();
  double size = 1.0;
};

/// Loop bounding box, squared around its centre and padded 5% per side.
std::optional<Window> auto_window(const SliceResult& result);

/// Even-odd fill of all loops. Throws std::invalid_argument if resolution < 16.
Image rasterize_slice(const SliceResult& result, int resolution, std::optional<Window> window = std::nullopt);

/// Binary PGM (P5).
void write_pgm(const Image& image, const std::filesystem::path& path);

Axis parse_axis(const std::string& name);
Eigen::Vector3d axis_vector(Axis axis);

}  // namespace slicekit
