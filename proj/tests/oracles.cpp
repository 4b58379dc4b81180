#include "oracles.hpp"

#include "slicekit/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

namespace oracle {

using slicekit::Mesh;

int exhaustive_distinct_count(const std::vector<Vec3>& points, double tol) {
  std::vector<Vec3> reps;
  for (const auto& p : points) {
    bool seen = false;
    for (const auto& q : reps)
      if ((p - q).norm() <= tol) seen = true;
    if (!seen) reps.push_back(p);
  }
  return static_cast<int>(reps.size());
}

void write_soup_stl(const std::filesystem::path& path, const std::vector<Tri>& tris) {
  std::ofstream out(path, std::ios::binary);
  char header[80] = "oracle soup";
  out.write(header, 80);
  const std::uint32_t n = static_cast<std::uint32_t>(tris.size());
  out.write(reinterpret_cast<const char*>(&n), 4);
  for (const auto& t : tris) {
    float rec[12] = {};
    for (int k = 0; k < 3; ++k)
      for (int c = 0; c < 3; ++c) rec[3 + 3 * k + c] = static_cast<float>(t[k][c]);
    out.write(reinterpret_cast<const char*>(rec), 48);
    const std::uint16_t attr = 0;
    out.write(reinterpret_cast<const char*>(&attr), 2);
  }
}

std::vector<Tri> cube_soup(double s) {
  std::vector<Tri> tris;
  // Two triangles per face, every face listed with its own corner copies.
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side < 2; ++side) {
      const int u = (axis + 1) % 3, v = (axis + 2) % 3;
      auto corner = [&](int a, int b) {
        Vec3 p;
        p[axis] = side * s;
        p[u] = a * s;
        p[v] = b * s;
        return p;
      };
      tris.push_back({corner(0, 0), corner(1, 0), corner(1, 1)});
      tris.push_back({corner(0, 0), corner(1, 1), corner(0, 1)});
    }
  return tris;
}

std::vector<Seg> brute_force_segments(const Mesh& mesh, const slicekit::PlaneSpec& plane, double tol) {
  std::vector<Seg> out;
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto t = mesh.face(f);
    Vec3 p[3];
    double d[3];
    for (int k = 0; k < 3; ++k) {
      p[k] = mesh.vertex(t[k]);
      d[k] = p[k].x() * plane.normal.x() + p[k].y() * plane.normal.y() + p[k].z() * plane.normal.z() - plane.offset;
      if (std::fabs(d[k]) <= tol) d[k] = 0;
    }
    std::vector<Vec3> hits;
    int on = 0;
    for (int k = 0; k < 3; ++k)
      if (d[k] == 0) {
        hits.push_back(p[k]);
        ++on;
      }
    if (on == 3) continue;
    if (on == 2) {
      double third = 0;
      for (int k = 0; k < 3; ++k)
        if (d[k] != 0) third = d[k];
      if (third > 0) out.emplace_back(hits[0], hits[1]);
      continue;
    }
    for (int k = 0; k < 3; ++k) {
      const int j = (k + 1) % 3;
      if (d[k] == 0 || d[j] == 0) continue;
      if ((d[k] < 0) != (d[j] < 0)) {
        // Solve for the zero of the linear interpolant along the edge.
        const double s = std::fabs(d[k]) / (std::fabs(d[k]) + std::fabs(d[j]));
        hits.push_back((1 - s) * p[k] + s * p[j]);
      }
    }
    if (hits.size() == 2) out.emplace_back(hits[0], hits[1]);
  }
  return out;
}

bool segments_match(std::vector<Seg> a, std::vector<Seg> b, double tol, std::string* why) {
  if (a.size() != b.size()) {
    if (why) *why = "segment counts differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size());
    return false;
  }
  std::vector<char> used(b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    bool found = false;
    for (size_t j = 0; j < b.size() && !found; ++j) {
      if (used[j]) continue;
      const bool same = (a[i].first - b[j].first).norm() <= tol && (a[i].second - b[j].second).norm() <= tol;
      const bool flip = (a[i].first - b[j].second).norm() <= tol && (a[i].second - b[j].first).norm() <= tol;
      if (same || flip) {
        used[j] = 1;
        found = true;
      }
    }
    if (!found) {
      if (why) {
        std::ostringstream ss;
        ss << "unmatched segment " << a[i].first.transpose() << " -> " << a[i].second.transpose();
        *why = ss.str();
      }
      return false;
    }
  }
  return true;
}

double point_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a);
  const double nn = n.squaredNorm();
  if (nn > 0) {
    const Vec3 q = p - n * ((p - a).dot(n) / nn);
    // Barycentric sign test via sub-triangle orientation.
    const double w0 = (b - q).cross(c - q).dot(n), w1 = (c - q).cross(a - q).dot(n), w2 = (a - q).cross(b - q).dot(n);
    if (w0 >= 0 && w1 >= 0 && w2 >= 0) return (p - q).norm();
  }
  auto seg = [&](const Vec3& x, const Vec3& y) {
    const Vec3 e = y - x;
    const double l = e.squaredNorm();
    const double t = l > 0 ? std::clamp((p - x).dot(e) / l, 0.0, 1.0) : 0.0;
    return (p - (x + t * e)).norm();
  };
  return std::min({seg(a, b), seg(b, c), seg(c, a)});
}

namespace {

std::vector<Vec3> samples(const Mesh& m) {
  std::vector<Vec3> s;
  for (int v = 0; v < m.vertex_count(); ++v)
    if (!m.vertex_faces(v).empty()) s.push_back(m.vertex(v));
  for (int f = 0; f < m.face_count(); ++f) {
    const auto t = m.face(f);
    s.push_back((m.vertex(t[0]) + m.vertex(t[1]) + m.vertex(t[2])) / 3.0);
  }
  return s;
}

double directed(const Mesh& from, const Mesh& to) {
  double worst = 0;
  for (const auto& p : samples(from)) {
    double best = std::numeric_limits<double>::infinity();
    for (int f = 0; f < to.face_count(); ++f) {
      const auto t = to.face(f);
      best = std::min(best, point_triangle(p, to.vertex(t[0]), to.vertex(t[1]), to.vertex(t[2])));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double brute_hausdorff(const Mesh& a, const Mesh& b) { return std::max(directed(a, b), directed(b, a)); }

double total_area(const Mesh& mesh) {
  double sum = 0;
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto t = mesh.face(f);
    const Vec3 a = mesh.vertex(t[0]), b = mesh.vertex(t[1]), c = mesh.vertex(t[2]);
    // Heron's formula, independent of the cross-product route.
    const double x = (b - a).norm(), y = (c - b).norm(), z = (a - c).norm();
    const double s = 0.5 * (x + y + z);
    sum += std::sqrt(std::max(0.0, s * (s - x) * (s - y) * (s - z)));
  }
  return sum;
}

Mesh random_soup(std::mt19937_64& rng, int faces) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int nv = std::max(3, faces / 2 + 3);
  slicekit::Vertices V(nv, 3);
  for (int i = 0; i < nv; ++i) V.row(i) << u(rng), u(rng), u(rng);
  std::uniform_int_distribution<int> pick(0, nv - 1);
  slicekit::Faces F(faces, 3);
  for (int f = 0; f < faces; ++f) {
    int a = pick(rng), b = pick(rng), c = pick(rng);
    while (b == a) b = pick(rng);
    while (c == a || c == b) c = pick(rng);
    F.row(f) << a, b, c;
  }
  return Mesh(std::move(V), std::move(F));
}

Mesh jittered_sphere(std::mt19937_64& rng, int subdivisions, double jitter) {
  const Mesh s = slicekit::shapes::icosphere(1.0, subdivisions);
  std::uniform_real_distribution<double> u(-jitter, jitter);
  slicekit::Vertices V = s.vertices();
  for (Eigen::Index i = 0; i < V.rows(); ++i) V.row(i) *= 1.0 + u(rng);
  return Mesh(std::move(V), s.faces());
}

slicekit::PlaneSpec random_plane(std::mt19937_64& rng, const Mesh& mesh) {
  std::normal_distribution<double> g;
  Vec3 n(g(rng), g(rng), g(rng));
  n.normalize();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    lo = std::min(lo, n.dot(mesh.vertex(v)));
    hi = std::max(hi, n.dot(mesh.vertex(v)));
  }
  std::uniform_real_distribution<double> u(lo, hi);
  return slicekit::PlaneSpec(n, u(rng));
}

Mesh cube_with_unreferenced_vertex() {
  const Mesh c = slicekit::shapes::box();
  slicekit::Vertices V(9, 3);
  V << c.vertices(), Eigen::RowVector3d(5, 5, 5);
  return Mesh(std::move(V), c.faces());
}

Mesh two_cubes_sharing_vertex(int* shared) {
  const Mesh a = slicekit::shapes::box();
  const Mesh b = slicekit::shapes::box(Vec3(1, 1, 1), Vec3(2, 2, 2));
  // b's vertex 0 sits at (1,1,1) = a's vertex 7; merge them by index.
  slicekit::Vertices V(15, 3);
  V.topRows(8) = a.vertices();
  V.bottomRows(7) = b.vertices().bottomRows(7);
  slicekit::Faces F(24, 3);
  F.topRows(12) = a.faces();
  for (int f = 0; f < 12; ++f)
    for (int k = 0; k < 3; ++k) {
      const int v = b.faces()(f, k);
      F(12 + f, k) = v == 0 ? 7 : 7 + v;
    }
  if (shared) *shared = 7;
  return Mesh(std::move(V), std::move(F));
}

Mesh three_triangles_one_edge() {
  slicekit::Vertices V(5, 3);
  V << 0, 0, 0, 1, 0, 0, 0.5, 1, 0, 0.5, -1, 0, 0.5, 0, 1;
  slicekit::Faces F(3, 3);
  F << 0, 1, 2, 1, 0, 3, 0, 1, 4;
  return Mesh(std::move(V), std::move(F));
}

Mesh icosphere_with_fragment(int subdivisions) {
  const Mesh sphere = slicekit::shapes::icosphere(1.0, subdivisions);
  // 2 x 5 strip of quads would be 20 faces; a 5 x 1 strip gives 10.
  Mesh strip = slicekit::shapes::grid(5, 1, 0.5, 0.1);
  strip = slicekit::transform_mesh(strip, Eigen::Matrix3d::Identity(), Vec3(3, 0, 0));
  return slicekit::shapes::merge(sphere, strip);
}

double signed_volume(const Mesh& mesh) {
  double v = 0;
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto t = mesh.face(f);
    v += mesh.vertex(t[0]).dot(mesh.vertex(t[1]).cross(mesh.vertex(t[2])));
  }
  return v / 6.0;
}

}  // namespace oracle
