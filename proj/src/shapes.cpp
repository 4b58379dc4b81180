#include "slicekit/shapes.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace slicekit::shapes {

namespace {

Mesh build(const std::vector<Eigen::Vector3d>& pts, const std::vector<std::array<int, 3>>& tris) {
  Vertices V(static_cast<Eigen::Index>(pts.size()), 3);
  for (size_t i = 0; i < pts.size(); ++i) V.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  Faces F(static_cast<Eigen::Index>(tris.size()), 3);
  for (size_t i = 0; i < tris.size(); ++i) F.row(static_cast<Eigen::Index>(i)) << tris[i][0], tris[i][1], tris[i][2];
  return Mesh(std::move(V), std::move(F));
}

}  // namespace

Mesh box(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
  std::vector<Eigen::Vector3d> p;
  for (int i = 0; i < 8; ++i)
    p.emplace_back((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(), (i & 4) ? hi.z() : lo.z());
  const std::vector<std::array<int, 3>> t = {
      {0, 2, 3}, {0, 3, 1},  // z = lo
      {4, 5, 7}, {4, 7, 6},  // z = hi
      {0, 1, 5}, {0, 5, 4},  // y = lo
      {2, 6, 7}, {2, 7, 3},  // y = hi
      {0, 4, 6}, {0, 6, 2},  // x = lo
      {1, 3, 7}, {1, 7, 5},  // x = hi
  };
  return build(p, t);
}

Mesh icosphere(double radius, int subdivisions, const Eigen::Vector3d& center) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> p = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
      {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  };
  for (auto& v : p) v.normalize();
  std::vector<std::array<int, 3>> t = {
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
      {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1},
  };
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      p.push_back((p[a] + p[b]).normalized());
      const int id = static_cast<int>(p.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(t.size() * 4);
    for (const auto& f : t) {
      const int a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    t = std::move(next);
  }
  for (auto& v : p) v = center + radius * v;
  return build(p, t);
}

Mesh cylinder(double radius, double height, int segments, int rings, bool capped) {
  std::vector<Eigen::Vector3d> p;
  std::vector<std::array<int, 3>> t;
  for (int r = 0; r <= rings; ++r) {
    const double z = height * r / rings;
    for (int s = 0; s < segments; ++s) {
      const double a = 2.0 * std::numbers::pi * s / segments;
      p.emplace_back(radius * std::cos(a), radius * std::sin(a), z);
    }
  }
  auto id = [&](int r, int s) { return r * segments + (s % segments); };
  for (int r = 0; r < rings; ++r)
    for (int s = 0; s < segments; ++s) {
      t.push_back({id(r, s), id(r, s + 1), id(r + 1, s + 1)});
      t.push_back({id(r, s), id(r + 1, s + 1), id(r + 1, s)});
    }
  if (capped) {
    const int bottom = static_cast<int>(p.size());
    p.emplace_back(0, 0, 0);
    const int top = static_cast<int>(p.size());
    p.emplace_back(0, 0, height);
    for (int s = 0; s < segments; ++s) {
      t.push_back({bottom, id(0, s + 1), id(0, s)});
      t.push_back({top, id(rings, s), id(rings, s + 1)});
    }
  }
  return build(p, t);
}

Mesh torus(double major_radius, double minor_radius, int nu, int nv) {
  std::vector<Eigen::Vector3d> p;
  std::vector<std::array<int, 3>> t;
  for (int i = 0; i < nu; ++i) {
    const double u = 2.0 * std::numbers::pi * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double v = 2.0 * std::numbers::pi * j / nv;
      const double rr = major_radius + minor_radius * std::cos(v);
      p.emplace_back(rr * std::cos(u), rr * std::sin(u), minor_radius * std::sin(v));
    }
  }
  auto id = [&](int i, int j) { return (i % nu) * nv + (j % nv); };
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      t.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      t.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return build(p, t);
}

Mesh grid(int nx, int ny, double sx, double sy) {
  std::vector<Eigen::Vector3d> p;
  std::vector<std::array<int, 3>> t;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) p.emplace_back(sx * i / nx, sy * j / ny, 0.0);
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      t.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      t.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return build(p, t);
}

Mesh triangle(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  return build({a, b, c}, {{0, 1, 2}});
}

Mesh merge(const Mesh& a, const Mesh& b) {
  Vertices V(a.vertex_count() + b.vertex_count(), 3);
  V << a.vertices(), b.vertices();
  Faces F(a.face_count() + b.face_count(), 3);
  F << a.faces(), (b.faces().array() + a.vertex_count()).matrix();
  return Mesh(std::move(V), std::move(F));
}

}  // namespace slicekit::shapes
