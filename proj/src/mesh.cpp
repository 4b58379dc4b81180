#include "slicekit/mesh.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slicekit {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

Mesh::Mesh(Vertices vertices, Faces faces) : V_(std::move(vertices)), F_(std::move(faces)) {
  const int nv = vertex_count();
  const int nf = face_count();
  for (int f = 0; f < nf; ++f) {
    for (int k = 0; k < 3; ++k) {
      if (F_(f, k) < 0 || F_(f, k) >= nv)
        throw MeshError("face " + std::to_string(f) + " references vertex " +
                        std::to_string(F_(f, k)) + " outside [0, " + std::to_string(nv) + ")");
    }
    if (F_(f, 0) == F_(f, 1) || F_(f, 1) == F_(f, 2) || F_(f, 0) == F_(f, 2))
      throw MeshError("face " + std::to_string(f) + " repeats a vertex index");
  }

  vertex_faces_.assign(nv, {});
  {
    std::vector<int> valence(nv, 0);
    for (int f = 0; f < nf; ++f)
      for (int k = 0; k < 3; ++k) ++valence[F_(f, k)];
    for (int v = 0; v < nv; ++v) vertex_faces_[v].reserve(valence[v]);
    for (int f = 0; f < nf; ++f)
      for (int k = 0; k < 3; ++k) vertex_faces_[F_(f, k)].push_back(f);
  }

  // (key, face * 3 + slot), sorted so equal keys are adjacent.
  std::vector<std::pair<std::uint64_t, int>> half(static_cast<size_t>(nf) * 3);
  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k) half[3 * f + k] = {edge_key(F_(f, k), F_(f, (k + 1) % 3)), 3 * f + k};
  std::sort(half.begin(), half.end());

  face_edges_.assign(nf, {-1, -1, -1});
  for (size_t i = 0; i < half.size();) {
    size_t j = i;
    Edge e;
    e.v0 = static_cast<int>(half[i].first >> 32);
    e.v1 = static_cast<int>(half[i].first & 0xffffffffu);
    const int id = static_cast<int>(edges_.size());
    for (; j < half.size() && half[j].first == half[i].first; ++j) {
      const int f = half[j].second / 3;
      e.faces.push_back(f);
      face_edges_[f][half[j].second % 3] = id;
    }
    edges_.push_back(std::move(e));
    i = j;
  }
}

int Mesh::find_edge(int a, int b) const {
  if (a < 0 || a >= vertex_count() || b < 0 || b >= vertex_count()) return -1;
  for (int f : vertex_faces_[a])
    for (int k = 0; k < 3; ++k) {
      const Edge& e = edges_[face_edges_[f][k]];
      if ((e.v0 == a && e.v1 == b) || (e.v0 == b && e.v1 == a)) return face_edges_[f][k];
    }
  return -1;
}

Eigen::Vector3d Mesh::bbox_min() const {
  if (V_.rows() == 0) return Eigen::Vector3d::Zero();
  return V_.colwise().minCoeff().transpose();
}

Eigen::Vector3d Mesh::bbox_max() const {
  if (V_.rows() == 0) return Eigen::Vector3d::Zero();
  return V_.colwise().maxCoeff().transpose();
}

double Mesh::bbox_diagonal() const { return (bbox_max() - bbox_min()).norm(); }

double Mesh::surface_area() const {
  double sum = 0.0;
  for (int f = 0; f < face_count(); ++f)
    sum += triangle_area(vertex(F_(f, 0)), vertex(F_(f, 1)), vertex(F_(f, 2)));
  return sum;
}

double triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

int face_components(const Mesh& mesh, std::vector<int>& face_component) {
  // Union-find over vertices; faces join their three vertices.
  std::vector<int> parent(mesh.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto t = mesh.face(f);
    for (int k = 1; k < 3; ++k) {
      const int a = find(t[0]), b = find(t[k]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<int> root_id(mesh.vertex_count(), -1);
  int count = 0;
  face_component.assign(mesh.face_count(), -1);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const int r = find(mesh.faces()(f, 0));
    if (root_id[r] < 0) root_id[r] = count++;
    face_component[f] = root_id[r];
  }
  return count;
}

TopologySummary topology_summary(const Mesh& mesh) {
  TopologySummary s;
  s.vertex_count = mesh.vertex_count();
  s.edge_count = mesh.edge_count();
  s.face_count = mesh.face_count();
  s.euler_characteristic = s.vertex_count - s.edge_count + s.face_count;
  bool manifold_edges = true;
  for (const Edge& e : mesh.edges()) {
    if (e.faces.size() == 1) ++s.boundary_edge_count;
    if (e.faces.size() > 2) manifold_edges = false;
  }
  std::vector<int> comp;
  s.connected_component_count = face_components(mesh, comp);
  s.is_watertight = s.boundary_edge_count == 0 && manifold_edges && s.face_count > 0;
  return s;
}

bool is_orthonormal(const Eigen::Matrix3d& rotation, double tol) {
  return ((rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff()) <= tol;
}

Mesh transform_mesh(const Mesh& mesh, const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation) {
  if (!is_orthonormal(rotation)) throw MeshError("rotation is not orthonormal");
  Vertices V = mesh.vertices();
  if (!rotation.isIdentity(0.0) || !translation.isZero(0.0)) {
    V = (mesh.vertices() * rotation.transpose()).rowwise() + translation.transpose();
  }
  return Mesh(std::move(V), mesh.faces());
}

Eigen::Matrix3d rotation_between(const Eigen::Vector3d& from, const Eigen::Vector3d& to) {
  return Eigen::Quaterniond::FromTwoVectors(from, to).toRotationMatrix();
}

Eigen::Matrix3d rotation_from_euler_degrees(double rx, double ry, double rz) {
  constexpr double kDeg = 3.14159265358979323846 / 180.0;
  return (Eigen::AngleAxisd(rz * kDeg, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(ry * kDeg, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(rx * kDeg, Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

}  // namespace slicekit
