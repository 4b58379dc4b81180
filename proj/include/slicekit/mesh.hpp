#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace slicekit {

using Vertices = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;
using Faces = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected edge with its (one, two, or more) incident faces.
struct Edge {
  int v0 = 0;  // v0 < v1
  int v1 = 0;
  std::vector<int> faces;
};

/// Indexed triangle mesh. Immutable after construction; adjacency is derived
/// from the face list in the constructor.
class Mesh {
 public:
  Mesh() = default;
  /// Throws MeshError if a face index is out of range or a face repeats an index.
  Mesh(Vertices vertices, Faces faces);

  const Vertices& vertices() const { return V_; }
  const Faces& faces() const { return F_; }

  int vertex_count() const { return static_cast<int>(V_.rows()); }
  int face_count() const { return static_cast<int>(F_.rows()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  bool empty() const { return F_.rows() == 0; }

  Eigen::Vector3d vertex(int i) const { return V_.row(i).transpose(); }
  std::array<int, 3> face(int f) const { return {F_(f, 0), F_(f, 1), F_(f, 2)}; }

  const std::vector<Edge>& edges() const { return edges_; }
  /// Edge ids of face f, in the order (0,1), (1,2), (2,0).
  const std::array<int, 3>& face_edges(int f) const { return face_edges_[f]; }
  const std::vector<int>& vertex_faces(int v) const { return vertex_faces_[v]; }

  /// Edge id for the pair (a, b), or -1.
  int find_edge(int a, int b) const;

  Eigen::Vector3d bbox_min() const;
  Eigen::Vector3d bbox_max() const;
  /// Bounding-box diagonal length; 0 for an empty mesh.
  double bbox_diagonal() const;
  double surface_area() const;

 private:
  Vertices V_;
  Faces F_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> face_edges_;
  std::vector<std::vector<int>> vertex_faces_;
};

struct TopologySummary {
  int vertex_count = 0;
  int edge_count = 0;
  int face_count = 0;
  int euler_characteristic = 0;
  int boundary_edge_count = 0;
  int connected_component_count = 0;
  bool is_watertight = false;

  bool operator==(const TopologySummary&) const = default;
};

TopologySummary topology_summary(const Mesh& mesh);

/// Per-face component id over vertex-sharing connectivity; returns the
/// component count. Unreferenced vertices do not form components.
int face_components(const Mesh& mesh, std::vector<int>& face_component);

double triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c);

/// v -> R v + t. Throws MeshError unless ||R^T R - I||_inf <= 1e-9.
Mesh transform_mesh(const Mesh& mesh, const Eigen::Matrix3d& rotation,
                    const Eigen::Vector3d& translation = Eigen::Vector3d::Zero());

bool is_orthonormal(const Eigen::Matrix3d& rotation, double tol = 1e-9);

/// Rotation taking unit vector `from` onto unit vector `to` (shortest arc).
Eigen::Matrix3d rotation_between(const Eigen::Vector3d& from, const Eigen::Vector3d& to);

/// Rotation from Euler angles in degrees, applied X then Y then Z (R = Rz Ry Rx).
Eigen::Matrix3d rotation_from_euler_degrees(double rx, double ry, double rz);

}  // namespace slicekit
