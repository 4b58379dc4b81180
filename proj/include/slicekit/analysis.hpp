#pragma once

#include "slicekit/mesh.hpp"

#include <optional>
#include <vector>

namespace slicekit {

/// Per-vertex discrete curvature. Undefined entries (zero mixed area) are NaN.
struct CurvatureField {
  Eigen::VectorXd gaussian;    // 1/length^2, angle deficit over mixed area
  Eigen::VectorXd mean;        // 1/length, signed against the angle-weighted normal
  Eigen::VectorXd mixed_area;  // length^2, partitions the surface
};

CurvatureField compute_curvature(const Mesh& mesh);

/// Vertices on at least one edge with exactly one incident face, ascending.
std::vector<int> detect_boundary(const Mesh& mesh);

/// Unreferenced, non-manifold-edge, non-manifold-vertex and curvature-undefined
/// vertices, ascending.
std::vector<int> detect_errors(const Mesh& mesh);
std::vector<int> detect_errors(const Mesh& mesh, const CurvatureField& curvature);

struct IsolatedComponent {
  std::vector<int> vertices;
  std::vector<int> faces;
};

struct AnalyzeParams {
  std::optional<double> eps_gaussian;        // default 1e-4 / bbox^2
  std::optional<double> eps_mean;            // default 1e-4 / bbox
  std::optional<int> component_size_threshold;  // faces; default 1% of face count
  double aspect_ratio_threshold = 10.0;      // longest edge / shortest altitude
};

struct RiskReport {
  int vertex_count = 0;
  int face_count = 0;
  double eps_gaussian = 0.0;
  double eps_mean = 0.0;
  int component_size_threshold = 0;
  double aspect_ratio_threshold = 0.0;

  std::vector<int> error_vertices;     // E_M
  std::vector<int> boundary_vertices;  // B_M
  std::vector<int> flat_vertices;
  std::vector<int> risky_vertices;     // union of the three above
  std::vector<IsolatedComponent> isolated_components;
  std::vector<int> elongated_faces;

  // Curvature sign census; informational only.
  int positive_gaussian_count = 0;
  int negative_gaussian_count = 0;
};

/// Throws MeshError on negative thresholds.
RiskReport analyze(const Mesh& mesh, const AnalyzeParams& params = {});

struct RemovalOptions {
  bool remove_boundary = false;
  std::vector<int> component_indices;  // indices into RiskReport::isolated_components
};

/// Drops unreferenced vertices, the selected isolated components and (optionally)
/// every face touching a boundary vertex, then reindexes compactly. Throws
/// MeshError when the report was computed on a different mesh.
Mesh remove_risky(const Mesh& mesh, const RiskReport& report, const RemovalOptions& options = {});

/// Keeps only faces whose flag is set, drops vertices no kept face references.
Mesh keep_faces(const Mesh& mesh, const std::vector<char>& keep);

}  // namespace slicekit
