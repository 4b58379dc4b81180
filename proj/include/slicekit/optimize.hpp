#pragma once

#include "slicekit/mesh.hpp"

namespace slicekit {

enum class SmoothingKind { Laplacian, Taubin };

struct OptimizeParams {
  double target_vertex_fraction = 1.0;  // (0, 1]
  int smoothing_iterations = 10;
  SmoothingKind smoothing_kind = SmoothingKind::Taubin;
  double taubin_lambda = 0.5;  // also the Laplacian step
  double taubin_mu = -0.53;
  bool preserve_boundary = true;

  /// Throws std::invalid_argument when the fields violate their ranges.
  void validate() const;
};

/// Quadric-error edge collapse down to round(fraction * V) vertices. Collapses
/// that would change topology (link condition) or flip a face are skipped.
/// With preserve_boundary, boundary and non-manifold vertices never move; without
/// it the mesh must be watertight. Throws MeshError for targets below 4 vertices.
Mesh decimate(const Mesh& mesh, double target_vertex_fraction, bool preserve_boundary = true);

/// Umbrella-operator smoothing; connectivity is untouched.
Mesh smooth(const Mesh& mesh, const OptimizeParams& params);

/// Decimate, then smooth.
Mesh optimize(const Mesh& mesh, const OptimizeParams& params);

/// Closest-point distance from p to triangle abc.
double point_triangle_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                               const Eigen::Vector3d& c);

/// One-sided distance max over vertices and face centroids of `from` to the surface of `to`.
double directed_hausdorff(const Mesh& from, const Mesh& to);
/// Symmetric sampled Hausdorff distance.
double hausdorff_distance(const Mesh& a, const Mesh& b);

}  // namespace slicekit
