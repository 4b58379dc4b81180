#include "slicekit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace slicekit {

namespace {

double corner_angle(const Eigen::Vector3d& at, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  const Eigen::Vector3d u = b - at, w = c - at;
  return std::atan2(u.cross(w).norm(), u.dot(w));
}

std::vector<int> sorted_union(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

bool is_nonmanifold_vertex(const Mesh& mesh, int v) {
  const auto& inc = mesh.vertex_faces(v);
  if (inc.size() <= 1) return false;
  std::vector<int> parent(inc.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto local = [&](int f) { return static_cast<int>(std::find(inc.begin(), inc.end(), f) - inc.begin()); };
  for (size_t i = 0; i < inc.size(); ++i) {
    for (int eid : mesh.face_edges(inc[i])) {
      const Edge& e = mesh.edges()[eid];
      if (e.v0 != v && e.v1 != v) continue;
      for (int g : e.faces) {
        const int a = find(static_cast<int>(i)), b = find(local(g));
        if (a != b) parent[a] = b;
      }
    }
  }
  const int root = find(0);
  for (size_t i = 1; i < inc.size(); ++i)
    if (find(static_cast<int>(i)) != root) return true;
  return false;
}

}  // namespace

CurvatureField compute_curvature(const Mesh& mesh) {
  if (mesh.empty()) throw MeshError("curvature of an empty mesh");
  const int nv = mesh.vertex_count();
  Eigen::VectorXd angle_sum = Eigen::VectorXd::Zero(nv);
  Eigen::VectorXd area = Eigen::VectorXd::Zero(nv);
  Eigen::MatrixX3d laplacian = Eigen::MatrixX3d::Zero(nv, 3);
  Eigen::MatrixX3d normal = Eigen::MatrixX3d::Zero(nv, 3);

  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto t = mesh.face(f);
    const Eigen::Vector3d p[3] = {mesh.vertex(t[0]), mesh.vertex(t[1]), mesh.vertex(t[2])};
    const Eigen::Vector3d n = (p[1] - p[0]).cross(p[2] - p[0]);
    const double a = 0.5 * n.norm();
    double theta[3];
    for (int k = 0; k < 3; ++k) theta[k] = corner_angle(p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
    for (int k = 0; k < 3; ++k) angle_sum[t[k]] += theta[k];
    if (a <= std::numeric_limits<double>::min()) continue;

    const Eigen::Vector3d unit_n = n / (2.0 * a);
    for (int k = 0; k < 3; ++k) normal.row(t[k]) += theta[k] * unit_n.transpose();

    // cot of the angle at corner k; edge opposite k is (k+1, k+2).
    double cot[3];
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector3d u = p[(k + 1) % 3] - p[k], w = p[(k + 2) % 3] - p[k];
      cot[k] = u.dot(w) / u.cross(w).norm();
    }
    for (int k = 0; k < 3; ++k) {
      const int i = (k + 1) % 3, j = (k + 2) % 3;
      const Eigen::RowVector3d d = 0.5 * cot[k] * (p[i] - p[j]).transpose();
      laplacian.row(t[i]) += d;
      laplacian.row(t[j]) -= d;
    }

    const bool obtuse = theta[0] > std::numbers::pi / 2 || theta[1] > std::numbers::pi / 2 ||
                        theta[2] > std::numbers::pi / 2;
    if (obtuse) {
      for (int k = 0; k < 3; ++k) area[t[k]] += a / 3.0;
    } else {
      for (int k = 0; k < 3; ++k) {
        const int i = (k + 1) % 3, j = (k + 2) % 3;
        // Voronoi share of corner k: edges k-i and k-j weighted by opposite cotangents.
        area[t[k]] += ((p[k] - p[i]).squaredNorm() * cot[j] + (p[k] - p[j]).squaredNorm() * cot[i]) / 8.0;
      }
    }
  }

  std::vector<char> on_boundary(nv, 0);
  for (const Edge& e : mesh.edges())
    if (e.faces.size() == 1) on_boundary[e.v0] = on_boundary[e.v1] = 1;

  CurvatureField out;
  out.gaussian.resize(nv);
  out.mean.resize(nv);
  out.mixed_area = area;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int v = 0; v < nv; ++v) {
    if (!(area[v] > 0.0)) {
      out.gaussian[v] = out.mean[v] = nan;
      continue;
    }
    const double full = on_boundary[v] ? std::numbers::pi : 2.0 * std::numbers::pi;
    out.gaussian[v] = (full - angle_sum[v]) / area[v];
    const Eigen::RowVector3d lap = laplacian.row(v);
    const double h = lap.norm() / (2.0 * area[v]);
    out.mean[v] = lap.dot(normal.row(v)) < 0.0 ? -h : h;
  }
  return out;
}

std::vector<int> detect_boundary(const Mesh& mesh) {
  std::vector<int> out;
  for (const Edge& e : mesh.edges())
    if (e.faces.size() == 1) {
      out.push_back(e.v0);
      out.push_back(e.v1);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> detect_errors(const Mesh& mesh) {
  if (mesh.empty()) return detect_errors(mesh, CurvatureField{});
  return detect_errors(mesh, compute_curvature(mesh));
}

std::vector<int> detect_errors(const Mesh& mesh, const CurvatureField& curvature) {
  const int nv = mesh.vertex_count();
  std::vector<char> bad(nv, 0);
  for (const Edge& e : mesh.edges())
    if (e.faces.size() > 2) bad[e.v0] = bad[e.v1] = 1;
  for (int v = 0; v < nv; ++v) {
    if (bad[v]) continue;
    if (mesh.vertex_faces(v).empty()) {
      bad[v] = 1;
    } else if (is_nonmanifold_vertex(mesh, v)) {
      bad[v] = 1;
    } else if (curvature.gaussian.size() == nv && std::isnan(curvature.gaussian[v])) {
      bad[v] = 1;
    }
  }
  std::vector<int> out;
  for (int v = 0; v < nv; ++v)
    if (bad[v]) out.push_back(v);
  return out;
}

RiskReport analyze(const Mesh& mesh, const AnalyzeParams& params) {
  RiskReport r;
  r.vertex_count = mesh.vertex_count();
  r.face_count = mesh.face_count();
  const double diag = mesh.bbox_diagonal();
  const double scale = diag > 0.0 ? diag : 1.0;
  r.eps_gaussian = params.eps_gaussian.value_or(1e-4 / (scale * scale));
  r.eps_mean = params.eps_mean.value_or(1e-4 / scale);
  r.component_size_threshold =
      params.component_size_threshold.value_or(static_cast<int>(std::ceil(0.01 * mesh.face_count())));
  r.aspect_ratio_threshold = params.aspect_ratio_threshold;
  if (r.eps_gaussian < 0 || r.eps_mean < 0 || r.component_size_threshold < 0 || r.aspect_ratio_threshold < 0)
    throw MeshError("analysis thresholds must be non-negative");

  CurvatureField curv;
  if (!mesh.empty()) curv = compute_curvature(mesh);

  r.error_vertices = detect_errors(mesh, curv);
  r.boundary_vertices = detect_boundary(mesh);
  for (int v = 0; v < mesh.vertex_count() && !mesh.empty(); ++v) {
    const double kg = curv.gaussian[v], kh = curv.mean[v];
    if (std::isnan(kg)) continue;
    if (std::abs(kg) <= r.eps_gaussian && std::abs(kh) <= r.eps_mean) r.flat_vertices.push_back(v);
    if (kg > r.eps_gaussian) ++r.positive_gaussian_count;
    if (kg < -r.eps_gaussian) ++r.negative_gaussian_count;
  }
  r.risky_vertices = sorted_union(sorted_union(r.error_vertices, r.boundary_vertices), r.flat_vertices);

  std::vector<int> comp;
  const int ncomp = face_components(mesh, comp);
  std::vector<IsolatedComponent> groups(ncomp);
  for (int f = 0; f < mesh.face_count(); ++f) groups[comp[f]].faces.push_back(f);
  for (auto& g : groups) {
    if (static_cast<int>(g.faces.size()) >= r.component_size_threshold) continue;
    for (int f : g.faces)
      for (int v : mesh.face(f)) g.vertices.push_back(v);
    std::sort(g.vertices.begin(), g.vertices.end());
    g.vertices.erase(std::unique(g.vertices.begin(), g.vertices.end()), g.vertices.end());
    r.isolated_components.push_back(std::move(g));
  }

  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto t = mesh.face(f);
    const Eigen::Vector3d a = mesh.vertex(t[0]), b = mesh.vertex(t[1]), c = mesh.vertex(t[2]);
    const double longest = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    const double twice_area = (b - a).cross(c - a).norm();
    // shortest altitude = 2A / longest edge
    if (twice_area <= 0.0 || longest * longest / twice_area > r.aspect_ratio_threshold) r.elongated_faces.push_back(f);
  }
  return r;
}

Mesh keep_faces(const Mesh& mesh, const std::vector<char>& keep) {
  std::vector<int> remap(mesh.vertex_count(), -1);
  int nv = 0, nf = 0;
  std::vector<char> used(mesh.vertex_count(), 0);
  for (int f = 0; f < mesh.face_count(); ++f) {
    if (!keep[f]) continue;
    ++nf;
    for (int v : mesh.face(f)) used[v] = 1;
  }
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (used[v]) remap[v] = nv++;

  Vertices V(nv, 3);
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (remap[v] >= 0) V.row(remap[v]) = mesh.vertices().row(v);
  Faces F(nf, 3);
  int k = 0;
  for (int f = 0; f < mesh.face_count(); ++f) {
    if (!keep[f]) continue;
    const auto t = mesh.face(f);
    F.row(k++) << remap[t[0]], remap[t[1]], remap[t[2]];
  }
  return Mesh(std::move(V), std::move(F));
}

Mesh remove_risky(const Mesh& mesh, const RiskReport& report, const RemovalOptions& options) {
  if (report.vertex_count != mesh.vertex_count() || report.face_count != mesh.face_count())
    throw MeshError("risk report is stale: it was computed on a mesh with " + std::to_string(report.vertex_count) +
                    " vertices and " + std::to_string(report.face_count) + " faces");
  std::vector<char> keep(mesh.face_count(), 1);
  for (int idx : options.component_indices) {
    if (idx < 0 || idx >= static_cast<int>(report.isolated_components.size()))
      throw MeshError("isolated component index " + std::to_string(idx) + " out of range");
    for (int f : report.isolated_components[idx].faces) keep[f] = 0;
  }
  if (options.remove_boundary)
    for (int v : report.boundary_vertices)
      for (int f : mesh.vertex_faces(v)) keep[f] = 0;
  return keep_faces(mesh, keep);
}

}  // namespace slicekit
