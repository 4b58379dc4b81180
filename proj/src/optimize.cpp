#include "slicekit/optimize.hpp"

#include "slicekit/analysis.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace slicekit {

void OptimizeParams::validate() const {
  if (!(target_vertex_fraction > 0.0 && target_vertex_fraction <= 1.0))
    throw std::invalid_argument("target_vertex_fraction must lie in (0, 1]");
  if (smoothing_iterations < 0) throw std::invalid_argument("smoothing_iterations must be non-negative");
  if (smoothing_kind == SmoothingKind::Taubin && !(taubin_lambda > 0.0 && taubin_mu < 0.0 && -taubin_mu > taubin_lambda))
    throw std::invalid_argument("taubin smoothing needs lambda > 0 > mu and |mu| > lambda");
}

namespace {

// Symmetric 4x4 plane quadric, upper triangle.
struct Quadric {
  double a2 = 0, ab = 0, ac = 0, ad = 0, b2 = 0, bc = 0, bd = 0, c2 = 0, cd = 0, d2 = 0;

  static Quadric plane(const Eigen::Vector3d& n, double d, double w) {
    Quadric q;
    q.a2 = w * n.x() * n.x(); q.ab = w * n.x() * n.y(); q.ac = w * n.x() * n.z(); q.ad = w * n.x() * d;
    q.b2 = w * n.y() * n.y(); q.bc = w * n.y() * n.z(); q.bd = w * n.y() * d;
    q.c2 = w * n.z() * n.z(); q.cd = w * n.z() * d;
    q.d2 = w * d * d;
    return q;
  }
  Quadric& operator+=(const Quadric& o) {
    a2 += o.a2; ab += o.ab; ac += o.ac; ad += o.ad; b2 += o.b2;
    bc += o.bc; bd += o.bd; c2 += o.c2; cd += o.cd; d2 += o.d2;
    return *this;
  }
  double error(const Eigen::Vector3d& p) const {
    const double x = p.x(), y = p.y(), z = p.z();
    return a2 * x * x + 2 * ab * x * y + 2 * ac * x * z + 2 * ad * x + b2 * y * y + 2 * bc * y * z + 2 * bd * y +
           c2 * z * z + 2 * cd * z + d2;
  }
  std::optional<Eigen::Vector3d> minimizer() const {
    Eigen::Matrix3d A;
    A << a2, ab, ac, ab, b2, bc, ac, bc, c2;
    const double scale = A.cwiseAbs().maxCoeff();
    if (!(scale > 0)) return std::nullopt;
    const double det = A.determinant();
    if (std::abs(det) <= 1e-10 * scale * scale * scale) return std::nullopt;
    return Eigen::Vector3d(A.inverse() * -Eigen::Vector3d(ad, bd, cd));
  }
};

struct Candidate {
  double cost;
  int u, v;
  int ver_u, ver_v;
  Eigen::Vector3d target;
  bool operator>(const Candidate& o) const {
    if (cost != o.cost) return cost > o.cost;
    if (u != o.u) return u > o.u;
    return v > o.v;
  }
};

class Decimator {
 public:
  Decimator(const Mesh& mesh, bool preserve_boundary) : mesh_(mesh) {
    const int nv = mesh.vertex_count();
    pos_.resize(nv);
    for (int v = 0; v < nv; ++v) pos_[v] = mesh.vertex(v);
    faces_.resize(mesh.face_count());
    for (int f = 0; f < mesh.face_count(); ++f) faces_[f] = mesh.face(f);
    face_alive_.assign(faces_.size(), 1);
    vfaces_.resize(nv);
    for (int v = 0; v < nv; ++v) vfaces_[v] = mesh.vertex_faces(v);
    alive_.assign(nv, 0);
    version_.assign(nv, 0);
    locked_.assign(nv, 0);
    quadric_.assign(nv, Quadric{});
    for (int v = 0; v < nv; ++v)
      if (!vfaces_[v].empty()) {
        alive_[v] = 1;
        ++alive_count_;
      }
    for (const Edge& e : mesh.edges())
      if (e.faces.size() > 2 || (e.faces.size() == 1 && preserve_boundary)) locked_[e.v0] = locked_[e.v1] = 1;
    for (int f = 0; f < mesh.face_count(); ++f) {
      const auto& t = faces_[f];
      Eigen::Vector3d n = (pos_[t[1]] - pos_[t[0]]).cross(pos_[t[2]] - pos_[t[0]]);
      const double len = n.norm();
      if (len <= 0) continue;
      n /= len;
      const Quadric q = Quadric::plane(n, -n.dot(pos_[t[0]]), 0.5 * len);
      for (int v : t) quadric_[v] += q;
    }
    for (const Edge& e : mesh.edges()) push(e.v0, e.v1);
  }

  void run(int target) {
    while (alive_count_ > target && !heap_.empty()) {
      const Candidate c = heap_.top();
      heap_.pop();
      if (!alive_[c.u] || !alive_[c.v] || version_[c.u] != c.ver_u || version_[c.v] != c.ver_v) continue;
      collapse(c.u, c.v, c.target);
    }
  }

  Mesh result() const {
    std::vector<int> remap(pos_.size(), -1);
    int nv = 0, nf = 0;
    for (size_t f = 0; f < faces_.size(); ++f)
      if (face_alive_[f]) {
        ++nf;
        for (int v : faces_[f]) remap[v] = 0;
      }
    for (size_t v = 0; v < pos_.size(); ++v)
      if (remap[v] == 0) remap[v] = nv++;
    Vertices V(nv, 3);
    for (size_t v = 0; v < pos_.size(); ++v)
      if (remap[v] >= 0) V.row(remap[v]) = pos_[v].transpose();
    Faces F(nf, 3);
    int k = 0;
    for (size_t f = 0; f < faces_.size(); ++f)
      if (face_alive_[f]) F.row(k++) << remap[faces_[f][0]], remap[faces_[f][1]], remap[faces_[f][2]];
    return Mesh(std::move(V), std::move(F));
  }

 private:
  void push(int u, int v) {
    if (locked_[u] || locked_[v]) return;
    if (u > v) std::swap(u, v);
    const Quadric q = [&] {
      Quadric s = quadric_[u];
      s += quadric_[v];
      return s;
    }();
    Eigen::Vector3d best = 0.5 * (pos_[u] + pos_[v]);
    double best_cost = q.error(best);
    const double edge = (pos_[u] - pos_[v]).norm();
    if (auto p = q.minimizer(); p && (*p - best).norm() <= edge) {
      best = *p;
      best_cost = q.error(best);
    } else {
      for (const Eigen::Vector3d& cand : {pos_[u], pos_[v]}) {
        const double e = q.error(cand);
        if (e < best_cost) {
          best_cost = e;
          best = cand;
        }
      }
    }
    heap_.push({std::max(best_cost, 0.0), u, v, version_[u], version_[v], best});
  }

  void neighbors(int v, std::vector<int>& out) const {
    out.clear();
    for (int f : vfaces_[v])
      for (int w : faces_[f])
        if (w != v) out.push_back(w);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

  void collapse(int u, int v, const Eigen::Vector3d& p) {
    shared_.clear();
    for (int f : vfaces_[u]) {
      const auto& t = faces_[f];
      if (t[0] == v || t[1] == v || t[2] == v) shared_.push_back(f);
    }
    if (shared_.size() != 2) return;

    // Link condition: common neighbours are exactly the two opposite vertices.
    neighbors(u, nu_);
    neighbors(v, nv_);
    common_.clear();
    std::set_intersection(nu_.begin(), nu_.end(), nv_.begin(), nv_.end(), std::back_inserter(common_));
    if (common_.size() != 2) return;
    for (int f : shared_)
      for (int w : faces_[f])
        if (w != u && w != v && !std::binary_search(common_.begin(), common_.end(), w)) return;
    if (nu_.size() + nv_.size() - 4 < 3) return;  // would leave a vertex of valence < 3

    // Reject flips and degenerate faces among the faces that survive.
    for (int x : {u, v})
      for (int f : vfaces_[x]) {
        if (std::find(shared_.begin(), shared_.end(), f) != shared_.end()) continue;
        const auto& t = faces_[f];
        Eigen::Vector3d q[3];
        for (int k = 0; k < 3; ++k) q[k] = (t[k] == u || t[k] == v) ? p : pos_[t[k]];
        const Eigen::Vector3d before = (pos_[t[1]] - pos_[t[0]]).cross(pos_[t[2]] - pos_[t[0]]);
        const Eigen::Vector3d after = (q[1] - q[0]).cross(q[2] - q[0]);
        if (after.dot(before) <= 0.2 * after.norm() * before.norm()) return;
      }

    for (int f : shared_) face_alive_[f] = 0;
    for (int f : vfaces_[v]) {
      if (!face_alive_[f]) continue;
      for (int& w : faces_[f])
        if (w == v) w = u;
    }
    std::vector<int> merged;
    merged.reserve(vfaces_[u].size() + vfaces_[v].size());
    for (int f : vfaces_[u])
      if (face_alive_[f]) merged.push_back(f);
    for (int f : vfaces_[v])
      if (face_alive_[f]) merged.push_back(f);
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    vfaces_[u] = std::move(merged);
    vfaces_[v].clear();
    for (int w : common_) {
      auto& list = vfaces_[w];
      list.erase(std::remove_if(list.begin(), list.end(), [&](int f) { return !face_alive_[f]; }), list.end());
    }

    quadric_[u] += quadric_[v];
    pos_[u] = p;
    alive_[v] = 0;
    --alive_count_;
    ++version_[u];
    ++version_[v];
    neighbors(u, nu_);
    for (int w : nu_) push(u, w);
  }

  const Mesh& mesh_;
  std::vector<Eigen::Vector3d> pos_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<char> face_alive_;
  std::vector<std::vector<int>> vfaces_;
  std::vector<char> alive_;
  std::vector<int> version_;
  std::vector<char> locked_;
  std::vector<Quadric> quadric_;
  int alive_count_ = 0;
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap_;
  std::vector<int> shared_, nu_, nv_, common_;
};

std::vector<std::vector<int>> vertex_neighbors(const Mesh& mesh) {
  std::vector<std::vector<int>> adj(mesh.vertex_count());
  for (const Edge& e : mesh.edges()) {
    adj[e.v0].push_back(e.v1);
    adj[e.v1].push_back(e.v0);
  }
  return adj;
}

}  // namespace

Mesh decimate(const Mesh& mesh, double target_vertex_fraction, bool preserve_boundary) {
  if (!(target_vertex_fraction > 0.0 && target_vertex_fraction <= 1.0))
    throw std::invalid_argument("target_vertex_fraction must lie in (0, 1]");
  if (mesh.empty()) throw MeshError("cannot decimate an empty mesh");
  if (target_vertex_fraction == 1.0) return mesh;
  const int target = static_cast<int>(std::lround(target_vertex_fraction * mesh.vertex_count()));
  if (target < 4) throw MeshError("target of " + std::to_string(target) + " vertices would degenerate the surface");
  if (!preserve_boundary && !topology_summary(mesh).is_watertight)
    throw MeshError("decimating a mesh with boundary requires boundary preservation");
  Decimator d(mesh, preserve_boundary);
  d.run(target);
  return d.result();
}

Mesh smooth(const Mesh& mesh, const OptimizeParams& params) {
  if (params.smoothing_iterations < 0) throw std::invalid_argument("smoothing_iterations must be non-negative");
  if (params.smoothing_kind == SmoothingKind::Taubin) params.validate();
  if (params.smoothing_iterations == 0) return mesh;

  const auto adj = vertex_neighbors(mesh);
  std::vector<char> fixed(mesh.vertex_count(), 0);
  if (params.preserve_boundary)
    for (int v : detect_boundary(mesh)) fixed[v] = 1;

  Vertices P = mesh.vertices();
  Vertices next = P;
  auto step = [&](double factor) {
    for (int v = 0; v < mesh.vertex_count(); ++v) {
      if (fixed[v] || adj[v].empty()) {
        next.row(v) = P.row(v);
        continue;
      }
      Eigen::RowVector3d avg = Eigen::RowVector3d::Zero();
      for (int w : adj[v]) avg += P.row(w);
      avg /= static_cast<double>(adj[v].size());
      next.row(v) = P.row(v) + factor * (avg - P.row(v));
    }
    std::swap(P, next);
  };
  for (int it = 0; it < params.smoothing_iterations; ++it) {
    step(params.taubin_lambda);
    if (params.smoothing_kind == SmoothingKind::Taubin) step(params.taubin_mu);
  }
  return Mesh(std::move(P), mesh.faces());
}

Mesh optimize(const Mesh& mesh, const OptimizeParams& params) {
  params.validate();
  return smooth(decimate(mesh, params.target_vertex_fraction, params.preserve_boundary), params);
}

double point_triangle_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                               const Eigen::Vector3d& c) {
  // Voronoi-region walk for the closest point.
  const Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return ap.norm();
  const Eigen::Vector3d bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return bp.norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return (p - (a + d1 / (d1 - d3) * ab)).norm();
  const Eigen::Vector3d cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return cp.norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return (p - (a + d2 / (d2 - d6) * ac)).norm();
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
    return (p - (b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b))).norm();
  const double denom = 1.0 / (va + vb + vc);
  return (p - (a + ab * (vb * denom) + ac * (vc * denom))).norm();
}

namespace {

// Bounding-volume hierarchy over triangles; nearest search descends the closer child first.
class TriangleTree {
 public:
  explicit TriangleTree(const Mesh& mesh) : mesh_(mesh) {
    const int n = mesh.face_count();
    order_.resize(n);
    centroid_.resize(n);
    for (int f = 0; f < n; ++f) {
      order_[f] = f;
      const auto t = mesh.face(f);
      centroid_[f] = (mesh.vertex(t[0]) + mesh.vertex(t[1]) + mesh.vertex(t[2])) / 3.0;
    }
    nodes_.reserve(2 * n / kLeaf + 2);
    build(0, n);
  }

  double distance(const Eigen::Vector3d& p) const {
    double best = std::numeric_limits<double>::infinity();
    search(0, p, best);
    return best;
  }

 private:
  static constexpr int kLeaf = 4;

  struct Node {
    Eigen::AlignedBox3d box;
    int begin = 0, end = 0;
    int left = -1, right = -1;
  };

  int build(int begin, int end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    Node node;
    node.begin = begin;
    node.end = end;
    Eigen::AlignedBox3d centres;
    for (int i = begin; i < end; ++i) {
      const auto t = mesh_.face(order_[i]);
      for (int k = 0; k < 3; ++k) node.box.extend(mesh_.vertex(t[k]));
      centres.extend(centroid_[order_[i]]);
    }
    if (end - begin > kLeaf) {
      int axis = 0;
      centres.sizes().maxCoeff(&axis);
      const int mid = begin + (end - begin) / 2;
      std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                       [&](int a, int b) { return centroid_[a][axis] < centroid_[b][axis]; });
      node.left = build(begin, mid);
      node.right = build(mid, end);
    }
    nodes_[id] = node;
    return id;
  }

  void search(int id, const Eigen::Vector3d& p, double& best) const {
    const Node& node = nodes_[id];
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const auto t = mesh_.face(order_[i]);
        best = std::min(best, point_triangle_distance(p, mesh_.vertex(t[0]), mesh_.vertex(t[1]), mesh_.vertex(t[2])));
      }
      return;
    }
    const double dl = nodes_[node.left].box.exteriorDistance(p);
    const double dr = nodes_[node.right].box.exteriorDistance(p);
    const int first = dl <= dr ? node.left : node.right, second = dl <= dr ? node.right : node.left;
    if (std::min(dl, dr) < best) search(first, p, best);
    if (std::max(dl, dr) < best) search(second, p, best);
  }

  const Mesh& mesh_;
  std::vector<int> order_;
  std::vector<Eigen::Vector3d> centroid_;
  std::vector<Node> nodes_;
};

}  // namespace

double directed_hausdorff(const Mesh& from, const Mesh& to) {
  if (from.empty() || to.empty()) throw MeshError("Hausdorff distance needs two non-empty meshes");
  const TriangleTree tree(to);
  double worst = 0.0;
  std::vector<char> referenced(from.vertex_count(), 0);
  for (int f = 0; f < from.face_count(); ++f) {
    const auto t = from.face(f);
    for (int v : t) referenced[v] = 1;
    worst = std::max(worst, tree.distance((from.vertex(t[0]) + from.vertex(t[1]) + from.vertex(t[2])) / 3.0));
  }
  for (int v = 0; v < from.vertex_count(); ++v)
    if (referenced[v]) worst = std::max(worst, tree.distance(from.vertex(v)));
  return worst;
}

double hausdorff_distance(const Mesh& a, const Mesh& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

}  // namespace slicekit
