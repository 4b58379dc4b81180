#include "slicekit/slice.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace slicekit {

PlaneFrame PlaneFrame::of(const PlaneSpec& plane) {
  PlaneFrame f;
  f.normal = plane.normal;
  f.origin = plane.offset * plane.normal;
  int helper = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(plane.normal[i]) < std::abs(plane.normal[helper])) helper = i;
  const Eigen::Vector3d h = Eigen::Vector3d::Unit(helper);
  f.u = (h - h.dot(plane.normal) * plane.normal).normalized();
  f.v = plane.normal.cross(f.u);
  return f;
}

std::vector<Eigen::Vector3d> SliceResult::world_points(const Polyline& line) const {
  std::vector<Eigen::Vector3d> out;
  out.reserve(static_cast<size_t>(line.points.rows()));
  for (Eigen::Index i = 0; i < line.points.rows(); ++i) out.push_back(frame.to_world(line.points.row(i).transpose()));
  return out;
}

namespace {

// Chains segments into polylines by shared intersection node.
void assemble(SliceResult& r) {
  const size_t ns = r.segments.size();
  std::unordered_map<std::int64_t, int> node_index;
  node_index.reserve(ns * 2);
  std::vector<Eigen::Vector2d> pos;
  std::vector<std::vector<int>> adj;
  std::vector<std::array<int, 2>> ends(ns);
  auto node = [&](std::int64_t key, const Eigen::Vector3d& p) {
    auto [it, inserted] = node_index.try_emplace(key, static_cast<int>(pos.size()));
    if (inserted) {
      pos.push_back(r.frame.to_plane(p));
      adj.emplace_back();
    }
    return it->second;
  };
  for (size_t s = 0; s < ns; ++s) {
    const Segment& seg = r.segments[s];
    ends[s] = {node(seg.node_a, seg.a), node(seg.node_b, seg.b)};
    adj[ends[s][0]].push_back(static_cast<int>(s));
    adj[ends[s][1]].push_back(static_cast<int>(s));
  }

  std::vector<char> used(ns, 0);
  auto other = [&](int s, int n) { return ends[s][0] == n ? ends[s][1] : ends[s][0]; };

  auto walk = [&](int start, int first) {
    Polyline line;
    std::vector<Eigen::Vector2d> pts{pos[start]};
    int cur = start, s = first;
    bool closed = false;
    for (;;) {
      used[s] = 1;
      line.segments.push_back(s);
      const int next = other(s, cur);
      if (next == start) {
        closed = true;
        break;
      }
      pts.push_back(pos[next]);
      int best = -1, candidates = 0;
      double best_turn = 0.0;
      const Eigen::Vector2d in = pos[next] - pos[cur];
      for (int c : adj[next]) {
        if (used[c]) continue;
        ++candidates;
        const Eigen::Vector2d out = pos[other(c, next)] - pos[next];
        const double turn = std::abs(std::atan2(in.x() * out.y() - in.y() * out.x(), in.dot(out)));
        if (best < 0 || turn < best_turn) {
          best = c;
          best_turn = turn;
        }
      }
      if (best < 0) break;
      if (candidates > 1) line.ambiguous = true;
      cur = next;
      s = best;
    }
    if (closed && pts.size() >= 3) {
      line.points.resize(static_cast<Eigen::Index>(pts.size()), 2);
      for (size_t i = 0; i < pts.size(); ++i) line.points.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
      r.loops.push_back(std::move(line));
    } else {
      if (closed) pts.push_back(pos[start]);
      line.points.resize(static_cast<Eigen::Index>(pts.size()), 2);
      for (size_t i = 0; i < pts.size(); ++i) line.points.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
      r.open_chains.push_back(std::move(line));
    }
  };

  // Chain ends first so open chains are walked from one end.
  for (int n = 0; n < static_cast<int>(pos.size()); ++n) {
    if (adj[n].size() % 2 == 0) continue;
    for (int s : adj[n])
      if (!used[s]) {
        walk(n, s);
        break;
      }
  }
  for (size_t s = 0; s < ns; ++s)
    if (!used[s]) walk(ends[s][0], static_cast<int>(s));
}

template <typename Distance>
SliceResult slice_impl(const Mesh& mesh, const PlaneSpec& plane, const SliceOptions& options, Distance&& distance) {
  if (mesh.empty()) throw MeshError("cannot slice an empty mesh");
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  SliceResult r;
  r.plane = plane;
  r.frame = PlaneFrame::of(plane);
  r.snap_tolerance = options.relative_snap_tolerance * mesh.bbox_diagonal();
  const double tol = r.snap_tolerance;

  const int nv = mesh.vertex_count();
  std::vector<double> d(nv);
  for (int v = 0; v < nv; ++v) {
    const double x = distance(v);
    d[v] = std::abs(x) <= tol ? 0.0 : x;
  }
  const auto& V = mesh.vertices();
  auto crossing = [&](int i, int j) -> Eigen::Vector3d {
    if (i > j) std::swap(i, j);
    const double t = d[i] / (d[i] - d[j]);
    return V.row(i).transpose() + t * (V.row(j) - V.row(i)).transpose();
  };
  auto sign = [&](int v) { return (d[v] > 0.0) - (d[v] < 0.0); };

  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto t = mesh.face(f);
    const int s[3] = {sign(t[0]), sign(t[1]), sign(t[2])};
    const int zeros = (s[0] == 0) + (s[1] == 0) + (s[2] == 0);
    if (zeros == 3) {
      ++r.coplanar_face_count;
      continue;
    }
    if (s[0] >= 0 && s[1] >= 0 && s[2] >= 0 && zeros == 0) continue;
    if (s[0] <= 0 && s[1] <= 0 && s[2] <= 0 && zeros == 0) continue;

    Segment seg;
    seg.face = f;
    int found = 0;
    auto push = [&](const Eigen::Vector3d& p, std::int64_t node) {
      if (found == 0) {
        seg.a = p;
        seg.node_a = node;
      } else {
        seg.b = p;
        seg.node_b = node;
      }
      ++found;
    };
    if (zeros == 2) {
      // An edge lying in the plane is emitted once, by the face on the positive side.
      if (s[0] + s[1] + s[2] < 0) continue;
      for (int k = 0; k < 3; ++k)
        if (s[k] == 0) push(V.row(t[k]).transpose(), t[k]);
    } else {
      for (int k = 0; k < 3; ++k) {
        const int a = t[k], b = t[(k + 1) % 3];
        if (s[k] == 0) {
          push(V.row(a).transpose(), a);
        } else if (s[(k + 1) % 3] != 0 && s[k] != s[(k + 1) % 3]) {
          push(crossing(a, b), static_cast<std::int64_t>(nv) + mesh.face_edges(f)[k]);
        }
      }
      if (found != 2) continue;  // vertex touch without crossing
    }
    ++r.crossed_face_count;
    r.segments.push_back(seg);
  }

  const auto t1 = Clock::now();
  assemble(r);
  const auto t2 = Clock::now();
  if (options.compute_metrics) {
    r.metrics.reserve(r.loops.size());
    for (const auto& loop : r.loops) r.metrics.push_back(compute_metrics(loop.points));
  }
  if (options.timings) {
    const auto t3 = Clock::now();
    options.timings->intersect = std::chrono::duration<double>(t1 - t0).count();
    options.timings->assemble = std::chrono::duration<double>(t2 - t1).count();
    options.timings->metrics = std::chrono::duration<double>(t3 - t2).count();
  }
  return r;
}

}  // namespace

SliceResult slice(const Mesh& mesh, const PlaneSpec& plane, const SliceOptions& options) {
  const auto& V = mesh.vertices();
  const Eigen::Vector3d n = plane.normal;
  return slice_impl(mesh, plane, options, [&](int v) {
    return n[0] * V(v, 0) + n[1] * V(v, 1) + n[2] * V(v, 2) - plane.offset;
  });
}

SliceResult slice_axial(const Mesh& mesh, Axis axis, double offset, const SliceOptions& options) {
  const auto& V = mesh.vertices();
  const int c = static_cast<int>(axis);
  return slice_impl(mesh, PlaneSpec(axis_vector(axis), offset), options, [&](int v) { return V(v, c) - offset; });
}

Mesh subdivide_crossed_faces(const Mesh& mesh, const PlaneSpec& plane, double relative_snap_tolerance) {
  const double tol = relative_snap_tolerance * mesh.bbox_diagonal();
  const int nv = mesh.vertex_count();
  std::vector<double> d(nv);
  for (int v = 0; v < nv; ++v) {
    const double x = plane.signed_distance(mesh.vertex(v));
    d[v] = std::abs(x) <= tol ? 0.0 : x;
  }
  auto sign = [&](int v) { return (d[v] > 0.0) - (d[v] < 0.0); };

  std::vector<Eigen::Vector3d> pts;
  pts.reserve(static_cast<size_t>(nv));
  for (int v = 0; v < nv; ++v) pts.push_back(mesh.vertex(v));
  std::unordered_map<int, int> edge_vertex;
  auto crossing = [&](int f, int k) {
    const int eid = mesh.face_edges(f)[k];
    auto it = edge_vertex.find(eid);
    if (it != edge_vertex.end()) return it->second;
    const Edge& e = mesh.edges()[eid];
    const double t = d[e.v0] / (d[e.v0] - d[e.v1]);
    pts.push_back(pts[e.v0] + t * (pts[e.v1] - pts[e.v0]));
    const int id = static_cast<int>(pts.size()) - 1;
    edge_vertex.emplace(eid, id);
    return id;
  };

  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<size_t>(mesh.face_count()) + 16);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto t = mesh.face(f);
    const int s[3] = {sign(t[0]), sign(t[1]), sign(t[2])};
    const int zeros = (s[0] == 0) + (s[1] == 0) + (s[2] == 0);
    if (zeros == 1) {
      int z = 0;
      while (s[z] != 0) ++z;
      const int p = (z + 1) % 3, q = (z + 2) % 3;
      if (s[p] == s[q]) {
        tris.push_back(t);
        continue;
      }
      const int x = crossing(f, p);  // edge p -> q is slot p
      tris.push_back({t[z], t[p], x});
      tris.push_back({t[z], x, t[q]});
      continue;
    }
    if (zeros > 0 || (s[0] == s[1] && s[1] == s[2])) {
      tris.push_back(t);
      continue;
    }
    // Lone vertex a on one side; b, c on the other, in winding order.
    int a = 0;
    if (s[0] == s[1]) a = 2;
    else if (s[0] == s[2]) a = 1;
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    const int xab = crossing(f, a);  // slot a is edge a -> b
    const int xca = crossing(f, c);  // slot c is edge c -> a
    tris.push_back({t[a], xab, xca});
    if ((pts[xab] - pts[t[c]]).squaredNorm() <= (pts[t[b]] - pts[xca]).squaredNorm()) {
      tris.push_back({xab, t[b], t[c]});
      tris.push_back({xab, t[c], xca});
    } else {
      tris.push_back({xab, t[b], xca});
      tris.push_back({t[b], t[c], xca});
    }
  }

  Vertices V(static_cast<Eigen::Index>(pts.size()), 3);
  for (size_t i = 0; i < pts.size(); ++i) V.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  Faces F(static_cast<Eigen::Index>(tris.size()), 3);
  for (size_t i = 0; i < tris.size(); ++i) F.row(static_cast<Eigen::Index>(i)) << tris[i][0], tris[i][1], tris[i][2];
  return Mesh(std::move(V), std::move(F));
}

Axis parse_axis(const std::string& name) {
  if (name == "x" || name == "X") return Axis::X;
  if (name == "y" || name == "Y") return Axis::Y;
  if (name == "z" || name == "Z") return Axis::Z;
  throw std::invalid_argument("unknown axis '" + name + "' (expected x, y or z)");
}

Eigen::Vector3d axis_vector(Axis axis) { return Eigen::Vector3d::Unit(static_cast<int>(axis)); }

}  // namespace slicekit
