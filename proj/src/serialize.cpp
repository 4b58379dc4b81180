#include "slicekit/serialize.hpp"

namespace slicekit {

namespace {

json vec(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

json points(const Polyline2<double>& p) {
  json out = json::array();
  for (Eigen::Index i = 0; i < p.rows(); ++i) out.push_back(json::array({p(i, 0), p(i, 1)}));
  return out;
}

}  // namespace

json to_json(const LoadReport& r) {
  return {{"format", format_name(r.format)},
          {"input_vertex_count", r.input_vertex_count},
          {"input_face_count", r.input_face_count},
          {"welded_vertex_count", r.welded_vertex_count},
          {"dropped_face_count", r.dropped_face_count},
          {"weld_tolerance", r.weld_tolerance}};
}

json to_json(const TopologySummary& s) {
  return {{"vertex_count", s.vertex_count},
          {"edge_count", s.edge_count},
          {"face_count", s.face_count},
          {"euler_characteristic", s.euler_characteristic},
          {"boundary_edge_count", s.boundary_edge_count},
          {"connected_component_count", s.connected_component_count},
          {"is_watertight", s.is_watertight}};
}

json to_json(const RiskReport& r) {
  json comps = json::array();
  for (const auto& c : r.isolated_components) comps.push_back({{"vertices", c.vertices}, {"faces", c.faces}});
  return {{"vertex_count", r.vertex_count},
          {"face_count", r.face_count},
          {"thresholds",
           {{"eps_gaussian", r.eps_gaussian},
            {"eps_mean", r.eps_mean},
            {"component_size_threshold", r.component_size_threshold},
            {"aspect_ratio_threshold", r.aspect_ratio_threshold}}},
          {"error_vertices", r.error_vertices},
          {"boundary_vertices", r.boundary_vertices},
          {"flat_vertices", r.flat_vertices},
          {"risky_vertices", r.risky_vertices},
          {"isolated_components", comps},
          {"elongated_faces", r.elongated_faces},
          {"gaussian_sign", {{"positive", r.positive_gaussian_count}, {"negative", r.negative_gaussian_count}}}};
}

json to_json(const SliceMetrics& m) {
  return {{"area", m.area},
          {"perimeter", m.perimeter},
          {"equivalent_diameter", m.equivalent_diameter},
          {"max_feret", m.max_feret},
          {"min_feret", m.min_feret},
          {"centroid", json::array({m.centroid.x(), m.centroid.y()})},
          {"self_intersecting", m.self_intersecting}};
}

json to_json(const SliceResult& r) {
  json loops = json::array();
  for (size_t i = 0; i < r.loops.size(); ++i) {
    json l = {{"points", points(r.loops[i].points)}, {"ambiguous", r.loops[i].ambiguous}};
    if (i < r.metrics.size()) l["metrics"] = to_json(r.metrics[i]);
    loops.push_back(std::move(l));
  }
  json chains = json::array();
  for (const auto& c : r.open_chains) chains.push_back({{"points", points(c.points)}, {"ambiguous", c.ambiguous}});
  return {{"plane", {{"normal", vec(r.plane.normal)}, {"offset", r.plane.offset}}},
          {"frame", {{"origin", vec(r.frame.origin)}, {"u", vec(r.frame.u)}, {"v", vec(r.frame.v)}}},
          {"segment_count", r.segments.size()},
          {"crossed_face_count", r.crossed_face_count},
          {"coplanar_face_count", r.coplanar_face_count},
          {"snap_tolerance", r.snap_tolerance},
          {"loops", loops},
          {"open_chains", chains}};
}

}  // namespace slicekit
