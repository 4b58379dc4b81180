#include "slicekit/bench.hpp"

#include "slicekit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace slicekit {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

BenchRecord bench_slice(const Mesh& mesh, const std::string& model_id, const std::string& variant, Axis axis,
                        double offset, int runs) {
  if (runs < 1) throw std::invalid_argument("bench needs at least one run");
  std::vector<double> total, intersect, assemble;
  BenchRecord rec;
  for (int i = 0; i < runs; ++i) {
    SliceTimings t;
    SliceOptions opts;
    opts.timings = &t;
    const SliceResult r = slice_axial(mesh, axis, offset, opts);
    total.push_back(t.total());
    intersect.push_back(t.intersect);
    assemble.push_back(t.assemble + t.metrics);
    rec.loop_count = static_cast<int>(r.loops.size());
  }
  const double mean = std::accumulate(total.begin(), total.end(), 0.0) / runs;
  double var = 0.0;
  for (double x : total) var += (x - mean) * (x - mean);
  var /= runs;

  rec.model_id = model_id;
  rec.variant = variant;
  rec.axis = axis;
  rec.offset = offset;
  rec.vertex_count = mesh.vertex_count();
  rec.face_count = mesh.face_count();
  rec.wall_time = std::max(median(total), 1e-9);
  rec.intersect_time = median(intersect);
  rec.assemble_time = median(assemble);
  rec.coefficient_of_variation = mean > 0 ? std::sqrt(var) / mean : 0.0;
  rec.runs = runs;
  return rec;
}

std::vector<BenchRecord> bench_original_vs_optimized(const Mesh& mesh, const std::string& model_id, Axis axis,
                                                     double offset, double fraction, int runs) {
  std::vector<BenchRecord> out;
  out.push_back(bench_slice(mesh, model_id, "original", axis, offset, runs));
  const Mesh reduced = decimate(mesh, fraction);
  out.push_back(bench_slice(reduced, model_id, "optimized", axis, offset, runs));
  return out;
}

json to_json(const BenchRecord& r) {
  static const char* names[] = {"x", "y", "z"};
  return {{"model_id", r.model_id},
          {"variant", r.variant},
          {"axis", names[static_cast<int>(r.axis)]},
          {"offset", r.offset},
          {"vertex_count", r.vertex_count},
          {"face_count", r.face_count},
          {"wall_time", r.wall_time},
          {"intersect_time", r.intersect_time},
          {"assemble_time", r.assemble_time},
          {"coefficient_of_variation", r.coefficient_of_variation},
          {"runs", r.runs},
          {"loop_count", r.loop_count}};
}

}  // namespace slicekit
