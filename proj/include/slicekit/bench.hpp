#pragma once

#include "slicekit/mesh.hpp"
#include "slicekit/serialize.hpp"
#include "slicekit/slice.hpp"

#include <string>
#include <vector>

namespace slicekit {

struct BenchRecord {
  std::string model_id;
  std::string variant;  // "original" or "optimized"
  Axis axis = Axis::Y;
  double offset = 0.0;
  int vertex_count = 0;
  int face_count = 0;
  double wall_time = 0.0;  // median total seconds over the runs
  double intersect_time = 0.0;  // median
  double assemble_time = 0.0;   // median, loop assembly plus metrics
  double coefficient_of_variation = 0.0;
  int runs = 0;
  int loop_count = 0;
};

/// Times slice_axial `runs` times on the calling thread.
BenchRecord bench_slice(const Mesh& mesh, const std::string& model_id, const std::string& variant, Axis axis,
                        double offset, int runs = 5);

/// Original and decimated variants of the same mesh and plane.
std::vector<BenchRecord> bench_original_vs_optimized(const Mesh& mesh, const std::string& model_id, Axis axis,
                                                     double offset, double fraction, int runs = 5);

json to_json(const BenchRecord& record);

}  // namespace slicekit
