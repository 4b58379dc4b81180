#pragma once

#include "slicekit/mesh.hpp"
#include "slicekit/slice.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace slicekit {

struct SweepSpec {
  std::vector<Eigen::Vector3d> normals{Eigen::Vector3d::UnitY()};
  /// Offsets per normal; a single list applies to every normal.
  std::vector<std::vector<double>> offsets;
  /// Mesh rotations about its bounding-box centre.
  std::vector<Eigen::Matrix3d> rotations{Eigen::Matrix3d::Identity()};
  int resolution = 256;
  std::string label;
  std::uint64_t seed = 0;
  /// Extra planes through the bounding-box centre with seeded random normals.
  int random_direction_count = 0;

  /// Throws std::invalid_argument on an empty sweep, resolution < 16, a
  /// non-unit normal or a non-orthonormal rotation.
  void validate() const;
  const std::vector<double>& offsets_for(size_t normal_index) const;
  /// |rotations| * sum of offsets + random_direction_count.
  size_t planned_count() const;

  static std::vector<double> linspace(double start, double stop, int count);
};

struct DatasetRecord {
  std::string filename;
  Eigen::Vector3d normal = Eigen::Vector3d::UnitY();
  double offset = 0.0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  int loop_count = 0;
  double area = 0.0;                 // summed over loops
  double perimeter = 0.0;            // summed over loops
  double equivalent_diameter = 0.0;  // of the largest loop
  double min_feret = 0.0;            // of the largest loop
  double max_feret = 0.0;            // of the largest loop
  bool empty = true;
};

struct DatasetManifest {
  std::string model_id;
  std::string label;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::vector<DatasetRecord> records;

  /// Header line, then one tab-separated record per line.
  std::string to_tsv() const;
};

/// Slices the rotated mesh at every planned plane, writes one PGM mask per plane
/// plus manifest.tsv into out_dir. Output is deterministic for a given spec.
DatasetManifest generate(const Mesh& mesh, const SweepSpec& spec, const std::filesystem::path& out_dir,
                         const std::string& model_id = "model");

}  // namespace slicekit
