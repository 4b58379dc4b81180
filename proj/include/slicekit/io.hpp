#pragma once

#include "slicekit/mesh.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace slicekit {

enum class MeshFormat { Auto, StlBinary, StlAscii, Obj };

class MeshIOError : public MeshError {
 public:
  using MeshError::MeshError;
};

class EmptyMeshError : public MeshError {
 public:
  using MeshError::MeshError;
};

struct LoadReport {
  MeshFormat format = MeshFormat::Auto;  // format actually parsed
  int input_vertex_count = 0;            // corner records (STL) or v records (OBJ)
  int input_face_count = 0;
  int welded_vertex_count = 0;  // input vertices merged into an earlier one
  int dropped_face_count = 0;   // faces collapsed by welding
  double weld_tolerance = 0.0;
};

struct LoadedMesh {
  Mesh mesh;
  LoadReport report;
};

/// Triangle soup, welded. Tolerance nullopt means 1e-6 of the bounding-box diagonal.
struct Soup {
  std::vector<Eigen::Vector3d> points;
  std::vector<std::array<int, 3>> triangles;
};

LoadedMesh weld(const Soup& soup, std::optional<double> weld_tolerance, LoadReport report = {});

/// Parses and welds. Throws MeshIOError on unreadable or malformed input and
/// EmptyMeshError when no face survives.
LoadedMesh load_mesh(const std::filesystem::path& path, MeshFormat format = MeshFormat::Auto,
                     std::optional<double> weld_tolerance = std::nullopt);

/// Only StlBinary and Obj are writable.
void save_mesh(const Mesh& mesh, const std::filesystem::path& path, MeshFormat format);

MeshFormat parse_format(const std::string& name);
std::string format_name(MeshFormat format);

}  // namespace slicekit
