#pragma once

#include "slicekit/mesh.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace httplib {
class Server;
}

namespace slicekit {

struct Annotation {
  std::string id;
  Eigen::Vector3d anchor = Eigen::Vector3d::Zero();
  std::string title;
  std::string text;
};

/// Sidecar `<model>.annotations.tsv`: one `id x y z title text` record per line,
/// tab-separated; `#` starts a comment line. Tabs, newlines and backslashes in
/// title and text are written as \t, \n and \\. A missing file yields no records.
std::vector<Annotation> read_annotations(const std::filesystem::path& path);
void write_annotations(const std::vector<Annotation>& annotations, const std::filesystem::path& path);

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Loads every .stl/.obj under a directory once and answers viewer requests from
/// the shared immutable meshes. All handlers are const and thread-safe.
class SliceService {
 public:
  /// Throws MeshError if no mesh in the directory loads.
  explicit SliceService(std::filesystem::path mesh_dir, std::optional<double> weld_tolerance = std::nullopt,
                        double scale = 1.0);

  std::vector<std::string> model_ids() const;
  std::shared_ptr<const Mesh> model(const std::string& id) const;

  Response list_models() const;
  /// format "binary": uint32 vertex count, uint32 face count, float32 xyz per
  /// vertex, uint32 index triples; all little-endian. format "json": flat arrays.
  Response geometry(const std::string& id, const std::string& format) const;
  /// Body {"model": id, "normal": [x, y, z], "offset": s}; the normal is normalized.
  Response slice(const std::string& request_body) const;
  Response annotations(const std::string& id) const;

  /// GET /api/models, GET /api/models/{id}/geometry?format=, GET
  /// /api/models/{id}/annotations, POST /api/slice.
  void bind(httplib::Server& server) const;
  /// Blocks until the server stops.
  void serve(const std::string& host, int port) const;

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::shared_ptr<const Mesh>> models_;
};

}  // namespace slicekit
