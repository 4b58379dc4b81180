#include "slicekit/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace slicekit {

namespace {

static_assert(std::endian::native == std::endian::little, "STL IO assumes a little-endian host");

struct CellHash {
  size_t operator()(const std::array<std::int64_t, 3>& c) const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : c) {
      h ^= static_cast<std::uint64_t>(x);
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MeshIOError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw MeshIOError("read failed: " + path.string());
  return ss.str();
}

template <typename T>
T read_le(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

Soup parse_stl_binary(const std::string& data) {
  if (data.size() < 84) throw MeshIOError("binary STL shorter than its 84-byte header");
  const auto n = read_le<std::uint32_t>(data.data() + 80);
  if (data.size() < 84 + static_cast<size_t>(n) * 50)
    throw MeshIOError("binary STL truncated: header declares " + std::to_string(n) + " facets");
  Soup soup;
  soup.points.reserve(static_cast<size_t>(n) * 3);
  soup.triangles.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const char* rec = data.data() + 84 + static_cast<size_t>(i) * 50 + 12;
    const int base = static_cast<int>(soup.points.size());
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d p;
      for (int c = 0; c < 3; ++c) p[c] = read_le<float>(rec + 12 * k + 4 * c);
      if (!p.allFinite()) throw MeshIOError("non-finite coordinate in facet " + std::to_string(i));
      soup.points.push_back(p);
    }
    soup.triangles.push_back({base, base + 1, base + 2});
  }
  return soup;
}

Soup parse_stl_ascii(const std::string& data) {
  std::istringstream in(data);
  std::string tok;
  in >> tok;
  if (tok != "solid") throw MeshIOError("ASCII STL must start with 'solid'");
  std::string rest;
  std::getline(in, rest);
  Soup soup;
  std::vector<Eigen::Vector3d> corners;
  bool in_facet = false;
  while (in >> tok) {
    if (tok == "facet") {
      if (in_facet) throw MeshIOError("nested facet in ASCII STL");
      in_facet = true;
      corners.clear();
      std::getline(in, rest);
    } else if (tok == "vertex") {
      Eigen::Vector3d p;
      if (!(in >> p[0] >> p[1] >> p[2])) throw MeshIOError("malformed vertex record in ASCII STL");
      corners.push_back(p);
    } else if (tok == "endfacet") {
      if (!in_facet || corners.size() != 3)
        throw MeshIOError("facet with " + std::to_string(corners.size()) + " vertices in ASCII STL");
      const int base = static_cast<int>(soup.points.size());
      soup.points.insert(soup.points.end(), corners.begin(), corners.end());
      soup.triangles.push_back({base, base + 1, base + 2});
      in_facet = false;
    } else if (tok == "outer" || tok == "loop" || tok == "endloop") {
    } else if (tok == "endsolid") {
      std::getline(in, rest);
    } else if (tok == "solid") {
      std::getline(in, rest);
    } else {
      throw MeshIOError("unexpected token '" + tok + "' in ASCII STL");
    }
  }
  if (in_facet) throw MeshIOError("unterminated facet in ASCII STL");
  return soup;
}

Soup parse_obj(const std::string& data) {
  std::istringstream in(data);
  std::string line;
  Soup soup;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(ls >> p[0] >> p[1] >> p[2])) throw MeshIOError("malformed v record at line " + std::to_string(line_no));
      soup.points.push_back(p);
    } else if (tag == "f") {
      std::vector<int> poly;
      std::string ref;
      while (ls >> ref) {
        const auto slash = ref.find('/');
        int idx = 0;
        try {
          idx = std::stoi(ref.substr(0, slash));
        } catch (const std::exception&) {
          throw MeshIOError("malformed f record at line " + std::to_string(line_no));
        }
        idx = idx < 0 ? static_cast<int>(soup.points.size()) + idx : idx - 1;
        if (idx < 0 || idx >= static_cast<int>(soup.points.size()))
          throw MeshIOError("face index out of range at line " + std::to_string(line_no));
        poly.push_back(idx);
      }
      if (poly.size() < 3) throw MeshIOError("face with fewer than 3 vertices at line " + std::to_string(line_no));
      for (size_t k = 1; k + 1 < poly.size(); ++k) soup.triangles.push_back({poly[0], poly[k], poly[k + 1]});
    }
    // vn, vt, g, o, s, usemtl, mtllib: ignored
  }
  return soup;
}

MeshFormat detect(const std::filesystem::path& path, const std::string& data) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".obj") return MeshFormat::Obj;
  if (data.size() >= 84) {
    const auto n = read_le<std::uint32_t>(data.data() + 80);
    if (data.size() == 84 + static_cast<size_t>(n) * 50) return MeshFormat::StlBinary;
  }
  if (data.rfind("solid", 0) == 0) return MeshFormat::StlAscii;
  if (ext == ".stl") return MeshFormat::StlBinary;
  throw MeshIOError("cannot determine mesh format of " + path.string());
}

}  // namespace

LoadedMesh weld(const Soup& soup, std::optional<double> weld_tolerance, LoadReport report) {
  report.input_vertex_count = static_cast<int>(soup.points.size());
  report.input_face_count = static_cast<int>(soup.triangles.size());

  double tol = 0.0;
  if (weld_tolerance) {
    if (*weld_tolerance < 0.0) throw MeshError("weld tolerance must be non-negative");
    tol = *weld_tolerance;
  } else if (!soup.points.empty()) {
    Eigen::Vector3d lo = soup.points[0], hi = soup.points[0];
    for (const auto& p : soup.points) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    tol = 1e-6 * (hi - lo).norm();
  }
  report.weld_tolerance = tol;

  std::vector<int> remap(soup.points.size());
  std::vector<Eigen::Vector3d> kept;
  kept.reserve(soup.points.size());
  std::unordered_map<std::array<std::int64_t, 3>, std::vector<int>, CellHash> grid;
  grid.reserve(soup.points.size());
  const double cell = tol > 0.0 ? tol : 1.0;
  auto cell_of = [&](const Eigen::Vector3d& p) {
    return std::array<std::int64_t, 3>{static_cast<std::int64_t>(std::floor(p[0] / cell)),
                                       static_cast<std::int64_t>(std::floor(p[1] / cell)),
                                       static_cast<std::int64_t>(std::floor(p[2] / cell))};
  };
  for (size_t i = 0; i < soup.points.size(); ++i) {
    const Eigen::Vector3d& p = soup.points[i];
    const auto c = cell_of(p);
    int found = -1;
    for (int dx = -1; dx <= 1 && found < 0; ++dx)
      for (int dy = -1; dy <= 1 && found < 0; ++dy)
        for (int dz = -1; dz <= 1 && found < 0; ++dz) {
          auto it = grid.find({c[0] + dx, c[1] + dy, c[2] + dz});
          if (it == grid.end()) continue;
          for (int k : it->second) {
            const bool hit = tol > 0.0 ? (kept[k] - p).norm() <= tol : kept[k] == p;
            if (hit) {
              found = k;
              break;
            }
          }
        }
    if (found < 0) {
      found = static_cast<int>(kept.size());
      kept.push_back(p);
      grid[c].push_back(found);
    } else {
      ++report.welded_vertex_count;
    }
    remap[i] = found;
  }

  std::vector<std::array<int, 3>> tris;
  tris.reserve(soup.triangles.size());
  for (const auto& t : soup.triangles) {
    const std::array<int, 3> m{remap[t[0]], remap[t[1]], remap[t[2]]};
    if (m[0] == m[1] || m[1] == m[2] || m[0] == m[2]) {
      ++report.dropped_face_count;
      continue;
    }
    tris.push_back(m);
  }
  if (tris.empty()) throw EmptyMeshError("mesh has no faces");

  Vertices V(static_cast<Eigen::Index>(kept.size()), 3);
  for (size_t i = 0; i < kept.size(); ++i) V.row(static_cast<Eigen::Index>(i)) = kept[i].transpose();
  Faces F(static_cast<Eigen::Index>(tris.size()), 3);
  for (size_t i = 0; i < tris.size(); ++i)
    F.row(static_cast<Eigen::Index>(i)) << tris[i][0], tris[i][1], tris[i][2];
  return {Mesh(std::move(V), std::move(F)), report};
}

LoadedMesh load_mesh(const std::filesystem::path& path, MeshFormat format, std::optional<double> weld_tolerance) {
  const std::string data = read_file(path);
  if (format == MeshFormat::Auto) format = detect(path, data);
  Soup soup;
  switch (format) {
    case MeshFormat::StlBinary: soup = parse_stl_binary(data); break;
    case MeshFormat::StlAscii: soup = parse_stl_ascii(data); break;
    case MeshFormat::Obj: soup = parse_obj(data); break;
    case MeshFormat::Auto: break;
  }
  LoadReport report;
  report.format = format;
  return weld(soup, weld_tolerance, report);
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path, MeshFormat format) {
  if (mesh.empty()) throw EmptyMeshError("refusing to save an empty mesh");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MeshIOError("cannot write " + path.string());
  if (format == MeshFormat::StlBinary) {
    char header[80] = {};
    std::strncpy(header, "slicekit binary STL", sizeof(header));
    out.write(header, 80);
    const auto n = static_cast<std::uint32_t>(mesh.face_count());
    out.write(reinterpret_cast<const char*>(&n), 4);
    for (int f = 0; f < mesh.face_count(); ++f) {
      const auto t = mesh.face(f);
      const Eigen::Vector3d a = mesh.vertex(t[0]), b = mesh.vertex(t[1]), c = mesh.vertex(t[2]);
      Eigen::Vector3d nrm = (b - a).cross(c - a);
      if (nrm.norm() > 0) nrm.normalize();
      float rec[12];
      for (int k = 0; k < 3; ++k) {
        rec[k] = static_cast<float>(nrm[k]);
        rec[3 + k] = static_cast<float>(a[k]);
        rec[6 + k] = static_cast<float>(b[k]);
        rec[9 + k] = static_cast<float>(c[k]);
      }
      out.write(reinterpret_cast<const char*>(rec), sizeof(rec));
      const std::uint16_t attr = 0;
      out.write(reinterpret_cast<const char*>(&attr), 2);
    }
  } else if (format == MeshFormat::Obj) {
    char buf[128];
    for (int v = 0; v < mesh.vertex_count(); ++v) {
      const auto p = mesh.vertex(v);
      std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", p[0], p[1], p[2]);
      out << buf;
    }
    for (int f = 0; f < mesh.face_count(); ++f) {
      const auto t = mesh.face(f);
      out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    }
  } else {
    throw MeshIOError("unsupported output format " + format_name(format));
  }
  if (!out) throw MeshIOError("write failed: " + path.string());
}

MeshFormat parse_format(const std::string& name) {
  if (name == "auto") return MeshFormat::Auto;
  if (name == "stl-binary" || name == "stl") return MeshFormat::StlBinary;
  if (name == "stl-ascii") return MeshFormat::StlAscii;
  if (name == "obj") return MeshFormat::Obj;
  throw MeshIOError("unknown mesh format '" + name + "'");
}

std::string format_name(MeshFormat format) {
  switch (format) {
    case MeshFormat::Auto: return "auto";
    case MeshFormat::StlBinary: return "stl-binary";
    case MeshFormat::StlAscii: return "stl-ascii";
    case MeshFormat::Obj: return "obj";
  }
  return "unknown";
}

}  // namespace slicekit
