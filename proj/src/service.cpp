#include "slicekit/service.hpp"

#include "slicekit/io.hpp"
#include "slicekit/serialize.hpp"
#include "slicekit/slice.hpp"

#include <httplib.h>

#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

namespace slicekit {

namespace {

std::string escape_field(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\t') out += "\\t";
    else if (c == '\n') out += "\\n";
    else if (c == '\\') out += "\\\\";
    else out += c;
  }
  return out;
}

std::string unescape_field(const std::string& s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      const char n = s[++i];
      out += n == 't' ? '\t' : n == 'n' ? '\n' : n;
    } else {
      out += s[i];
    }
  }
  return out;
}

Response error(int status, const std::string& reason) { return {status, "application/json", json{{"error", reason}}.dump()}; }

void append(std::string& out, const void* p, size_t n) { out.append(static_cast<const char*>(p), n); }

}  // namespace

std::vector<Annotation> read_annotations(const std::filesystem::path& path) {
  std::vector<Annotation> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    if (fields.size() < 5 || fields.size() > 6)
      throw MeshIOError(path.string() + ":" + std::to_string(line_no) + ": expected 6 tab-separated fields");
    Annotation a;
    a.id = fields[0];
    try {
      a.anchor = {std::stod(fields[1]), std::stod(fields[2]), std::stod(fields[3])};
    } catch (const std::exception&) {
      throw MeshIOError(path.string() + ":" + std::to_string(line_no) + ": bad anchor coordinate");
    }
    a.title = unescape_field(fields[4]);
    if (fields.size() == 6) a.text = unescape_field(fields[5]);
    out.push_back(std::move(a));
  }
  return out;
}

void write_annotations(const std::vector<Annotation>& annotations, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw MeshIOError("cannot write " + path.string());
  out << "# id\tx\ty\tz\ttitle\ttext\n";
  char buf[96];
  for (const auto& a : annotations) {
    std::snprintf(buf, sizeof(buf), "%.17g\t%.17g\t%.17g", a.anchor.x(), a.anchor.y(), a.anchor.z());
    out << escape_field(a.id) << '\t' << buf << '\t' << escape_field(a.title) << '\t' << escape_field(a.text) << '\n';
  }
}

SliceService::SliceService(std::filesystem::path mesh_dir, std::optional<double> weld_tolerance, double scale)
    : dir_(std::move(mesh_dir)) {
  if (!std::filesystem::is_directory(dir_)) throw MeshIOError("not a directory: " + dir_.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".stl" || ext == ".obj") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    try {
      Mesh m = load_mesh(path, MeshFormat::Auto, weld_tolerance).mesh;
      if (scale != 1.0) m = Mesh(m.vertices() * scale, m.faces());
      models_.emplace(path.stem().string(), std::make_shared<const Mesh>(std::move(m)));
    } catch (const MeshError& e) {
      std::cerr << "skipping " << path << ": " << e.what() << '\n';
    }
  }
  if (models_.empty()) throw MeshError("no loadable mesh in " + dir_.string());
}

std::vector<std::string> SliceService::model_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, m] : models_) ids.push_back(id);
  return ids;
}

std::shared_ptr<const Mesh> SliceService::model(const std::string& id) const {
  auto it = models_.find(id);
  return it == models_.end() ? nullptr : it->second;
}

Response SliceService::list_models() const {
  json out = json::array();
  for (const auto& [id, m] : models_)
    out.push_back({{"id", id}, {"vertex_count", m->vertex_count()}, {"face_count", m->face_count()}});
  return {200, "application/json", out.dump()};
}

Response SliceService::geometry(const std::string& id, const std::string& format) const {
  const auto m = model(id);
  if (!m) return error(404, "unknown model '" + id + "'");
  if (format == "json") {
    std::vector<double> pos(m->vertices().data(), m->vertices().data() + m->vertices().size());
    std::vector<int> idx(m->faces().data(), m->faces().data() + m->faces().size());
    return {200, "application/json", json{{"id", id}, {"vertices", pos}, {"faces", idx}}.dump()};
  }
  if (format != "binary" && !format.empty()) return error(400, "format must be 'binary' or 'json'");
  std::string body;
  body.reserve(8 + m->vertices().size() * 4 + m->faces().size() * 4);
  const auto nv = static_cast<std::uint32_t>(m->vertex_count());
  const auto nf = static_cast<std::uint32_t>(m->face_count());
  append(body, &nv, 4);
  append(body, &nf, 4);
  for (Eigen::Index i = 0; i < m->vertices().size(); ++i) {
    const float x = static_cast<float>(m->vertices().data()[i]);
    append(body, &x, 4);
  }
  for (Eigen::Index i = 0; i < m->faces().size(); ++i) {
    const auto x = static_cast<std::uint32_t>(m->faces().data()[i]);
    append(body, &x, 4);
  }
  return {200, "application/octet-stream", std::move(body)};
}

Response SliceService::slice(const std::string& request_body) const {
  json req;
  try {
    req = json::parse(request_body);
  } catch (const json::parse_error& e) {
    return error(400, std::string("malformed JSON: ") + e.what());
  }
  if (!req.is_object() || !req.contains("model") || !req["model"].is_string())
    return error(400, "request needs a string 'model'");
  if (!req.contains("normal") || !req["normal"].is_array() || req["normal"].size() != 3)
    return error(400, "request needs 'normal' as an array of 3 numbers");
  if (!req.contains("offset") || !req["offset"].is_number()) return error(400, "request needs a numeric 'offset'");
  Eigen::Vector3d n;
  for (int i = 0; i < 3; ++i) {
    if (!req["normal"][i].is_number()) return error(400, "normal components must be numbers");
    n[i] = req["normal"][i].get<double>();
  }
  const auto m = model(req["model"].get<std::string>());
  if (!m) return error(404, "unknown model '" + req["model"].get<std::string>() + "'");
  PlaneSpec plane;
  try {
    plane = PlaneSpec::normalized(n, req["offset"].get<double>());
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  }
  return {200, "application/json", to_json(slicekit::slice(*m, plane)).dump()};
}

Response SliceService::annotations(const std::string& id) const {
  if (!model(id)) return error(404, "unknown model '" + id + "'");
  json out = json::array();
  try {
    for (const auto& a : read_annotations(dir_ / (id + ".annotations.tsv")))
      out.push_back({{"id", a.id}, {"anchor", {a.anchor.x(), a.anchor.y(), a.anchor.z()}}, {"title", a.title}, {"text", a.text}});
  } catch (const MeshIOError& e) {
    return error(500, e.what());
  }
  return {200, "application/json", out.dump()};
}

void SliceService::bind(httplib::Server& server) const {
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(r.body, r.content_type);
  };
  server.Get("/api/models", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, list_models()); });
  server.Get(R"(/api/models/([^/]+)/geometry)", [this, reply](const httplib::Request& req, httplib::Response& res) {
    const std::string format = req.has_param("format") ? req.get_param_value("format") : "binary";
    reply(res, geometry(req.matches[1], format));
  });
  server.Get(R"(/api/models/([^/]+)/annotations)", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, annotations(req.matches[1]));
  });
  server.Post("/api/slice", [this, reply](const httplib::Request& req, httplib::Response& res) { reply(res, slice(req.body)); });
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

void SliceService::serve(const std::string& host, int port) const {
  httplib::Server server;
  bind(server);
  if (!server.listen(host, port)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace slicekit
