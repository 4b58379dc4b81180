#include "slicekit/dataset.hpp"

#include "slicekit/version.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace slicekit {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

std::string indexed(const std::string& prefix, size_t i, int width) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%0*zu", width, i);
  return prefix + buf;
}

}  // namespace

void SweepSpec::validate() const {
  if (resolution < 16) throw std::invalid_argument("resolution must be at least 16");
  if (random_direction_count < 0) throw std::invalid_argument("random_direction_count must be non-negative");
  if (rotations.empty()) throw std::invalid_argument("at least one rotation is required");
  for (const auto& r : rotations)
    if (!is_orthonormal(r)) throw std::invalid_argument("sweep rotation is not orthonormal");
  for (const auto& n : normals)
    if (std::abs(n.norm() - 1.0) > 1e-9) throw std::invalid_argument("sweep normals must be unit vectors");
  if (offsets.size() != 1 && offsets.size() != normals.size())
    throw std::invalid_argument("give one offset list, or one per normal");
  for (const auto& list : offsets)
    if (list.empty()) throw std::invalid_argument("every offset list needs at least one offset");
  if (planned_count() == 0) throw std::invalid_argument("sweep plans no planes");
}

const std::vector<double>& SweepSpec::offsets_for(size_t normal_index) const {
  return offsets.size() == 1 ? offsets[0] : offsets[normal_index];
}

size_t SweepSpec::planned_count() const {
  size_t per_rotation = 0;
  if (!offsets.empty())
    for (size_t i = 0; i < normals.size(); ++i) per_rotation += offsets_for(i).size();
  return rotations.size() * per_rotation + static_cast<size_t>(random_direction_count);
}

std::vector<double> SweepSpec::linspace(double start, double stop, int count) {
  if (count < 1) throw std::invalid_argument("offset count must be at least 1");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  return out;
}

std::string DatasetManifest::to_tsv() const {
  std::ostringstream out;
  out << "#model_id=" << model_id << "\tlabel=" << label << "\ttool_version=" << tool_version << "\tseed=" << seed
      << '\n';
  for (const auto& r : records) {
    out << r.filename << '\t' << num(r.normal.x()) << ',' << num(r.normal.y()) << ',' << num(r.normal.z()) << '\t'
        << num(r.offset) << '\t';
    for (int i = 0; i < 9; ++i) out << (i ? "," : "") << num(r.rotation(i / 3, i % 3));
    out << '\t' << r.loop_count << '\t' << "area=" << num(r.area) << ";perimeter=" << num(r.perimeter)
        << ";equivalent_diameter=" << num(r.equivalent_diameter) << ";min_feret=" << num(r.min_feret)
        << ";max_feret=" << num(r.max_feret) << '\t' << (r.empty ? "empty" : "ok") << '\n';
  }
  return out.str();
}

DatasetManifest generate(const Mesh& mesh, const SweepSpec& spec, const std::filesystem::path& out_dir,
                         const std::string& model_id) {
  spec.validate();
  if (mesh.empty()) throw MeshError("cannot build a dataset from an empty mesh");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    throw std::runtime_error("cannot create output directory " + out_dir.string());

  DatasetManifest manifest;
  manifest.model_id = model_id;
  manifest.label = spec.label;
  manifest.tool_version = kVersion;
  manifest.seed = spec.seed;

  const Eigen::Vector3d center = 0.5 * (mesh.bbox_min() + mesh.bbox_max());
  const double extent = 1.05 * mesh.bbox_diagonal();

  auto emit = [&](const Mesh& m, const Eigen::Matrix3d& rotation, const PlaneSpec& plane, const std::string& name) {
    const SliceResult result = slice(m, plane);
    // One window per plane orientation keeps pixel scale fixed across a sweep.
    Window window;
    window.size = extent;
    window.min = PlaneFrame::of(plane).to_plane(center) - Eigen::Vector2d::Constant(extent / 2);
    const Image img = rasterize_slice(result, spec.resolution, window);
    DatasetRecord rec;
    rec.filename = name + ".pgm";
    write_pgm(img, out_dir / rec.filename);
    rec.normal = plane.normal;
    rec.offset = plane.offset;
    rec.rotation = rotation;
    rec.loop_count = static_cast<int>(result.loops.size());
    rec.empty = result.loops.empty();
    int largest = -1;
    for (size_t i = 0; i < result.metrics.size(); ++i) {
      rec.area += result.metrics[i].area;
      rec.perimeter += result.metrics[i].perimeter;
      if (largest < 0 || result.metrics[i].area > result.metrics[largest].area) largest = static_cast<int>(i);
    }
    if (largest >= 0) {
      rec.equivalent_diameter = result.metrics[largest].equivalent_diameter;
      rec.min_feret = result.metrics[largest].min_feret;
      rec.max_feret = result.metrics[largest].max_feret;
    }
    manifest.records.push_back(std::move(rec));
  };

  std::vector<Mesh> rotated;
  rotated.reserve(spec.rotations.size());
  for (const auto& r : spec.rotations) rotated.push_back(transform_mesh(mesh, r, center - r * center));

  for (size_t a = 0; a < spec.normals.size(); ++a)
    for (size_t r = 0; r < spec.rotations.size(); ++r) {
      const auto& offs = spec.offsets_for(a);
      for (size_t o = 0; o < offs.size(); ++o) {
        const std::string name =
            model_id + "_" + indexed("a", a, 2) + "_" + indexed("r", r, 2) + "_" + indexed("o", o, 3);
        emit(rotated[r], spec.rotations[r], PlaneSpec(spec.normals[a], offs[o]), name);
      }
    }

  std::mt19937_64 rng(spec.seed);
  for (int k = 0; k < spec.random_direction_count; ++k) {
    // Uniform on the sphere from two raw 53-bit uniforms.
    const double u1 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double z = 2.0 * u1 - 1.0, phi = 2.0 * std::numbers::pi * u2;
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Eigen::Vector3d n = Eigen::Vector3d(s * std::cos(phi), s * std::sin(phi), z).normalized();
    emit(mesh, Eigen::Matrix3d::Identity(), PlaneSpec(n, n.dot(center)), model_id + "_" + indexed("rand", k, 3));
  }

  std::ofstream out(out_dir / "manifest.tsv", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest in " + out_dir.string());
  out << manifest.to_tsv();
  return manifest;
}

}  // namespace slicekit
