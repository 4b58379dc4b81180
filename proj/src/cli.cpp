#include "slicekit/cli.hpp"

#include "slicekit/analysis.hpp"
#include "slicekit/bench.hpp"
#include "slicekit/dataset.hpp"
#include "slicekit/io.hpp"
#include "slicekit/optimize.hpp"
#include "slicekit/serialize.hpp"
#include "slicekit/service.hpp"
#include "slicekit/slice.hpp"
#include "slicekit/version.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace slicekit {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double to_double(const std::string& s) {
  size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

Eigen::Vector3d to_vec3(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 3) throw UsageError("expected three comma-separated numbers, got '" + s + "'");
  return {to_double(parts[0]), to_double(parts[1]), to_double(parts[2])};
}

double units_scale(const std::string& units) {
  if (units == "mm") return 1.0;
  if (units == "cm") return 10.0;
  if (units == "m") return 1000.0;
  const double v = to_double(units);
  if (!(v > 0)) throw UsageError("--units scale must be positive");
  return v;
}

struct Common {
  std::string format = "auto";
  std::optional<double> weld;
  std::string units = "mm";
};

Mesh load(const std::string& path, const Common& c) {
  Mesh m = load_mesh(path, parse_format(c.format), c.weld).mesh;
  const double s = units_scale(c.units);
  if (s != 1.0) m = Mesh(m.vertices() * s, m.faces());
  return m;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text << '\n';
}

MeshFormat output_format(const std::string& path, const std::string& requested) {
  if (requested != "auto") return parse_format(requested);
  const auto ext = std::filesystem::path(path).extension().string();
  return ext == ".obj" || ext == ".OBJ" ? MeshFormat::Obj : MeshFormat::StlBinary;
}

std::string model_id_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"slicekit: repair, slice, measure and decimate triangle meshes"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Common common;
  app.add_option("--units", common.units, "model unit: mm, cm, m, or a scale factor to millimetres")
      ->capture_default_str();
  auto add_input = [&](CLI::App* sub, std::string& path) {
    sub->add_option("mesh", path, "input mesh (STL or OBJ)")->required();
    sub->add_option("--format", common.format, "auto, stl-binary, stl-ascii, obj")->capture_default_str();
    sub->add_option("--weld", common.weld, "weld tolerance in model units (default 1e-6 of bbox diagonal)");
  };

  std::function<void()> action;

  // info
  std::string info_path;
  bool info_json = false;
  auto* info = app.add_subcommand("info", "print topology summary");
  add_input(info, info_path);
  info->add_flag("--json", info_json, "print a JSON record");
  info->callback([&] {
    action = [&] {
      const LoadedMesh lm = load_mesh(info_path, parse_format(common.format), common.weld);
      const TopologySummary s = topology_summary(lm.mesh);
      if (info_json) {
        out << json{{"topology", to_json(s)}, {"load", to_json(lm.report)}}.dump(2) << '\n';
      } else {
        out << "V=" << s.vertex_count << " E=" << s.edge_count << " F=" << s.face_count
            << " χ=" << s.euler_characteristic << " watertight=" << (s.is_watertight ? "true" : "false")
            << " components=" << s.connected_component_count << " boundary_edges=" << s.boundary_edge_count << '\n';
        out << "welded=" << lm.report.welded_vertex_count << " dropped_faces=" << lm.report.dropped_face_count << '\n';
      }
    };
  });

  // analyze / repair share thresholds
  AnalyzeParams ap;
  auto add_thresholds = [&](CLI::App* sub) {
    sub->add_option("--eps-gaussian", ap.eps_gaussian, "flat threshold on |gaussian curvature|");
    sub->add_option("--eps-mean", ap.eps_mean, "flat threshold on |mean curvature|");
    sub->add_option("--component-threshold", ap.component_size_threshold, "isolated if fewer faces than this");
    sub->add_option("--aspect-ratio", ap.aspect_ratio_threshold, "elongated-face threshold")->capture_default_str();
  };
  std::string an_path, an_out;
  auto* an = app.add_subcommand("analyze", "report error, boundary, flat vertices and isolated components");
  add_input(an, an_path);
  add_thresholds(an);
  an->add_option("-o,--out", an_out, "write the JSON report here instead of stdout");
  an->callback([&] {
    action = [&] { write_text(an_out, to_json(analyze(load(an_path, common), ap)).dump(2), out); };
  });

  std::string rp_path, rp_out, rp_components = "all", rp_out_format = "auto";
  bool rp_boundary = false;
  auto* rp = app.add_subcommand("repair", "remove unreferenced vertices and isolated components");
  add_input(rp, rp_path);
  add_thresholds(rp);
  rp->add_option("-o,--out", rp_out, "output mesh")->required();
  rp->add_option("--out-format", rp_out_format, "stl-binary or obj (default from extension)");
  rp->add_option("--components", rp_components, "'all', 'none', or comma-separated isolated component indices")
      ->capture_default_str();
  rp->add_flag("--remove-boundary", rp_boundary, "also remove faces touching boundary vertices");
  rp->callback([&] {
    action = [&] {
      const Mesh m = load(rp_path, common);
      const RiskReport report = analyze(m, ap);
      RemovalOptions opts;
      opts.remove_boundary = rp_boundary;
      if (rp_components == "all") {
        for (size_t i = 0; i < report.isolated_components.size(); ++i) opts.component_indices.push_back(static_cast<int>(i));
      } else if (rp_components != "none") {
        for (const auto& s : split(rp_components, ',')) opts.component_indices.push_back(static_cast<int>(to_double(s)));
      }
      const Mesh fixed = remove_risky(m, report, opts);
      if (fixed.empty()) throw MeshError("repair removed every face");
      save_mesh(fixed, rp_out, output_format(rp_out, rp_out_format));
      const auto s = topology_summary(fixed);
      out << "V=" << s.vertex_count << " F=" << s.face_count << " χ=" << s.euler_characteristic
          << " removed_components=" << opts.component_indices.size() << '\n';
    };
  });

  // slice
  std::string sl_path, sl_axis, sl_normal, sl_json, sl_raster, sl_subdivide;
  double sl_offset = 0.0;
  int sl_resolution = 256;
  auto* sl = app.add_subcommand("slice", "cut with a plane and report loops and diameters");
  add_input(sl, sl_path);
  auto* axis_opt = sl->add_option("--axis", sl_axis, "x, y or z");
  auto* normal_opt = sl->add_option("--normal", sl_normal, "plane normal nx,ny,nz (normalized)");
  axis_opt->excludes(normal_opt);
  sl->add_option("--offset", sl_offset, "plane offset along the unit normal")->required();
  sl->add_option("--json", sl_json, "write the slice record to this file");
  sl->add_option("--raster", sl_raster, "write a PGM mask of the section");
  sl->add_option("--resolution", sl_resolution, "raster size in pixels")->capture_default_str();
  sl->add_option("--subdivide", sl_subdivide, "write the mesh with crossed faces split");
  sl->callback([&] {
    action = [&] {
      const Mesh m = load(sl_path, common);
      SliceResult r;
      PlaneSpec plane;
      if (!sl_normal.empty()) {
        try {
          plane = PlaneSpec::normalized(to_vec3(sl_normal), sl_offset);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        r = slice(m, plane);
      } else {
        const Axis axis = sl_axis.empty() ? Axis::Y : parse_axis(sl_axis);
        r = slice_axial(m, axis, sl_offset);
        plane = r.plane;
      }
      if (!sl_json.empty()) write_text(sl_json, to_json(r).dump(2), out);
      if (!sl_raster.empty()) write_pgm(rasterize_slice(r, sl_resolution), sl_raster);
      if (!sl_subdivide.empty()) save_mesh(subdivide_crossed_faces(m, plane), sl_subdivide, output_format(sl_subdivide, "auto"));
      out << "segments=" << r.segments.size() << " loops=" << r.loops.size() << " open_chains=" << r.open_chains.size()
          << " crossed_faces=" << r.crossed_face_count << '\n';
      for (size_t i = 0; i < r.metrics.size(); ++i) {
        const auto& mm = r.metrics[i];
        out << "loop " << i << ": area=" << mm.area << " perimeter=" << mm.perimeter
            << " equivalent_diameter=" << mm.equivalent_diameter << " min_feret=" << mm.min_feret
            << " max_feret=" << mm.max_feret << (mm.self_intersecting ? " self_intersecting" : "") << '\n';
      }
    };
  });

  // optimize
  std::string op_path, op_out, op_kind = "taubin", op_out_format = "auto";
  OptimizeParams op;
  bool op_free_boundary = false;
  auto* opt = app.add_subcommand("optimize", "decimate and smooth for display");
  add_input(opt, op_path);
  opt->add_option("-o,--out", op_out, "output mesh")->required();
  opt->add_option("--out-format", op_out_format, "stl-binary or obj (default from extension)");
  opt->add_option("--fraction", op.target_vertex_fraction, "target vertex fraction in (0, 1]")->capture_default_str();
  opt->add_option("--iterations", op.smoothing_iterations, "smoothing iterations")->capture_default_str();
  opt->add_option("--smoothing", op_kind, "taubin or laplacian")->capture_default_str();
  opt->add_option("--lambda", op.taubin_lambda, "smoothing step")->capture_default_str();
  opt->add_option("--mu", op.taubin_mu, "taubin inflation step")->capture_default_str();
  opt->add_flag("--free-boundary", op_free_boundary, "let boundary vertices move and collapse");
  opt->callback([&] {
    action = [&] {
      if (op_kind == "taubin") op.smoothing_kind = SmoothingKind::Taubin;
      else if (op_kind == "laplacian") op.smoothing_kind = SmoothingKind::Laplacian;
      else throw UsageError("--smoothing must be taubin or laplacian");
      op.preserve_boundary = !op_free_boundary;
      try {
        op.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const Mesh m = load(op_path, common);
      const Mesh r = optimize(m, op);
      save_mesh(r, op_out, output_format(op_out, op_out_format));
      out << "V=" << m.vertex_count() << "->" << r.vertex_count() << " F=" << m.face_count() << "->" << r.face_count()
          << '\n';
    };
  });

  // dataset
  std::string ds_path, ds_out, ds_axes = "y", ds_offsets, ds_rotations, ds_label, ds_model;
  int ds_resolution = 256, ds_random = 0;
  std::uint64_t ds_seed = 0;
  auto* ds = app.add_subcommand("dataset", "sweep planes and rotations into labelled slice images");
  add_input(ds, ds_path);
  ds->add_option("--out", ds_out, "output directory")->required();
  ds->add_option("--axes", ds_axes, "comma-separated axes (x,y,z) or ';'-separated normals")->capture_default_str();
  ds->add_option("--offsets", ds_offsets, "start:stop:count, or comma-separated offsets")->required();
  ds->add_option("--rotations", ds_rotations, "';'-separated Euler triples in degrees (default identity)");
  ds->add_option("--resolution", ds_resolution, "image size")->capture_default_str();
  ds->add_option("--label", ds_label, "label attached to every record");
  ds->add_option("--seed", ds_seed, "seed for random directions")->capture_default_str();
  ds->add_option("--random", ds_random, "number of random plane directions")->capture_default_str();
  ds->add_option("--model-id", ds_model, "model id (default: file stem)");
  ds->callback([&] {
    action = [&] {
      SweepSpec spec;
      spec.normals.clear();
      if (ds_axes.find_first_of("0123456789;") != std::string::npos) {
        for (const auto& n : split(ds_axes, ';')) spec.normals.push_back(to_vec3(n).normalized());
      } else {
        for (const auto& a : split(ds_axes, ',')) spec.normals.push_back(axis_vector(parse_axis(a)));
      }
      const auto range = split(ds_offsets, ':');
      if (range.size() == 3) {
        spec.offsets = {SweepSpec::linspace(to_double(range[0]), to_double(range[1]), static_cast<int>(to_double(range[2])))};
      } else {
        std::vector<double> list;
        for (const auto& s : split(ds_offsets, ',')) list.push_back(to_double(s));
        spec.offsets = {list};
      }
      if (!ds_rotations.empty()) {
        spec.rotations.clear();
        for (const auto& r : split(ds_rotations, ';')) {
          const auto e = to_vec3(r);
          spec.rotations.push_back(rotation_from_euler_degrees(e.x(), e.y(), e.z()));
        }
      }
      spec.resolution = ds_resolution;
      spec.label = ds_label;
      spec.seed = ds_seed;
      spec.random_direction_count = ds_random;
      try {
        spec.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto manifest = generate(load(ds_path, common), spec, ds_out, ds_model.empty() ? model_id_of(ds_path) : ds_model);
      out << "images=" << manifest.records.size() << " manifest=" << (std::filesystem::path(ds_out) / "manifest.tsv").string()
          << '\n';
    };
  });

  // bench
  std::string bn_path, bn_axis = "y", bn_json;
  double bn_offset = 0.0;
  std::optional<double> bn_fraction;
  int bn_runs = 5;
  auto* bn = app.add_subcommand("bench", "time slicing of the original and an optimized variant");
  add_input(bn, bn_path);
  bn->add_option("--axis", bn_axis, "x, y or z")->capture_default_str();
  bn->add_option("--offset", bn_offset, "plane coordinate")->required();
  bn->add_option("--optimized", bn_fraction, "also time a decimated variant at this vertex fraction");
  bn->add_option("--runs", bn_runs, "timed runs per variant")->capture_default_str();
  bn->add_option("--json", bn_json, "write the records as a JSON array");
  bn->callback([&] {
    action = [&] {
      const Mesh m = load(bn_path, common);
      const Axis axis = parse_axis(bn_axis);
      const std::string id = model_id_of(bn_path);
      std::vector<BenchRecord> recs =
          bn_fraction ? bench_original_vs_optimized(m, id, axis, bn_offset, *bn_fraction, bn_runs)
                      : std::vector<BenchRecord>{bench_slice(m, id, "original", axis, bn_offset, bn_runs)};
      json arr = json::array();
      for (const auto& r : recs) {
        arr.push_back(to_json(r));
        out << to_json(r).dump() << '\n';
      }
      if (recs.size() == 2) out << "ratio=" << recs[1].wall_time / recs[0].wall_time << '\n';
      if (!bn_json.empty()) write_text(bn_json, arr.dump(2), out);
    };
  });

  // serve
  std::string sv_dir, sv_host = "127.0.0.1";
  int sv_port = 8080;
  auto* sv = app.add_subcommand("serve", "HTTP slice service for the viewer");
  sv->add_option("mesh_dir", sv_dir, "directory of STL/OBJ models")->required();
  sv->add_option("--port", sv_port, "listen port")->capture_default_str();
  sv->add_option("--host", sv_host, "listen address")->capture_default_str();
  sv->add_option("--weld", common.weld, "weld tolerance in model units");
  sv->callback([&] {
    action = [&] {
      const SliceService service(sv_dir, common.weld, units_scale(common.units));
      err << "serving " << service.model_ids().size() << " model(s) on http://" << sv_host << ':' << sv_port << '\n';
      service.serve(sv_host, sv_port);
    };
  });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    units_scale(common.units);
    if (action) action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace slicekit
