// fracfem command line: mesh generation/inspection, fractional
// stiffness assembly, convergence studies, path tracing, and
// accumulation benchmarks. Talks to the library exclusively through
// the C API in fracfem.h.
//
// Exit codes: 0 success, 2 argument/validation error, 1 runtime
// failure. Diagnostics go to stderr, data to files or stdout.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <sys/stat.h>
#include <vector>

#include "fracfem.h"

namespace {

struct ConfigDeleter {
  void operator()(ff_config* c) const { ff_config_free(c); }
};
struct MeshDeleter {
  void operator()(ff_mesh* m) const { ff_mesh_free(m); }
};
struct SystemDeleter {
  void operator()(ff_system* s) const { ff_system_free(s); }
};
struct PathDeleter {
  void operator()(ff_path* p) const { ff_path_free(p); }
};
struct StudyDeleter {
  void operator()(ff_study* s) const { ff_study_free(s); }
};
struct BenchDeleter {
  void operator()(ff_bench* b) const { ff_bench_free(b); }
};

using ConfigPtr = std::unique_ptr<ff_config, ConfigDeleter>;
using MeshPtr = std::unique_ptr<ff_mesh, MeshDeleter>;
using SystemPtr = std::unique_ptr<ff_system, SystemDeleter>;

[[noreturn]] void die(ff_status status) {
  std::fprintf(stderr, "fracfem: %s: %s\n", ff_status_name(status), ff_last_error());
  // Argument-level problems exit 2, runtime failures 1.
  std::exit(status == FF_ERR_INVALID_ARGUMENT || status == FF_ERR_PARSE ? 2 : 1);
}

void check(ff_status status) {
  if (status != FF_OK) die(status);
}

// Global flags shared by all subcommands, applied on top of --config.
struct GlobalFlags {
  std::string config_path;
  std::string out_dir;
  int threads = -1;
  long long seed = -1;
  int quadrature_degree = -1;
  double solver_tol = -1;
  std::vector<double> beta;
};

void add_global_flags(CLI::App* cmd, GlobalFlags* flags) {
  cmd->add_option("--config", flags->config_path, "configuration file (key = value)");
  cmd->add_option("--out,-o", flags->out_dir, "output directory");
  cmd->add_option("--threads", flags->threads, "worker threads (1 = reproducible)");
  cmd->add_option("--seed", flags->seed, "seed echoed into the effective config");
  cmd->add_option("--quadrature-degree", flags->quadrature_degree,
                  "simplex quadrature exactness degree (1..4)");
  cmd->add_option("--solver-tol", flags->solver_tol, "relative residual tolerance");
  cmd->add_option("--beta", flags->beta, "fractional orders (1 to 3 values in (0,1))")
      ->expected(1, 3);
}

ConfigPtr build_config(const GlobalFlags& flags) {
  ConfigPtr cfg(ff_config_create());
  if (!flags.config_path.empty()) check(ff_config_load(cfg.get(), flags.config_path.c_str()));
  auto set = [&](const char* key, const std::string& value) {
    check(ff_config_set(cfg.get(), key, value.c_str()));
  };
  if (!flags.out_dir.empty()) set("output_dir", flags.out_dir);
  if (flags.threads >= 0) set("threads", std::to_string(flags.threads));
  if (flags.seed >= 0) set("seed", std::to_string(flags.seed));
  if (flags.quadrature_degree > 0)
    set("quadrature_degree", std::to_string(flags.quadrature_degree));
  if (flags.solver_tol > 0) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", flags.solver_tol);
    set("solver_tol", buf);
  }
  if (!flags.beta.empty()) {
    std::string joined;
    for (double b : flags.beta) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", b);
      joined += (joined.empty() ? "" : " ") + std::string(buf);
    }
    set("beta", joined);
  }
  return cfg;
}

std::string strip_slash(std::string dir) {
  while (dir.size() > 1 && dir.back() == '/') dir.pop_back();
  return dir;
}

std::string out_dir_of(ff_config* cfg) {
  const char* dir = ff_config_get(cfg, "output_dir");
  return strip_slash(dir && *dir ? dir : "out");
}

void ensure_dir(const std::string& path) {
  if (mkdir(path.c_str(), 0755) != 0 && errno != EEXIST) {
    std::fprintf(stderr, "fracfem: cannot create directory %s\n", path.c_str());
    std::exit(1);
  }
}

void echo_effective_config(ff_config* cfg, const std::string& dir) {
  ensure_dir(dir);
  check(ff_config_save(cfg, (dir + "/effective_config.cfg").c_str()));
}

MeshPtr mesh_from_config(ff_config* cfg, int subdivisions) {
  const std::string problem = ff_config_get(cfg, "problem");
  const int dim = std::atoi(ff_config_get(cfg, "dim"));
  ff_mesh* mesh = nullptr;
  if (problem == "custom") {
    const char* node = ff_config_get(cfg, "node_path");
    const char* ele = ff_config_get(cfg, "ele_path");
    if (!node || !*node || !ele || !*ele) {
      std::fprintf(stderr, "fracfem: custom problems need node_path and ele_path\n");
      std::exit(2);
    }
    check(ff_mesh_load(node, ele, &mesh));
  } else if (problem == "ball-paper") {
    const double radius = std::atof(ff_config_get(cfg, "radius"));
    check(ff_mesh_ball(dim, subdivisions, radius, &mesh));
  } else {
    check(ff_mesh_cube(dim, subdivisions, &mesh));
  }
  return MeshPtr(mesh);
}

int first_level(ff_config* cfg) {
  std::string levels = ff_config_get(cfg, "levels");
  return std::atoi(levels.c_str());
}

void print_mesh_summary(ff_mesh* mesh) {
  std::printf("dimension:         %d\n", ff_mesh_dim(mesh));
  std::printf("vertices:          %lld\n", ff_mesh_num_vertices(mesh));
  std::printf("simplices:         %lld\n", ff_mesh_num_simplices(mesh));
  std::printf("boundary vertices: %lld\n", ff_mesh_num_boundary_vertices(mesh));
  std::printf("max diameter h:    %.9g\n", ff_mesh_max_diameter(mesh));
  std::printf("min volume:        %.9g\n", ff_mesh_min_volume(mesh));
  std::printf("total volume:      %.9g\n", ff_mesh_total_volume(mesh));
}

int cmd_mesh(const GlobalFlags& flags, bool cube, bool ball, int n, int dim,
             double radius, const std::vector<std::string>& info) {
  if (!info.empty()) {
    if (info.size() != 2) {
      std::fprintf(stderr, "fracfem: --info needs <file.node> <file.ele>\n");
      return 2;
    }
    ff_mesh* mesh = nullptr;
    check(ff_mesh_load(info[0].c_str(), info[1].c_str(), &mesh));
    MeshPtr holder(mesh);
    print_mesh_summary(mesh);
    return 0;
  }
  if (cube == ball) {
    std::fprintf(stderr, "fracfem: pick exactly one of --cube, --ball or --info\n");
    return 2;
  }
  ff_mesh* mesh = nullptr;
  const char* stem = cube ? "cube" : "ball";
  if (cube)
    check(ff_mesh_cube(dim, n, &mesh));
  else
    check(ff_mesh_ball(dim, n, radius, &mesh));
  MeshPtr holder(mesh);

  const std::string dir = strip_slash(flags.out_dir.empty() ? "out" : flags.out_dir);
  ensure_dir(dir);
  const std::string node = dir + "/" + stem + ".node";
  const std::string ele = dir + "/" + stem + ".ele";
  check(ff_mesh_save(mesh, node.c_str(), ele.c_str()));
  print_mesh_summary(mesh);
  std::fprintf(stderr, "wrote %s and %s\n", node.c_str(), ele.c_str());
  return 0;
}

int cmd_assemble(const GlobalFlags& flags, int level_override,
                 const std::string& preset) {
  ConfigPtr cfg = build_config(flags);
  if (!preset.empty()) check(ff_config_set(cfg.get(), "problem", preset.c_str()));
  const std::string dir = out_dir_of(cfg.get());
  echo_effective_config(cfg.get(), dir);

  const int n = level_override > 0 ? level_override : first_level(cfg.get());
  MeshPtr mesh = mesh_from_config(cfg.get(), n);

  ff_system* system = nullptr;
  check(ff_assemble(mesh.get(), cfg.get(), &system));
  SystemPtr holder(system);

  ff_system_stats stats{};
  check(ff_system_get_stats(system, &stats));
  check(ff_system_write_matrix(system, (dir + "/matrix.mtx").c_str()));
  check(ff_system_write_pattern(system, (dir + "/pattern.mtx").c_str()));

  std::printf("free dofs:        %lld\n", stats.num_free);
  std::printf("nnz:              %lld\n", stats.nnz);
  std::printf("density:          %.6g\n", stats.density);
  std::printf("symmetry defect:  %.6g\n", stats.symmetry_defect);
  std::printf("assembly seconds: %.3f\n", stats.assembly_seconds);
  std::fprintf(stderr, "wrote %s/matrix.mtx and %s/pattern.mtx\n", dir.c_str(),
               dir.c_str());
  return 0;
}

int cmd_convergence(const GlobalFlags& flags, const std::string& preset, int levels) {
  ConfigPtr cfg = build_config(flags);
  if (!preset.empty()) check(ff_config_set(cfg.get(), "problem", preset.c_str()));
  if (levels > 0) {
    // Truncate the ladder to the requested number of levels.
    std::string ladder = ff_config_get(cfg.get(), "levels");
    std::vector<std::string> entries;
    std::string tok;
    for (char c : ladder + " ") {
      if (c == ' ') {
        if (!tok.empty()) entries.push_back(tok);
        tok.clear();
      } else {
        tok += c;
      }
    }
    std::string truncated;
    for (int i = 0; i < levels && i < static_cast<int>(entries.size()); ++i)
      truncated += (truncated.empty() ? "" : " ") + entries[i];
    check(ff_config_set(cfg.get(), "levels", truncated.c_str()));
  }
  const std::string dir = out_dir_of(cfg.get());
  echo_effective_config(cfg.get(), dir);

  ff_study* study = nullptr;
  check(ff_convergence_run(cfg.get(), &study));
  std::unique_ptr<ff_study, StudyDeleter> holder(study);

  std::printf("%-6s %-12s %-8s %-12s %-6s %-12s %-6s %-9s %-9s\n", "level", "h", "dofs",
              "l2_error", "order", "linf_error", "order", "asm_s", "solve_s");
  for (long long i = 0; i < ff_study_num_levels(study); ++i) {
    ff_study_record rec{};
    check(ff_study_record_get(study, i, &rec));
    char l2o[16] = "-", lio[16] = "-";
    if (!std::isnan(rec.l2_order)) std::snprintf(l2o, sizeof l2o, "%.2f", rec.l2_order);
    if (!std::isnan(rec.linf_order))
      std::snprintf(lio, sizeof lio, "%.2f", rec.linf_order);
    std::printf("%-6d %-12.6g %-8lld %-12.4e %-6s %-12.4e %-6s %-9.2f %-9.2f\n",
                rec.level, rec.h, rec.num_dofs, rec.l2_error, l2o, rec.linf_error, lio,
                rec.assembly_seconds, rec.solve_seconds);
  }
  std::fprintf(stderr, "wrote %s/convergence.csv\n", dir.c_str());
  return 0;
}

int cmd_trace(const GlobalFlags& flags, const std::vector<double>& point, int axis,
              const std::string& side_name, int level_override) {
  ConfigPtr cfg = build_config(flags);
  const int n = level_override > 0 ? level_override : first_level(cfg.get());
  MeshPtr mesh = mesh_from_config(cfg.get(), n);
  if (static_cast<int>(point.size()) != ff_mesh_dim(mesh.get())) {
    std::fprintf(stderr, "fracfem: --point needs %d coordinates\n",
                 ff_mesh_dim(mesh.get()));
    return 2;
  }
  ff_side side;
  if (side_name == "left")
    side = FF_SIDE_LEFT;
  else if (side_name == "right")
    side = FF_SIDE_RIGHT;
  else {
    std::fprintf(stderr, "fracfem: --side must be left or right\n");
    return 2;
  }

  ff_path* path = nullptr;
  check(ff_trace_path(mesh.get(), point.data(), axis, side, &path));
  std::unique_ptr<ff_path, PathDeleter> holder(path);

  std::printf("segment_index,simplex_id,r_min,r_max,exit_entity\n");
  double total = 0;
  for (long long i = 0; i < ff_path_num_segments(path); ++i) {
    ff_segment seg{};
    check(ff_path_segment(path, i, &seg));
    total += seg.r_max - seg.r_min;
    std::string entity;
    for (int l = 0; l <= ff_mesh_dim(mesh.get()); ++l)
      if (std::fabs(seg.exit_coords[l]) <= 1e-12)
        entity += (entity.empty() ? "" : "|") + std::to_string(l);
    std::printf("%lld,%lld,%.17g,%.17g,%s\n", i, seg.simplex, seg.r_min, seg.r_max,
                entity.c_str());
  }
  const double chord =
      std::fabs(point[axis - 1] - ff_path_chord_bound(path));
  std::fprintf(stderr, "segments: %lld, sum of lengths: %.17g, chord length: %.17g\n",
               ff_path_num_segments(path), total, chord);
  std::fprintf(stderr, "chord bound: %.17g, elements examined: %lld\n",
               ff_path_chord_bound(path), ff_path_elements_examined(path));
  return 0;
}

int cmd_bench(const GlobalFlags& flags) {
  ConfigPtr cfg = build_config(flags);
  const std::string dir = out_dir_of(cfg.get());
  echo_effective_config(cfg.get(), dir);

  ff_bench* bench = nullptr;
  check(ff_bench_run(cfg.get(), &bench));
  std::unique_ptr<ff_bench, BenchDeleter> holder(bench);

  check(ff_bench_write_csv(bench, (dir + "/bench.csv").c_str()));
  std::printf("%-10s %-16s %s\n", "elements", "variant", "seconds");
  for (long long i = 0; i < ff_bench_num_rows(bench); ++i) {
    ff_bench_row row{};
    check(ff_bench_row_get(bench, i, &row));
    std::printf("%-10lld %-16s %.4f\n", row.elements, row.variant, row.seconds);
  }
  std::fprintf(stderr, "wrote %s/bench.csv\n", dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracfem: finite elements for space-fractional diffusion"};
  app.require_subcommand(1);

  GlobalFlags mesh_flags, asm_flags, conv_flags, trace_flags, bench_flags;

  auto* mesh_cmd = app.add_subcommand("mesh", "generate, save or inspect meshes");
  bool cube = false, ball = false;
  int mesh_n = 4, mesh_dim = 3;
  double mesh_radius = 0.5;
  std::vector<std::string> info_files;
  mesh_cmd->add_flag("--cube", cube, "structured [0,1]^dim mesh");
  mesh_cmd->add_flag("--ball", ball, "convex ball mesh");
  mesh_cmd->add_option("-n,--subdivisions", mesh_n, "subdivisions per axis");
  mesh_cmd->add_option("--dim", mesh_dim, "spatial dimension (2 or 3)");
  mesh_cmd->add_option("--radius", mesh_radius, "ball radius");
  mesh_cmd->add_option("--info", info_files, "inspect <file.node> <file.ele>")
      ->expected(2);
  add_global_flags(mesh_cmd, &mesh_flags);

  auto* asm_cmd =
      app.add_subcommand("assemble", "assemble the fractional stiffness matrix");
  int asm_level = 0;
  std::string asm_preset;
  asm_cmd->add_option("-n,--subdivisions", asm_level,
                      "mesh subdivisions (default: first ladder level)");
  asm_cmd->add_option("--problem", asm_preset, "cube | ball-paper | custom");
  add_global_flags(asm_cmd, &asm_flags);

  auto* conv_cmd = app.add_subcommand("convergence", "run a convergence study");
  std::string preset;
  int levels = 0;
  conv_cmd->add_option("--preset", preset, "cube | ball-paper");
  conv_cmd->add_option("--levels", levels, "number of ladder levels to run");
  add_global_flags(conv_cmd, &conv_flags);

  auto* trace_cmd = app.add_subcommand("trace", "dump one integration path as CSV");
  std::vector<double> point;
  int axis = 1;
  std::string side = "left";
  int trace_level = 0;
  trace_cmd->add_option("--point", point, "start point coordinates")->expected(2, 3);
  trace_cmd->add_option("--direction", axis, "axis index (1-based)");
  trace_cmd->add_option("--side", side, "left | right");
  trace_cmd->add_option("-n,--subdivisions", trace_level, "mesh subdivisions");
  add_global_flags(trace_cmd, &trace_flags);

  auto* bench_cmd =
      app.add_subcommand("bench", "time pattern-locked vs naive accumulation");
  add_global_flags(bench_cmd, &bench_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (mesh_cmd->parsed())
      return cmd_mesh(mesh_flags, cube, ball, mesh_n, mesh_dim, mesh_radius,
                      info_files);
    if (asm_cmd->parsed()) return cmd_assemble(asm_flags, asm_level, asm_preset);
    if (conv_cmd->parsed()) return cmd_convergence(conv_flags, preset, levels);
    if (trace_cmd->parsed())
      return cmd_trace(trace_flags, point, axis, side, trace_level);
    if (bench_cmd->parsed()) return cmd_bench(bench_flags);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fracfem: %s\n", e.what());
    return 1;
  }
  return 2;
}
