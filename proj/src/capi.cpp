#include "fracfem.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <optional>
#include <string>

#include "fracfem/assembly.hpp"
#include "fracfem/config.hpp"
#include "fracfem/mesh.hpp"
#include "fracfem/problem.hpp"
#include "fracfem/quadrature.hpp"
#include "fracfem/raypath.hpp"

using namespace fracfem;

namespace {

thread_local std::string g_last_error = "no error";

ff_status status_from(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return FF_ERR_INVALID_ARGUMENT;
    case ErrorCode::Io:
      return FF_ERR_IO;
    case ErrorCode::Parse:
      return FF_ERR_PARSE;
    case ErrorCode::Mesh:
      return FF_ERR_MESH;
    case ErrorCode::Trace:
      return FF_ERR_TRACE;
    case ErrorCode::Solver:
      return FF_ERR_SOLVER;
    case ErrorCode::Internal:
      return FF_ERR_INTERNAL;
  }
  return FF_ERR_INTERNAL;
}

template <typename Fn>
ff_status guarded(Fn&& fn) {
  try {
    fn();
    return FF_OK;
  } catch (const Error& err) {
    g_last_error = err.what();
    return status_from(err.code());
  } catch (const std::exception& err) {
    g_last_error = err.what();
    return FF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FF_ERR_INTERNAL;
  }
}

ff_status invalid(const char* msg) {
  g_last_error = msg;
  return FF_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct ff_mesh {
  std::shared_ptr<const SimplicialMesh> mesh;
};

struct ff_path {
  IntegrationPath path;
};

struct ff_config {
  RunConfig config;
  std::string scratch;
};

struct ff_system {
  std::shared_ptr<const SimplicialMesh> mesh;
  FractionalDiffusionProblem problem;
  RunConfig config;
  DiscreteSystem system;
  double assembly_seconds = 0;
  double solve_seconds = 0;
  std::optional<std::vector<double>> solution;  // free values
};

struct ff_study {
  std::vector<ConvergenceRecord> records;
};

struct ff_bench {
  struct Row {
    long long elements;
    std::string variant;
    double seconds;
  };
  std::vector<Row> rows;
};

extern "C" {

const char* ff_status_name(ff_status status) {
  switch (status) {
    case FF_OK:
      return "ok";
    case FF_ERR_INVALID_ARGUMENT:
      return "invalid-argument";
    case FF_ERR_IO:
      return "io";
    case FF_ERR_PARSE:
      return "parse";
    case FF_ERR_MESH:
      return "mesh";
    case FF_ERR_TRACE:
      return "trace";
    case FF_ERR_SOLVER:
      return "solver";
    case FF_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

const char* ff_last_error(void) { return g_last_error.c_str(); }

/* ---- meshes -------------------------------------------------- */

ff_status ff_mesh_cube(int dim, int subdivisions, ff_mesh** out) {
  if (!out) return invalid("out handle is null");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<ff_mesh>();
    handle->mesh =
        std::make_shared<SimplicialMesh>(generate_cube_mesh(subdivisions, dim));
    *out = handle.release();
  });
}

ff_status ff_mesh_ball(int dim, int subdivisions, double radius, ff_mesh** out) {
  if (!out) return invalid("out handle is null");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<ff_mesh>();
    handle->mesh =
        std::make_shared<SimplicialMesh>(generate_ball_mesh(subdivisions, dim, radius));
    *out = handle.release();
  });
}

ff_status ff_mesh_load(const char* node_path, const char* ele_path, ff_mesh** out) {
  if (!out) return invalid("out handle is null");
  *out = nullptr;
  if (!node_path || !ele_path) return invalid("mesh paths are null");
  return guarded([&] {
    auto handle = std::make_unique<ff_mesh>();
    handle->mesh = std::make_shared<SimplicialMesh>(load_mesh(node_path, ele_path));
    *out = handle.release();
  });
}

ff_status ff_mesh_save(const ff_mesh* mesh, const char* node_path,
                       const char* ele_path) {
  if (!mesh || !node_path || !ele_path) return invalid("null argument");
  return guarded([&] { save_mesh(*mesh->mesh, node_path, ele_path); });
}

void ff_mesh_free(ff_mesh* mesh) { delete mesh; }

int ff_mesh_dim(const ff_mesh* mesh) { return mesh ? mesh->mesh->dim() : 0; }
long long ff_mesh_num_vertices(const ff_mesh* mesh) {
  return mesh ? mesh->mesh->num_vertices() : 0;
}
long long ff_mesh_num_simplices(const ff_mesh* mesh) {
  return mesh ? mesh->mesh->num_simplices() : 0;
}
long long ff_mesh_num_boundary_vertices(const ff_mesh* mesh) {
  return mesh ? mesh->mesh->num_boundary_vertices() : 0;
}
double ff_mesh_max_diameter(const ff_mesh* mesh) {
  return mesh ? mesh->mesh->max_diameter() : 0;
}
double ff_mesh_min_volume(const ff_mesh* mesh) {
  return mesh ? mesh->mesh->min_volume() : 0;
}
double ff_mesh_total_volume(const ff_mesh* mesh) {
  return mesh ? mesh->mesh->total_volume() : 0;
}

/* ---- integration paths --------------------------------------- */

ff_status ff_trace_path(const ff_mesh* mesh, const double* point, int axis,
                        ff_side side, ff_path** out) {
  if (!out) return invalid("out handle is null");
  *out = nullptr;
  if (!mesh || !point) return invalid("null argument");
  if (axis < 1 || axis > mesh->mesh->dim()) return invalid("axis must lie in 1..dim");
  return guarded([&] {
    Vec3 p{0, 0, 0};
    for (int i = 0; i < mesh->mesh->dim(); ++i) p[i] = point[i];
    auto handle = std::make_unique<ff_path>();
    handle->path = trace_path(*mesh->mesh, p, axis - 1,
                              side == FF_SIDE_LEFT ? Side::Left : Side::Right);
    *out = handle.release();
  });
}

long long ff_path_num_segments(const ff_path* path) {
  return path ? static_cast<long long>(path->path.segments.size()) : 0;
}

ff_status ff_path_segment(const ff_path* path, long long index, ff_segment* out) {
  if (!path || !out) return invalid("null argument");
  if (index < 0 || index >= ff_path_num_segments(path))
    return invalid("segment index out of range");
  const SegmentHit& hit = path->path.segments[static_cast<std::size_t>(index)];
  out->simplex = hit.simplex;
  out->r_min = hit.r_min;
  out->r_max = hit.r_max;
  for (int l = 0; l < 4; ++l) out->exit_coords[l] = hit.k_max[l];
  return FF_OK;
}

double ff_path_chord_bound(const ff_path* path) {
  return path ? path->path.chord_bound : 0;
}

long long ff_path_elements_examined(const ff_path* path) {
  return path ? path->path.elements_examined : 0;
}

void ff_path_free(ff_path* path) { delete path; }

/* ---- run configuration ---------------------------------------- */

ff_config* ff_config_create(void) { return new ff_config{}; }

ff_status ff_config_set(ff_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return invalid("null argument");
  return guarded([&] { config->config.set(key, value); });
}

const char* ff_config_get(ff_config* config, const char* key) {
  if (!config || !key) return nullptr;
  try {
    config->scratch = config->config.get(key);
    return config->scratch.c_str();
  } catch (const Error& err) {
    g_last_error = err.what();
    return nullptr;
  }
}

ff_status ff_config_load(ff_config* config, const char* path) {
  if (!config || !path) return invalid("null argument");
  return guarded([&] { config->config = load_config(path); });
}

ff_status ff_config_save(const ff_config* config, const char* path) {
  if (!config || !path) return invalid("null argument");
  return guarded([&] { save_config(config->config, path); });
}

void ff_config_free(ff_config* config) { delete config; }

/* ---- assembly and solve --------------------------------------- */

ff_status ff_assemble(const ff_mesh* mesh, const ff_config* config, ff_system** out) {
  if (!out) return invalid("out handle is null");
  *out = nullptr;
  if (!mesh || !config) return invalid("null argument");
  return guarded([&] {
    auto handle = std::make_unique<ff_system>();
    handle->mesh = mesh->mesh;
    handle->config = config->config;
    handle->problem = config->config.to_problem();
    if (handle->problem.dim != mesh->mesh->dim())
      fail(ErrorCode::InvalidArgument, "config dim does not match the mesh");
    const QuadratureRule rule =
        quadrature_rule(handle->problem.dim, config->config.quadrature_degree);
    AssemblyOptions opt;
    opt.threads = config->config.threads;
    std::function<double(const Vec3&)> rhs;
    if (handle->problem.exact != ExactSolutionKind::None) {
      const FractionalDiffusionProblem prob = handle->problem;
      rhs = [prob](const Vec3& x) { return manufactured_rhs(prob, x); };
    }
    const auto t0 = std::chrono::steady_clock::now();
    handle->system = assemble(*mesh->mesh, weak_form_terms(handle->problem), rule, rhs,
                              DirichletPolicy::HomogeneousBoundary, opt);
    handle->assembly_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    *out = handle.release();
  });
}

ff_status ff_system_get_stats(const ff_system* system, ff_system_stats* out) {
  if (!system || !out) return invalid("null argument");
  return guarded([&] {
    const MatrixStats st = matrix_stats(system->system);
    out->num_free = system->system.num_free();
    out->nnz = st.nnz;
    out->density = st.density;
    out->symmetry_defect = st.symmetry_defect;
    out->assembly_seconds = system->assembly_seconds;
  });
}

ff_status ff_system_write_matrix(const ff_system* system, const char* path) {
  if (!system || !path) return invalid("null argument");
  return guarded([&] { write_matrix_market(system->system.matrix, path); });
}

ff_status ff_system_write_pattern(const ff_system* system, const char* path) {
  if (!system || !path) return invalid("null argument");
  return guarded([&] {
    const PatchBounds bounds = patch_bounds(*system->mesh);
    const SparsityPattern pattern =
        build_sparsity_pattern(*system->mesh, bounds, weak_form_terms(system->problem));
    write_pattern_matrix_market(pattern, path);
  });
}

ff_status ff_system_solve(ff_system* system, double* residual, int* iterations) {
  if (!system) return invalid("null argument");
  return guarded([&] {
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult result =
        solve(system->system, system->config.solver_tol, system->config.solver_max_iter);
    system->solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (residual) *residual = result.residual;
    if (iterations) *iterations = result.iterations;
    system->solution = std::move(result.free_values);
  });
}

ff_status ff_system_error_norms(const ff_system* system, double* l2, double* linf) {
  if (!system) return invalid("null argument");
  if (!system->solution) return invalid("system has not been solved");
  return guarded([&] {
    const FractionalDiffusionProblem prob = system->problem;
    if (prob.exact == ExactSolutionKind::None)
      fail(ErrorCode::InvalidArgument, "problem has no exact solution configured");
    const std::vector<double> full = expand_solution(system->system, *system->solution);
    const ErrorNorms norms = error_norms(
        *system->mesh, full, [prob](const Vec3& x) { return exact_solution(prob, x); });
    if (l2) *l2 = norms.l2;
    if (linf) *linf = norms.linf;
  });
}

ff_status ff_system_write_vtk(const ff_system* system, const char* path) {
  if (!system || !path) return invalid("null argument");
  if (!system->solution) return invalid("system has not been solved");
  return guarded([&] {
    const std::vector<double> full = expand_solution(system->system, *system->solution);
    write_vtk(*system->mesh, full, "u_h", path);
  });
}

double ff_system_solve_seconds(const ff_system* system) {
  return system ? system->solve_seconds : 0;
}

void ff_system_free(ff_system* system) { delete system; }

/* ---- convergence studies -------------------------------------- */

ff_status ff_convergence_run(const ff_config* config, ff_study** out) {
  if (!out) return invalid("out handle is null");
  *out = nullptr;
  if (!config) return invalid("null argument");
  return guarded([&] {
    const FractionalDiffusionProblem problem = config->config.to_problem();
    if (problem.exact == ExactSolutionKind::None)
      fail(ErrorCode::InvalidArgument,
           "convergence studies need a problem with an exact solution "
           "(cube or ball-paper)");
    StudyOptions opt;
    opt.quadrature_degree = config->config.quadrature_degree;
    opt.solver_tol = config->config.solver_tol;
    opt.solver_max_iter = config->config.solver_max_iter;
    opt.threads = config->config.threads;
    opt.output_dir = config->config.output_dir;
    auto handle = std::make_unique<ff_study>();
    handle->records = convergence_study(problem, config->config.resolved_levels(), opt);
    *out = handle.release();
  });
}

long long ff_study_num_levels(const ff_study* study) {
  return study ? static_cast<long long>(study->records.size()) : 0;
}

ff_status ff_study_record_get(const ff_study* study, long long level,
                              ff_study_record* out) {
  if (!study || !out) return invalid("null argument");
  if (level < 0 || level >= ff_study_num_levels(study))
    return invalid("level out of range");
  const ConvergenceRecord& r = study->records[static_cast<std::size_t>(level)];
  out->level = r.level;
  out->subdivisions = r.subdivisions;
  out->h = r.h;
  out->num_dofs = r.num_dofs;
  out->l2_error = r.l2_error;
  out->l2_order = r.l2_order;
  out->linf_error = r.linf_error;
  out->linf_order = r.linf_order;
  out->assembly_seconds = r.assembly_seconds;
  out->solve_seconds = r.solve_seconds;
  return FF_OK;
}

void ff_study_free(ff_study* study) { delete study; }

/* ---- benchmarks ------------------------------------------------ */

ff_status ff_bench_run(const ff_config* config, ff_bench** out) {
  if (!out) return invalid("out handle is null");
  *out = nullptr;
  if (!config) return invalid("null argument");
  return guarded([&] {
    FractionalDiffusionProblem problem = config->config.to_problem();
    problem.domain = DomainKind::Cube;
    problem.exact = ExactSolutionKind::None;
    validate_problem(problem);
    std::vector<int> levels = config->config.levels;
    if (levels.empty()) levels = {4, 8, 12};

    auto handle = std::make_unique<ff_bench>();
    const QuadratureRule rule =
        quadrature_rule(problem.dim, config->config.quadrature_degree);
    const auto terms = weak_form_terms(problem);
    std::vector<OperatorTerm> classical_terms;
    for (int i = 0; i < problem.dim; ++i)
      classical_terms.push_back(
          make_term(i, 1.0, Side::Left, 1.0, [](const Vec3&) { return 1.0; }, 1.0));

    for (int n : levels) {
      const SimplicialMesh mesh = generate_cube_mesh(n, problem.dim);
      auto timed = [&](const std::vector<OperatorTerm>& t, AccumulationStrategy strat,
                       const char* name) {
        AssemblyOptions opt;
        opt.threads = 1;  // single thread keeps accumulation timings comparable
        opt.strategy = strat;
        const auto t0 = std::chrono::steady_clock::now();
        DiscreteSystem sys =
            assemble(mesh, t, rule, nullptr, DirichletPolicy::HomogeneousBoundary, opt);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        handle->rows.push_back({mesh.num_simplices(), name, secs});
      };
      timed(terms, AccumulationStrategy::PatternCsr, "pattern_csr");
      timed(terms, AccumulationStrategy::HashMap, "naive_hashmap");
      timed(classical_terms, AccumulationStrategy::PatternCsr, "classical");
    }
    *out = handle.release();
  });
}

long long ff_bench_num_rows(const ff_bench* bench) {
  return bench ? static_cast<long long>(bench->rows.size()) : 0;
}

ff_status ff_bench_row_get(const ff_bench* bench, long long index, ff_bench_row* out) {
  if (!bench || !out) return invalid("null argument");
  if (index < 0 || index >= ff_bench_num_rows(bench))
    return invalid("row index out of range");
  const auto& row = bench->rows[static_cast<std::size_t>(index)];
  out->elements = row.elements;
  std::snprintf(out->variant, sizeof out->variant, "%s", row.variant.c_str());
  out->seconds = row.seconds;
  return FF_OK;
}

ff_status ff_bench_write_csv(const ff_bench* bench, const char* path) {
  if (!bench || !path) return invalid("null argument");
  return guarded([&] {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::Io, std::string("cannot write ") + path);
    out << "elements,variant,seconds\n";
    char buf[128];
    for (const auto& row : bench->rows) {
      std::snprintf(buf, sizeof buf, "%lld,%s,%.6g\n", row.elements, row.variant.c_str(),
                    row.seconds);
      out << buf;
    }
    if (!out.flush()) fail(ErrorCode::Io, std::string("write failed for ") + path);
  });
}

void ff_bench_free(ff_bench* bench) { delete bench; }

} /* extern "C" */
