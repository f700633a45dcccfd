/*
 * fracfem C API: finite element assembly and solvers for steady
 * space-fractional diffusion on simplicial meshes.
 *
 * All objects are opaque handles created and destroyed by this
 * library. Functions return FF_OK (0) on success; on failure they
 * return an error code and leave a human-readable message in
 * ff_last_error() (thread-local). Output handle arguments are set to
 * NULL on failure.
 *
 * Axis arguments are 1-based (1..dim), matching the mathematical
 * notation d/dx_i.
 */

#ifndef FRACFEM_H
#define FRACFEM_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ff_status {
  FF_OK = 0,
  FF_ERR_INVALID_ARGUMENT = 1,
  FF_ERR_IO = 2,
  FF_ERR_PARSE = 3,
  FF_ERR_MESH = 4,
  FF_ERR_TRACE = 5,
  FF_ERR_SOLVER = 6,
  FF_ERR_INTERNAL = 7
} ff_status;

typedef enum ff_side { FF_SIDE_LEFT = 0, FF_SIDE_RIGHT = 1 } ff_side;

typedef struct ff_mesh ff_mesh;
typedef struct ff_path ff_path;
typedef struct ff_config ff_config;
typedef struct ff_system ff_system;
typedef struct ff_study ff_study;
typedef struct ff_bench ff_bench;

/* Static name of a status code ("ok", "invalid-argument", ...). */
const char* ff_status_name(ff_status status);
/* Detail message of the last failing call on this thread; never NULL. */
const char* ff_last_error(void);

/* ---- meshes -------------------------------------------------- */

ff_status ff_mesh_cube(int dim, int subdivisions, ff_mesh** out);
ff_status ff_mesh_ball(int dim, int subdivisions, double radius, ff_mesh** out);
/* Triangle/TetGen ASCII files; indexing base auto-detected. */
ff_status ff_mesh_load(const char* node_path, const char* ele_path, ff_mesh** out);
ff_status ff_mesh_save(const ff_mesh* mesh, const char* node_path,
                       const char* ele_path);
void ff_mesh_free(ff_mesh* mesh);

int ff_mesh_dim(const ff_mesh* mesh);
long long ff_mesh_num_vertices(const ff_mesh* mesh);
long long ff_mesh_num_simplices(const ff_mesh* mesh);
long long ff_mesh_num_boundary_vertices(const ff_mesh* mesh);
double ff_mesh_max_diameter(const ff_mesh* mesh);
double ff_mesh_min_volume(const ff_mesh* mesh);
double ff_mesh_total_volume(const ff_mesh* mesh);

/* ---- integration paths --------------------------------------- */

typedef struct ff_segment {
  long long simplex;
  double r_min;
  double r_max;
  /* Exit volume coordinates (dim+1 entries used). */
  double exit_coords[4];
} ff_segment;

/* Chord decomposition from `point` (dim doubles) to the boundary
 * along -e_axis (left) or +e_axis (right). */
ff_status ff_trace_path(const ff_mesh* mesh, const double* point, int axis,
                        ff_side side, ff_path** out);
long long ff_path_num_segments(const ff_path* path);
ff_status ff_path_segment(const ff_path* path, long long index, ff_segment* out);
double ff_path_chord_bound(const ff_path* path);
long long ff_path_elements_examined(const ff_path* path);
void ff_path_free(ff_path* path);

/* ---- run configuration ---------------------------------------- */

/* Flat key-value configuration; keys:
 *   problem (cube | ball-paper | custom), dim, beta, coefficients
 *   (paper-trig | constant), p_value, q_value, radius, node_path,
 *   ele_path, levels, quadrature_degree, solver_tol, solver_max_iter,
 *   threads, seed, output_dir. */
ff_config* ff_config_create(void);
ff_status ff_config_set(ff_config* config, const char* key, const char* value);
/* Returns NULL for unknown keys; the string lives until the next call
 * on the same handle. */
const char* ff_config_get(ff_config* config, const char* key);
ff_status ff_config_load(ff_config* config, const char* path);
ff_status ff_config_save(const ff_config* config, const char* path);
void ff_config_free(ff_config* config);

/* ---- assembly and solve --------------------------------------- */

typedef struct ff_system_stats {
  long long num_free;
  long long nnz;
  double density;
  double symmetry_defect;
  double assembly_seconds;
} ff_system_stats;

/* Assembles the fractional stiffness matrix and load vector of the
 * configured problem on the mesh. */
ff_status ff_assemble(const ff_mesh* mesh, const ff_config* config, ff_system** out);
ff_status ff_system_get_stats(const ff_system* system, ff_system_stats* out);
/* MatrixMarket coordinate format, 1-based. */
ff_status ff_system_write_matrix(const ff_system* system, const char* path);
/* Template pattern over all mesh vertices, unit values. */
ff_status ff_system_write_pattern(const ff_system* system, const char* path);
/* Solves, stores the solution in the handle, and reports the relative
 * residual. Pass NULL for outputs not needed. */
ff_status ff_system_solve(ff_system* system, double* residual, int* iterations);
/* L2/Linf errors against the configured exact solution (needs solve). */
ff_status ff_system_error_norms(const ff_system* system, double* l2, double* linf);
/* Legacy ASCII VTK with the solved vertex field u_h (needs solve). */
ff_status ff_system_write_vtk(const ff_system* system, const char* path);
double ff_system_solve_seconds(const ff_system* system);
void ff_system_free(ff_system* system);

/* ---- convergence studies -------------------------------------- */

typedef struct ff_study_record {
  int level;
  int subdivisions;
  double h;
  long long num_dofs;
  double l2_error;
  double l2_order; /* NaN on the first level */
  double linf_error;
  double linf_order;
  double assembly_seconds;
  double solve_seconds;
} ff_study_record;

/* Runs the configured study over its level ladder; when the config
 * names an output_dir, writes convergence.csv and per-level VTK files
 * into it (the directory must exist). */
ff_status ff_convergence_run(const ff_config* config, ff_study** out);
long long ff_study_num_levels(const ff_study* study);
ff_status ff_study_record_get(const ff_study* study, long long level,
                              ff_study_record* out);
void ff_study_free(ff_study* study);

/* ---- benchmarks ------------------------------------------------ */

typedef struct ff_bench_row {
  long long elements;
  char variant[32]; /* pattern_csr | naive_hashmap | classical */
  double seconds;
} ff_bench_row;

/* Times pattern-locked CSR accumulation against the naive hash-map
 * baseline and classical assembly on cube meshes of the configured
 * level ladder. */
ff_status ff_bench_run(const ff_config* config, ff_bench** out);
long long ff_bench_num_rows(const ff_bench* bench);
ff_status ff_bench_row_get(const ff_bench* bench, long long index, ff_bench_row* out);
ff_status ff_bench_write_csv(const ff_bench* bench, const char* path);
void ff_bench_free(ff_bench* bench);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FRACFEM_H */
