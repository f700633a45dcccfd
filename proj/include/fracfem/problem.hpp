#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fracfem/assembly.hpp"

namespace fracfem {

enum class DomainKind { Cube, Ball };

/// Coefficient families with closed-form i-derivatives (needed by the
/// manufactured right-hand side).
enum class CoefficientKind {
  PaperTrig,  // p_i = cos(x_i), q_i = 1 - cos(x_i)
  Constant,   // p_i = p_value, q_i = q_value
};

enum class ExactSolutionKind {
  None,
  CubePoly,     // prod_i x_i (1 - x_i) on [0,1]^n
  BallQuartic,  // (|x|^2 - r^2)^2 on the ball
};

/// Steady fractional diffusion benchmark in divergence form:
/// sum_i D_i( p_i D_left^{beta_i} u - q_i D_right^{beta_i} u ) = f,
/// u = 0 outside the domain.
struct FractionalDiffusionProblem {
  int dim = 3;
  DomainKind domain = DomainKind::Ball;
  double radius = 0.5;
  std::array<double, 3> beta{0.8, 0.8, 0.8};
  CoefficientKind coefficients = CoefficientKind::PaperTrig;
  double p_value = 1.0;  // Constant coefficients only
  double q_value = 1.0;
  ExactSolutionKind exact = ExactSolutionKind::BallQuartic;
};

void validate_problem(const FractionalDiffusionProblem& problem);

double coefficient_p(const FractionalDiffusionProblem& problem, int direction,
                     const Vec3& x);
double coefficient_q(const FractionalDiffusionProblem& problem, int direction,
                     const Vec3& x);

double exact_solution(const FractionalDiffusionProblem& problem, const Vec3& x);

/// Terms of a(u,v) = -sum_i[(p_i D_left u, D_i v) - (q_i D_right u, D_i v)].
std::vector<OperatorTerm> weak_form_terms(const FractionalDiffusionProblem& problem);

/// Closed-form f for the configured exact solution: the chord
/// restriction of u is expanded in shifted powers, the RL power rule
/// applied, and the coefficient product differentiated analytically.
double manufactured_rhs(const FractionalDiffusionProblem& problem, const Vec3& x);

struct SolveResult {
  std::vector<double> free_values;
  double residual = 0;  // ||Kx - b|| / ||b||
  int iterations = 0;
  std::string method;
};

/// Nonsymmetric Krylov solve (BiCGSTAB + incomplete LU) with a dense
/// direct route for small systems. The relative-residual postcondition
/// is verified on exit.
SolveResult solve(const DiscreteSystem& system, double tol = 1e-10,
                  int max_iter = 2000);

/// Vertex field = free values + zeros on constrained vertices.
std::vector<double> expand_solution(const DiscreteSystem& system,
                                    const std::vector<double>& free_values);

struct ErrorNorms {
  double l2 = 0;
  double linf = 0;
};

/// L2 by element quadrature of degree >= 4; Linf over quadrature
/// points and vertices.
ErrorNorms error_norms(const SimplicialMesh& mesh,
                       const std::vector<double>& vertex_values,
                       const std::function<double(const Vec3&)>& exact);

struct ConvergenceRecord {
  int level = 0;
  int subdivisions = 0;
  double h = 0;
  int num_dofs = 0;
  double l2_error = 0;
  double l2_order = std::numeric_limits<double>::quiet_NaN();
  double linf_error = 0;
  double linf_order = std::numeric_limits<double>::quiet_NaN();
  double assembly_seconds = 0;
  double solve_seconds = 0;
};

struct StudyOptions {
  int quadrature_degree = 2;
  double solver_tol = 1e-10;
  int solver_max_iter = 2000;
  int threads = 0;
  std::string output_dir;  // when set: per-level VTK + convergence CSV
};

std::vector<ConvergenceRecord> convergence_study(
    const FractionalDiffusionProblem& problem, const std::vector<int>& levels,
    const StudyOptions& options);

SimplicialMesh build_problem_mesh(const FractionalDiffusionProblem& problem,
                                  int subdivisions);

void write_convergence_csv(const std::vector<ConvergenceRecord>& records,
                           const std::string& path);

/// Legacy ASCII VTK unstructured grid with one point scalar field.
void write_vtk(const SimplicialMesh& mesh, const std::vector<double>& vertex_values,
               const std::string& field_name, const std::string& path);

}  // namespace fracfem
