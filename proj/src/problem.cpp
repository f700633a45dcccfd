#include "fracfem/problem.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "fracfem/quadrature.hpp"

namespace fracfem {

void validate_problem(const FractionalDiffusionProblem& problem) {
  if (problem.dim != 2 && problem.dim != 3)
    fail(ErrorCode::InvalidArgument, "problem dimension must be 2 or 3");
  for (int i = 0; i < problem.dim; ++i)
    if (!(problem.beta[i] > 0 && problem.beta[i] < 1))
      fail(ErrorCode::InvalidArgument, "beta components must lie in (0,1)");
  if (problem.domain == DomainKind::Ball && !(problem.radius > 0))
    fail(ErrorCode::InvalidArgument, "ball radius must be positive");
  if (problem.coefficients == CoefficientKind::Constant &&
      (!(problem.p_value > 0) || !(problem.q_value > 0)))
    fail(ErrorCode::InvalidArgument, "constant coefficients must be positive");
  if (problem.exact == ExactSolutionKind::CubePoly && problem.domain != DomainKind::Cube)
    fail(ErrorCode::InvalidArgument, "CubePoly exact solution needs the cube domain");
  if (problem.exact == ExactSolutionKind::BallQuartic &&
      problem.domain != DomainKind::Ball)
    fail(ErrorCode::InvalidArgument, "BallQuartic exact solution needs the ball domain");
}

double coefficient_p(const FractionalDiffusionProblem& problem, int direction,
                     const Vec3& x) {
  return problem.coefficients == CoefficientKind::PaperTrig ? std::cos(x[direction])
                                                            : problem.p_value;
}

double coefficient_q(const FractionalDiffusionProblem& problem, int direction,
                     const Vec3& x) {
  return problem.coefficients == CoefficientKind::PaperTrig
             ? 1.0 - std::cos(x[direction])
             : problem.q_value;
}

namespace {

double coefficient_p_deriv(const FractionalDiffusionProblem& problem, int direction,
                           const Vec3& x) {
  return problem.coefficients == CoefficientKind::PaperTrig ? -std::sin(x[direction])
                                                            : 0.0;
}

double coefficient_q_deriv(const FractionalDiffusionProblem& problem, int direction,
                           const Vec3& x) {
  return problem.coefficients == CoefficientKind::PaperTrig ? std::sin(x[direction])
                                                            : 0.0;
}

}  // namespace

double exact_solution(const FractionalDiffusionProblem& problem, const Vec3& x) {
  switch (problem.exact) {
    case ExactSolutionKind::CubePoly: {
      double u = 1;
      for (int i = 0; i < problem.dim; ++i) u *= x[i] * (1.0 - x[i]);
      return u;
    }
    case ExactSolutionKind::BallQuartic: {
      double s = -problem.radius * problem.radius;
      for (int i = 0; i < problem.dim; ++i) s += x[i] * x[i];
      return s * s;
    }
    case ExactSolutionKind::None:
      break;
  }
  fail(ErrorCode::InvalidArgument, "problem has no exact solution configured");
}

std::vector<OperatorTerm> weak_form_terms(const FractionalDiffusionProblem& problem) {
  validate_problem(problem);
  std::vector<OperatorTerm> terms;
  terms.reserve(2 * problem.dim);
  for (int i = 0; i < problem.dim; ++i) {
    terms.push_back(make_term(
        i, problem.beta[i], Side::Left, 1.0,
        [problem, i](const Vec3& x) { return coefficient_p(problem, i, x); }, -1.0));
    terms.push_back(make_term(
        i, problem.beta[i], Side::Right, 1.0,
        [problem, i](const Vec3& x) { return coefficient_q(problem, i, x); }, +1.0));
  }
  return terms;
}

namespace {

// Chord restriction of the exact solution in direction i: polynomial
// coefficients in x_i (ascending powers) plus the chord bounds.
struct ChordPolynomial {
  std::array<double, 5> coeff{};
  int degree = 0;
  double a = 0;
  double b = 0;
};

ChordPolynomial chord_restriction(const FractionalDiffusionProblem& problem,
                                  int direction, const Vec3& x) {
  ChordPolynomial cp;
  if (problem.exact == ExactSolutionKind::CubePoly) {
    double c = 1;
    for (int j = 0; j < problem.dim; ++j)
      if (j != direction) c *= x[j] * (1.0 - x[j]);
    cp.coeff = {0.0, c, -c, 0.0, 0.0};
    cp.degree = 2;
    cp.a = 0.0;
    cp.b = 1.0;
    return cp;
  }
  // BallQuartic: u = (x_i^2 + c)^2, c = rho^2 - r^2 along the chord.
  double rho2 = 0;
  for (int j = 0; j < problem.dim; ++j)
    if (j != direction) rho2 += x[j] * x[j];
  const double c = rho2 - problem.radius * problem.radius;
  if (c >= 0)
    fail(ErrorCode::InvalidArgument, "point lies outside the ball domain");
  cp.coeff = {c * c, 0.0, 2.0 * c, 0.0, 1.0};
  cp.degree = 4;
  cp.b = std::sqrt(-c);
  cp.a = -cp.b;
  return cp;
}

double binomial(int n, int k) {
  double r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// Value and x_i-derivative of one side's RL derivative of the chord
// polynomial via the power rule on shifted monomials.
struct SeriesEval {
  double value = 0;
  double deriv = 0;
};

SeriesEval rl_series(const ChordPolynomial& cp, double beta, double xi, Side side) {
  // Shift to powers of t = xi - a (left) or t = b - xi (right).
  std::array<double, 5> shifted{};
  const double anchor = side == Side::Left ? cp.a : cp.b;
  const double flip = side == Side::Left ? 1.0 : -1.0;
  for (int p = 0; p <= cp.degree; ++p) {
    if (cp.coeff[p] == 0) continue;
    for (int m = 0; m <= p; ++m)
      shifted[m] += cp.coeff[p] * binomial(p, m) * std::pow(flip, m) *
                    std::pow(anchor, p - m);
  }
  const double t = side == Side::Left ? xi - cp.a : cp.b - xi;
  const double dt = side == Side::Left ? 1.0 : -1.0;
  SeriesEval out;
  for (int m = 0; m <= cp.degree; ++m) {
    if (shifted[m] == 0) continue;
    const double factor =
        shifted[m] * std::tgamma(m + 1.0) / std::tgamma(m + 1.0 - beta);
    const double p = m - beta;
    out.value += factor * std::pow(t, p);
    out.deriv += factor * p * std::pow(t, p - 1.0) * dt;
  }
  return out;
}

}  // namespace

double manufactured_rhs(const FractionalDiffusionProblem& problem, const Vec3& x) {
  validate_problem(problem);
  if (problem.exact == ExactSolutionKind::None)
    fail(ErrorCode::InvalidArgument, "manufactured rhs needs an exact solution");
  double f = 0;
  for (int i = 0; i < problem.dim; ++i) {
    const ChordPolynomial cp = chord_restriction(problem, i, x);
    const SeriesEval left = rl_series(cp, problem.beta[i], x[i], Side::Left);
    const SeriesEval right = rl_series(cp, problem.beta[i], x[i], Side::Right);
    f += coefficient_p_deriv(problem, i, x) * left.value +
         coefficient_p(problem, i, x) * left.deriv -
         coefficient_q_deriv(problem, i, x) * right.value -
         coefficient_q(problem, i, x) * right.deriv;
  }
  return f;
}

std::vector<double> expand_solution(const DiscreteSystem& system,
                                    const std::vector<double>& free_values) {
  if (free_values.size() != static_cast<std::size_t>(system.num_free()))
    fail(ErrorCode::InvalidArgument, "free vector size mismatch");
  std::vector<double> full(system.vertex_to_free.size(), 0.0);
  for (int f = 0; f < system.num_free(); ++f)
    full[system.free_to_vertex[f]] = free_values[f];
  return full;
}

ErrorNorms error_norms(const SimplicialMesh& mesh,
                       const std::vector<double>& vertex_values,
                       const std::function<double(const Vec3&)>& exact) {
  if (vertex_values.size() != static_cast<std::size_t>(mesh.num_vertices()))
    fail(ErrorCode::InvalidArgument, "vertex field size mismatch");
  const QuadratureRule rule = quadrature_rule(mesh.dim(), 4);
  const double ref_vol = mesh.dim() == 2 ? 0.5 : 1.0 / 6.0;

  ErrorNorms norms;
  double l2sq = 0;
  for (int e = 0; e < mesh.num_simplices(); ++e) {
    const auto& s = mesh.simplex(e);
    const double scale = mesh.volume(e) / ref_vol;
    for (int q = 0; q < rule.size(); ++q) {
      Vec3 xq{0, 0, 0};
      double uh = 0;
      for (int l = 0; l <= mesh.dim(); ++l) {
        const double k = rule.points[q][l];
        const Vec3& vx = mesh.vertex(s[l]);
        for (int c = 0; c < 3; ++c) xq[c] += k * vx[c];
        uh += k * vertex_values[s[l]];
      }
      const double diff = uh - exact(xq);
      l2sq += rule.weights[q] * scale * diff * diff;
      norms.linf = std::max(norms.linf, std::fabs(diff));
    }
  }
  for (int v = 0; v < mesh.num_vertices(); ++v)
    norms.linf =
        std::max(norms.linf, std::fabs(vertex_values[v] - exact(mesh.vertex(v))));
  norms.l2 = std::sqrt(l2sq);
  return norms;
}

SimplicialMesh build_problem_mesh(const FractionalDiffusionProblem& problem,
                                  int subdivisions) {
  if (problem.domain == DomainKind::Cube)
    return generate_cube_mesh(subdivisions, problem.dim);
  return generate_ball_mesh(subdivisions, problem.dim, problem.radius);
}

std::vector<ConvergenceRecord> convergence_study(
    const FractionalDiffusionProblem& problem, const std::vector<int>& levels,
    const StudyOptions& options) {
  validate_problem(problem);
  if (levels.empty()) fail(ErrorCode::InvalidArgument, "study needs at least one level");

  using clock = std::chrono::steady_clock;
  const QuadratureRule rule = quadrature_rule(problem.dim, options.quadrature_degree);
  const std::vector<OperatorTerm> terms = weak_form_terms(problem);

  std::vector<ConvergenceRecord> records;
  for (std::size_t lvl = 0; lvl < levels.size(); ++lvl) {
    const SimplicialMesh mesh = build_problem_mesh(problem, levels[lvl]);

    ConvergenceRecord rec;
    rec.level = static_cast<int>(lvl);
    rec.subdivisions = levels[lvl];
    rec.h = mesh.max_diameter();

    AssemblyOptions aopt;
    aopt.threads = options.threads;
    const auto t0 = clock::now();
    DiscreteSystem system =
        assemble(mesh, terms, rule,
                 [&problem](const Vec3& x) { return manufactured_rhs(problem, x); },
                 DirichletPolicy::HomogeneousBoundary, aopt);
    const auto t1 = clock::now();
    SolveResult sol = solve(system, options.solver_tol, options.solver_max_iter);
    const auto t2 = clock::now();

    rec.num_dofs = system.num_free();
    rec.assembly_seconds = std::chrono::duration<double>(t1 - t0).count();
    rec.solve_seconds = std::chrono::duration<double>(t2 - t1).count();

    const std::vector<double> full = expand_solution(system, sol.free_values);
    const ErrorNorms norms = error_norms(
        mesh, full, [&problem](const Vec3& x) { return exact_solution(problem, x); });
    rec.l2_error = norms.l2;
    rec.linf_error = norms.linf;
    if (!records.empty()) {
      const ConvergenceRecord& prev = records.back();
      const double hr = std::log(prev.h / rec.h);
      rec.l2_order = std::log(prev.l2_error / rec.l2_error) / hr;
      rec.linf_order = std::log(prev.linf_error / rec.linf_error) / hr;
    }
    if (!options.output_dir.empty())
      write_vtk(mesh, full, "u_h",
                options.output_dir + "/solution_level" + std::to_string(lvl) + ".vtk");
    records.push_back(rec);
  }
  if (!options.output_dir.empty())
    write_convergence_csv(records, options.output_dir + "/convergence.csv");
  return records;
}

void write_convergence_csv(const std::vector<ConvergenceRecord>& records,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out << "level,h,num_dofs,l2_error,l2_order,linf_error,linf_order,"
         "assembly_seconds,solve_seconds\n";
  char buf[256];
  for (const ConvergenceRecord& r : records) {
    auto field = [](double v) {
      char tmp[40];
      if (std::isnan(v)) return std::string();
      std::snprintf(tmp, sizeof tmp, "%.12g", v);
      return std::string(tmp);
    };
    std::snprintf(buf, sizeof buf, "%d,%s,%d,%s,%s,%s,%s,%s,%s\n", r.level,
                  field(r.h).c_str(), r.num_dofs, field(r.l2_error).c_str(),
                  field(r.l2_order).c_str(), field(r.linf_error).c_str(),
                  field(r.linf_order).c_str(), field(r.assembly_seconds).c_str(),
                  field(r.solve_seconds).c_str());
    out << buf;
  }
  if (!out.flush()) fail(ErrorCode::Io, "write failed for " + path);
}

void write_vtk(const SimplicialMesh& mesh, const std::vector<double>& vertex_values,
               const std::string& field_name, const std::string& path) {
  if (vertex_values.size() != static_cast<std::size_t>(mesh.num_vertices()))
    fail(ErrorCode::InvalidArgument, "vertex field size mismatch");
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out << "# vtk DataFile Version 3.0\n";
  out << "fracfem solution\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  char buf[128];
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Vec3& x = mesh.vertex(v);
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", x[0], x[1], x[2]);
    out << buf;
  }
  const int nloc = mesh.dim() + 1;
  out << "CELLS " << mesh.num_simplices() << " "
      << static_cast<long long>(mesh.num_simplices()) * (nloc + 1) << "\n";
  for (int e = 0; e < mesh.num_simplices(); ++e) {
    out << nloc;
    for (int l = 0; l < nloc; ++l) out << " " << mesh.simplex(e)[l];
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.num_simplices() << "\n";
  const int cell_type = mesh.dim() == 2 ? 5 : 10;  // VTK_TRIANGLE / VTK_TETRA
  for (int e = 0; e < mesh.num_simplices(); ++e) out << cell_type << "\n";
  out << "POINT_DATA " << mesh.num_vertices() << "\n";
  out << "SCALARS " << field_name << " double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    std::snprintf(buf, sizeof buf, "%.17g\n", vertex_values[v]);
    out << buf;
  }
  if (!out.flush()) fail(ErrorCode::Io, "write failed for " + path);
}

}  // namespace fracfem
