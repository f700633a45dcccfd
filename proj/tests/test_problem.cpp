#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <array>
#include <cstdlib>
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "fracfem/problem.hpp"
#include "oracles.hpp"

using namespace fracfem;

namespace {

FractionalDiffusionProblem cube_problem(double b0 = 0.8, double b1 = 0.8,
                                        double b2 = 0.8) {
  FractionalDiffusionProblem p;
  p.dim = 3;
  p.domain = DomainKind::Cube;
  p.exact = ExactSolutionKind::CubePoly;
  p.beta = {b0, b1, b2};
  p.coefficients = CoefficientKind::PaperTrig;
  return p;
}

FractionalDiffusionProblem ball_problem(double b0 = 0.8, double b1 = 0.8,
                                        double b2 = 0.8) {
  FractionalDiffusionProblem p;
  p.dim = 3;
  p.domain = DomainKind::Ball;
  p.radius = 0.5;
  p.exact = ExactSolutionKind::BallQuartic;
  p.beta = {b0, b1, b2};
  p.coefficients = CoefficientKind::PaperTrig;
  return p;
}

// Chord bounds of the problem domain through x along axis i.
void chord_bounds(const FractionalDiffusionProblem& p, const Vec3& x, int axis,
                  double* a, double* b) {
  if (p.domain == DomainKind::Cube) {
    *a = 0.0;
    *b = 1.0;
    return;
  }
  double rho2 = 0;
  for (int j = 0; j < p.dim; ++j)
    if (j != axis) rho2 += x[j] * x[j];
  const double w = std::sqrt(p.radius * p.radius - rho2);
  *a = -w;
  *b = w;
}

// Fully numeric right-hand side: tanh-sinh fractional derivatives of
// the exact solution plus central differences for the outer divergence.
double numeric_rhs(const FractionalDiffusionProblem& p, const Vec3& x) {
  auto u = [&](Vec3 y) { return exact_solution(p, y); };
  double f = 0;
  for (int i = 0; i < p.dim; ++i) {
    double a, b;
    chord_bounds(p, x, i, &a, &b);
    auto flux = [&](double xi) {
      Vec3 y = x;
      y[i] = xi;
      const double dl =
          oracles::numeric_fractional_derivative(u, y, i, p.beta[i], a, b, Side::Left, 1e-6);
      const double dr =
          oracles::numeric_fractional_derivative(u, y, i, p.beta[i], a, b, Side::Right, 1e-6);
      return coefficient_p(p, i, y) * dl - coefficient_q(p, i, y) * dr;
    };
    const double delta = 1e-4;
    f += (flux(x[i] + delta) - flux(x[i] - delta)) / (2.0 * delta);
  }
  return f;
}

}  // namespace

TEST_CASE("problem validation") {
  FractionalDiffusionProblem p = cube_problem();
  p.beta[1] = 1.2;
  CHECK_THROWS_AS(validate_problem(p), Error);
  p = cube_problem();
  p.exact = ExactSolutionKind::BallQuartic;
  CHECK_THROWS_AS(validate_problem(p), Error);
  p = cube_problem();
  p.coefficients = CoefficientKind::Constant;
  p.q_value = 0.0;
  CHECK_THROWS_AS(validate_problem(p), Error);
}

TEST_CASE("weak form terms") {
  FractionalDiffusionProblem p = ball_problem(0.6, 0.7, 0.8);
  auto terms = weak_form_terms(p);
  REQUIRE(terms.size() == 6);
  for (int i = 0; i < 3; ++i) {
    const OperatorTerm& left = terms[2 * i];
    const OperatorTerm& right = terms[2 * i + 1];
    CHECK(left.direction == i);
    CHECK(left.trial.gamma == doctest::Approx(p.beta[i]));
    CHECK(left.trial.side == Side::Left);
    CHECK(left.test.classical());
    CHECK(left.sign == -1.0);
    CHECK(right.trial.side == Side::Right);
    CHECK(right.sign == +1.0);
    // Coefficients evaluate the paper fields.
    const Vec3 x{0.1, -0.2, 0.15};
    CHECK(left.coefficient(x) == doctest::Approx(std::cos(x[i])));
    CHECK(right.coefficient(x) == doctest::Approx(1.0 - std::cos(x[i])));
  }
  // The 2-D problem has four terms.
  FractionalDiffusionProblem p2 = cube_problem();
  p2.dim = 2;
  CHECK(weak_form_terms(p2).size() == 4);
}

TEST_CASE("classical limit of the weak form") {
  // beta -> 1 with p = q = 1/2 turns a(u,v) into -(grad u, grad v).
  FractionalDiffusionProblem p = cube_problem();
  p.coefficients = CoefficientKind::Constant;
  p.p_value = p.q_value = 0.5;
  p.beta = {1.0 - 1e-8, 1.0 - 1e-8, 1.0 - 1e-8};
  SimplicialMesh mesh = generate_cube_mesh(3, 3);
  DiscreteSystem sys = assemble(mesh, weak_form_terms(p), quadrature_rule(3, 2), nullptr,
                                DirichletPolicy::HomogeneousBoundary);
  const auto textbook = oracles::textbook_stiffness(mesh);
  double scale = 0;
  for (double v : sys.matrix.val) scale = std::max(scale, std::fabs(v));
  for (int r = 0; r < sys.num_free(); ++r)
    for (std::int64_t idx = sys.matrix.row_ptr[r]; idx < sys.matrix.row_ptr[r + 1];
         ++idx) {
      const int vr = sys.free_to_vertex[r];
      const int vc = sys.free_to_vertex[sys.matrix.col[idx]];
      CHECK(std::fabs(sys.matrix.val[idx] + textbook[vr][vc]) <= 1e-6 * scale);
    }
}

TEST_CASE("manufactured rhs against the numeric oracle") {
  std::mt19937_64 rng(oracles::test_seed() + 10);
  std::uniform_real_distribution<double> unit(0.1, 0.9);

  SUBCASE("cube, paper coefficients") {
    FractionalDiffusionProblem p = cube_problem(0.5, 0.5, 0.5);
    for (int trial = 0; trial < 12; ++trial) {
      const Vec3 x{unit(rng), unit(rng), unit(rng)};
      const double closed = manufactured_rhs(p, x);
      const double numeric = numeric_rhs(p, x);
      CHECK(std::fabs(closed - numeric) <=
            1e-6 * std::max({std::fabs(closed), std::fabs(numeric), 1.0}));
    }
  }
  SUBCASE("cube, constant coefficients") {
    FractionalDiffusionProblem p = cube_problem(0.3, 0.6, 0.9);
    p.coefficients = CoefficientKind::Constant;
    p.p_value = 1.0;
    p.q_value = 0.25;
    for (int trial = 0; trial < 12; ++trial) {
      const Vec3 x{unit(rng), unit(rng), unit(rng)};
      const double closed = manufactured_rhs(p, x);
      const double numeric = numeric_rhs(p, x);
      CHECK(std::fabs(closed - numeric) <=
            1e-6 * std::max({std::fabs(closed), std::fabs(numeric), 1.0}));
    }
  }
  SUBCASE("ball, paper configuration") {
    FractionalDiffusionProblem p = ball_problem(0.6, 0.7, 0.8);
    std::uniform_real_distribution<double> coord(-0.28, 0.28);
    for (int trial = 0; trial < 12; ++trial) {
      Vec3 x{coord(rng), coord(rng), coord(rng)};
      const double closed = manufactured_rhs(p, x);
      const double numeric = numeric_rhs(p, x);
      CHECK(std::fabs(closed - numeric) <=
            1e-6 * std::max({std::fabs(closed), std::fabs(numeric), 1.0}));
    }
  }
  SUBCASE("outside the ball is rejected") {
    FractionalDiffusionProblem p = ball_problem();
    CHECK_THROWS_AS(manufactured_rhs(p, Vec3{0.6, 0.0, 0.0}), Error);
  }
}

TEST_CASE("solver") {
  SUBCASE("identity system") {
    DiscreteSystem sys;
    const int n = 5;
    sys.matrix.rows = sys.matrix.cols_n = n;
    sys.matrix.row_ptr = {0, 1, 2, 3, 4, 5};
    sys.matrix.col = {0, 1, 2, 3, 4};
    sys.matrix.val.assign(n, 1.0);
    sys.rhs = {1, -2, 3, -4, 5};
    sys.free_to_vertex = {0, 1, 2, 3, 4};
    sys.vertex_to_free = {0, 1, 2, 3, 4};
    SolveResult r = solve(sys);
    for (int i = 0; i < n; ++i) CHECK(r.free_values[i] == doctest::Approx(sys.rhs[i]));
  }
  SUBCASE("classical Poisson against a dense direct reference") {
    SimplicialMesh mesh = generate_cube_mesh(4, 3);
    std::vector<OperatorTerm> terms;
    for (int i = 0; i < 3; ++i)
      terms.push_back(make_term(i, 1.0, Side::Left, 1.0,
                                [](const Vec3&) { return 1.0; }, +1.0));
    DiscreteSystem sys =
        assemble(mesh, terms, quadrature_rule(3, 2),
                 [](const Vec3& x) { return x[0] + 2.0 * x[1] * x[2]; },
                 DirichletPolicy::HomogeneousBoundary);
    SolveResult r = solve(sys, 1e-12, 500);
    CHECK(r.residual <= 1e-12);
    // Dense reference.
    const int n = sys.num_free();
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (int row = 0; row < n; ++row)
      for (std::int64_t idx = sys.matrix.row_ptr[row]; idx < sys.matrix.row_ptr[row + 1];
           ++idx)
        dense(row, sys.matrix.col[idx]) = sys.matrix.val[idx];
    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(sys.rhs.data(), n);
    Eigen::VectorXd want = dense.fullPivLu().solve(b);
    for (int i = 0; i < n; ++i)
      CHECK(std::fabs(r.free_values[i] - want(i)) <=
            1e-8 * std::max(1.0, want.norm()));
  }
  SUBCASE("zero diagonal is rejected") {
    DiscreteSystem sys;
    sys.matrix.rows = sys.matrix.cols_n = 2;
    sys.matrix.row_ptr = {0, 2, 4};
    sys.matrix.col = {0, 1, 0, 1};
    sys.matrix.val = {0.0, 1.0, 1.0, 0.0};
    sys.rhs = {1.0, 1.0};
    sys.free_to_vertex = {0, 1};
    sys.vertex_to_free = {0, 1};
    CHECK_THROWS_AS(solve(sys), Error);
  }
}

TEST_CASE("error norms") {
  SimplicialMesh mesh = generate_cube_mesh(4, 3);
  SUBCASE("P1-exact field has zero error") {
    auto u = [](const Vec3& x) { return 1.0 + 2.0 * x[0] - x[1] + 0.5 * x[2]; };
    std::vector<double> vals(mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v) vals[v] = u(mesh.vertex(v));
    ErrorNorms n = error_norms(mesh, vals, u);
    CHECK(n.l2 <= 1e-14);
    CHECK(n.linf <= 1e-14);
  }
  SUBCASE("quadratic interpolation error matches the analytic value") {
    // u = x0^2: on each element the interpolation error integral is an
    // exact barycentric polynomial integral.
    auto u = [](const Vec3& x) { return x[0] * x[0]; };
    std::vector<double> vals(mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v) vals[v] = u(mesh.vertex(v));
    ErrorNorms n = error_norms(mesh, vals, u);

    // Analytic: e = sum_l k_l v_l0^2 - (sum_l k_l v_l0)^2; integrate
    // e^2 by expanding into barycentric monomials per element.
    double l2sq = 0;
    for (int e = 0; e < mesh.num_simplices(); ++e) {
      const auto& s = mesh.simplex(e);
      double c[4];  // e = sum_{l<=m} c_lm k_l k_m, diag + cross handled below
      for (int l = 0; l < 4; ++l) c[l] = mesh.vertex(s[l])[0];
      // e(k) = sum_l k_l c_l^2 - (sum_l k_l c_l)^2
      //      = sum_{l<m} k_l k_m (c_l - c_m)^2  (using sum k = 1)
      // so e^2 = sum over pairs-of-pairs of products of 4 barycentrics.
      double pair_coeff[4][4];
      for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m)
          pair_coeff[l][m] = l < m ? (c[l] - c[m]) * (c[l] - c[m]) : 0.0;
      for (int l = 0; l < 4; ++l)
        for (int m = l + 1; m < 4; ++m)
          for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
              std::array<int, 4> pw{0, 0, 0, 0};
              ++pw[l];
              ++pw[m];
              ++pw[a];
              ++pw[b];
              l2sq += pair_coeff[l][m] * pair_coeff[a][b] *
                      oracles::barycentric_monomial_integral(3, pw, mesh.volume(e));
            }
    }
    CHECK(std::fabs(n.l2 * n.l2 - l2sq) <= 1e-10 * l2sq);
  }
  SUBCASE("norm inequality") {
    auto u = [](const Vec3& x) { return std::sin(3 * x[0]) * x[1]; };
    std::vector<double> vals(mesh.num_vertices(), 0.0);
    ErrorNorms n = error_norms(mesh, vals, u);
    CHECK(n.l2 >= 0);
    CHECK(n.linf >= 0);
    CHECK(n.l2 <= std::sqrt(mesh.total_volume()) * n.linf + 1e-12);
  }
}

TEST_CASE("coefficient positivity at quadrature points") {
  for (auto domain : {DomainKind::Cube, DomainKind::Ball}) {
    FractionalDiffusionProblem p = domain == DomainKind::Cube ? cube_problem()
                                                              : ball_problem();
    SimplicialMesh mesh = build_problem_mesh(p, 4);
    const QuadratureRule rule = quadrature_rule(3, 2);
    for (int e = 0; e < mesh.num_simplices(); ++e)
      for (int q = 0; q < rule.size(); ++q) {
        Vec3 xq{0, 0, 0};
        for (int l = 0; l < 4; ++l)
          for (int c = 0; c < 3; ++c)
            xq[c] += rule.points[q][l] * mesh.vertex(mesh.simplex(e)[l])[c];
        for (int i = 0; i < 3; ++i) {
          CHECK(coefficient_p(p, i, xq) > 0);
          CHECK(coefficient_q(p, i, xq) > 0);
        }
      }
  }
}

TEST_CASE("convergence study records, CSV, and Galerkin residual") {
  FractionalDiffusionProblem p = cube_problem(0.7, 0.7, 0.7);
  StudyOptions opt;
  opt.quadrature_degree = 2;
  opt.solver_tol = 1e-10;
  opt.output_dir = "/tmp/fracfem_test_study";
  std::system("mkdir -p /tmp/fracfem_test_study");

  SUBCASE("single level leaves orders empty") {
    auto records = convergence_study(p, {2}, opt);
    REQUIRE(records.size() == 1);
    CHECK(std::isnan(records[0].l2_order));
    CHECK(records[0].num_dofs == 1);
  }

  SUBCASE("two levels produce one order and the CSV matches the layout") {
    auto records = convergence_study(p, {2, 4}, opt);
    REQUIRE(records.size() == 2);
    CHECK(records[1].h < records[0].h);
    CHECK(!std::isnan(records[1].l2_order));
    CHECK(records[1].l2_error < records[0].l2_error);

    std::ifstream in("/tmp/fracfem_test_study/convergence.csv");
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "level,h,num_dofs,l2_error,l2_order,linf_error,linf_order,"
          "assembly_seconds,solve_seconds");
    std::string row0;
    std::getline(in, row0);
    CHECK(row0.substr(0, 2) == "0,");
    // First row has empty order fields.
    CHECK(row0.find(",,") != std::string::npos);

    std::ifstream vtk("/tmp/fracfem_test_study/solution_level0.vtk");
    REQUIRE(vtk.good());
    std::string line;
    std::getline(vtk, line);
    CHECK(line == "# vtk DataFile Version 3.0");
  }

  SUBCASE("Galerkin residual restatement") {
    SimplicialMesh mesh = build_problem_mesh(p, 3);
    DiscreteSystem sys =
        assemble(mesh, weak_form_terms(p), quadrature_rule(3, 2),
                 [&p](const Vec3& x) { return manufactured_rhs(p, x); },
                 DirichletPolicy::HomogeneousBoundary);
    SolveResult r = solve(sys, 1e-11, 2000);
    double bnorm = 0, rmax = 0;
    for (double v : sys.rhs) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    for (int row = 0; row < sys.num_free(); ++row) {
      double ax = 0;
      for (std::int64_t idx = sys.matrix.row_ptr[row]; idx < sys.matrix.row_ptr[row + 1];
           ++idx)
        ax += sys.matrix.val[idx] * r.free_values[sys.matrix.col[idx]];
      rmax = std::max(rmax, std::fabs(ax - sys.rhs[row]));
    }
    CHECK(rmax <= 1e-10 * bnorm);
  }
}

TEST_CASE("quadrature-order stability on the coarsest acceptance mesh") {
  FractionalDiffusionProblem p = cube_problem();
  StudyOptions o2, o3;
  o2.quadrature_degree = 2;
  o3.quadrature_degree = 3;
  const double e2 = convergence_study(p, {4}, o2)[0].l2_error;
  const double e3 = convergence_study(p, {4}, o3)[0].l2_error;
  CHECK(std::fabs(e2 - e3) / e3 < 0.10);
}
