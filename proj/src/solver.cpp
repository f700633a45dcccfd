#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <iostream>

#include "fracfem/problem.hpp"

namespace fracfem {

namespace {

using RowMajorSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

RowMajorSparse to_eigen(const CsrMatrix& m) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.col.size());
  for (int r = 0; r < m.rows; ++r)
    for (std::int64_t idx = m.row_ptr[r]; idx < m.row_ptr[r + 1]; ++idx)
      trips.emplace_back(r, m.col[idx], m.val[idx]);
  RowMajorSparse a(m.rows, m.cols_n);
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

double relative_residual(const RowMajorSparse& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
  const double bn = b.norm();
  if (bn == 0) return (a * x).norm();
  return (a * x - b).norm() / bn;
}

}  // namespace

SolveResult solve(const DiscreteSystem& system, double tol, int max_iter) {
  const int n = system.num_free();
  if (static_cast<std::int64_t>(system.rhs.size()) != n)
    fail(ErrorCode::InvalidArgument, "rhs size mismatch");
  if (tol <= 0 || max_iter < 1)
    fail(ErrorCode::InvalidArgument, "solver tolerance/max_iter invalid");

  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(system.rhs.data(), n);
  SolveResult result;
  result.free_values.assign(n, 0.0);
  if (b.norm() == 0) {
    result.method = "trivial";
    return result;
  }

  const RowMajorSparse a = to_eigen(system.matrix);
  for (int r = 0; r < n; ++r)
    if (system.matrix.value_at(r, r) == 0.0)
      fail(ErrorCode::Solver, "zero diagonal at row " + std::to_string(r));

  Eigen::VectorXd x;
  if (n <= 2000) {
    Eigen::MatrixXd dense(a);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense);
    x = lu.solve(b);
    result.method = "dense-lu";
    result.residual = relative_residual(a, x, b);
  } else {
    Eigen::BiCGSTAB<RowMajorSparse, Eigen::IncompleteLUT<double>> krylov;
    krylov.preconditioner().setDroptol(1e-4);
    krylov.preconditioner().setFillfactor(10);
    krylov.setTolerance(tol);
    krylov.setMaxIterations(max_iter);
    krylov.compute(a);
    if (krylov.info() != Eigen::Success)
      fail(ErrorCode::Solver, "preconditioner setup failed");
    x = krylov.solve(b);
    result.iterations = static_cast<int>(krylov.iterations());
    result.method = "bicgstab-ilut";
    result.residual = relative_residual(a, x, b);
    if (!(result.residual <= tol)) {
      // Krylov stagnated; fall through to a sparse direct solve.
      std::cerr << "fracfem: BiCGSTAB stalled at residual " << result.residual
                << ", switching to SparseLU\n";
      Eigen::SparseMatrix<double> acol(a);
      Eigen::SparseLU<Eigen::SparseMatrix<double>> slu(acol);
      if (slu.info() != Eigen::Success)
        fail(ErrorCode::Solver, "SparseLU factorization failed");
      x = slu.solve(b);
      result.method = "sparselu-fallback";
      result.residual = relative_residual(a, x, b);
    }
  }

  if (!(result.residual <= tol))
    fail(ErrorCode::Solver, "linear solve did not reach tolerance; achieved residual " +
                                std::to_string(result.residual));
  Eigen::Map<Eigen::VectorXd>(result.free_values.data(), n) = x;
  return result;
}

}  // namespace fracfem
