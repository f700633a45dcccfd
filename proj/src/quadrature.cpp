#include "fracfem/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace fracfem {

void gauss_jacobi_01(int n, double alpha, std::vector<double>* nodes,
                     std::vector<double>* weights) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "quadrature order must be >= 1");
  if (alpha < 0) fail(ErrorCode::InvalidArgument, "Jacobi exponent must be >= 0");

  // Jacobi (alpha, 0) recurrence on [-1,1], symmetrized tridiagonal
  // (Golub-Welsch). mu0 = 2^(alpha+1)/(alpha+1) is the zeroth moment.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha;  // alpha + beta with beta = 0
  for (int k = 0; k < n; ++k) {
    const double den = (2 * k + ab) * (2 * k + ab + 2);
    jac(k, k) = den == 0 ? 0 : -alpha * alpha / den;
    if (k > 0) {
      const double num = 4.0 * k * (k + alpha) * k * (k + ab);
      const double d2 = (2 * k + ab) * (2 * k + ab);
      const double off = std::sqrt(num / (d2 * (2 * k + ab + 1) * (2 * k + ab - 1)));
      jac(k, k - 1) = off;
      jac(k - 1, k) = off;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  if (es.info() != Eigen::Success)
    fail(ErrorCode::Internal, "Gauss-Jacobi eigensolve failed");
  const double mu0 = std::pow(2.0, alpha + 1) / (alpha + 1);

  nodes->resize(n);
  weights->resize(n);
  for (int k = 0; k < n; ++k) {
    const double t = es.eigenvalues()(k);          // node on [-1,1]
    const double w = mu0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
    // Map to [0,1] with weight (1-x)^alpha: x = (1+t)/2 absorbs
    // a factor (1/2)^(alpha+1).
    (*nodes)[k] = 0.5 * (1.0 + t);
    (*weights)[k] = w * std::pow(0.5, alpha + 1);
  }
}

namespace {

QuadratureRule conical_rule(int dim, int n_axis, int degree) {
  QuadratureRule rule;
  rule.dim = dim;
  rule.degree = degree;

  std::vector<double> x1, w1, x2, w2, x3, w3;
  if (dim == 2) {
    gauss_jacobi_01(n_axis, 1.0, &x1, &w1);
    gauss_jacobi_01(n_axis, 0.0, &x2, &w2);
    for (int a = 0; a < n_axis; ++a)
      for (int b = 0; b < n_axis; ++b) {
        const double u = x1[a], v = x2[b] * (1.0 - x1[a]);
        rule.points.push_back({1.0 - u - v, u, v, 0.0});
        rule.weights.push_back(w1[a] * w2[b]);
      }
    return rule;
  }
  gauss_jacobi_01(n_axis, 2.0, &x1, &w1);
  gauss_jacobi_01(n_axis, 1.0, &x2, &w2);
  gauss_jacobi_01(n_axis, 0.0, &x3, &w3);
  for (int a = 0; a < n_axis; ++a)
    for (int b = 0; b < n_axis; ++b)
      for (int c = 0; c < n_axis; ++c) {
        const double u = x1[a];
        const double v = x2[b] * (1.0 - u);
        const double w = x3[c] * (1.0 - u) * (1.0 - x2[b]);
        rule.points.push_back({1.0 - u - v - w, u, v, w});
        rule.weights.push_back(w1[a] * w2[b] * w3[c]);
      }
  return rule;
}

}  // namespace

QuadratureRule quadrature_rule(int dim, int degree) {
  if (dim != 2 && dim != 3)
    fail(ErrorCode::InvalidArgument, "quadrature dimension must be 2 or 3");
  if (degree < 1 || degree > 4)
    fail(ErrorCode::InvalidArgument, "quadrature degree must be in 1..4");

  QuadratureRule rule;
  rule.dim = dim;
  rule.degree = degree;
  const double ref_vol = dim == 2 ? 0.5 : 1.0 / 6.0;

  if (degree == 1) {
    const double c = 1.0 / (dim + 1);
    rule.points.push_back({c, c, c, dim == 2 ? 0.0 : c});
    rule.weights.push_back(ref_vol);
    return rule;
  }
  if (degree == 2) {
    // Symmetric interior (n+1)-point rule: permutations of
    // (a, b, ..., b) with a + n b = 1.
    const int n = dim;
    const double a = dim == 2 ? 2.0 / 3.0 : 0.5854101966249685;
    const double b = (1.0 - a) / n;
    for (int l = 0; l <= n; ++l) {
      std::array<double, 4> p{b, b, b, dim == 2 ? 0.0 : b};
      p[l] = a;
      rule.points.push_back(p);
      rule.weights.push_back(ref_vol / (n + 1));
    }
    return rule;
  }
  return conical_rule(dim, degree == 3 ? 2 : 3, degree);
}

}  // namespace fracfem
