#pragma once

#include <array>
#include <vector>

#include "fracfem/common.hpp"

namespace fracfem {

/// Quadrature rule on the reference simplex {x >= 0, sum x <= 1}.
/// Points are volume coordinates (k_0, ..., k_n), strictly interior;
/// weights are positive and sum to the reference volume (1/2 or 1/6).
struct QuadratureRule {
  int dim = 0;
  int degree = 0;
  std::vector<std::array<double, 4>> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Rules by exactness degree (1..4). Degree 1 is the centroid rule,
/// degree 2 the symmetric (n+1)-point interior rule, degrees 3 and 4
/// conical-product Gauss-Jacobi rules.
QuadratureRule quadrature_rule(int dim, int degree);

/// Gauss-Jacobi nodes/weights on [0,1] for the weight (1-x)^alpha,
/// alpha >= 0 (alpha = 0 is Gauss-Legendre). Golub-Welsch construction.
void gauss_jacobi_01(int n, double alpha, std::vector<double>* nodes,
                     std::vector<double>* weights);

}  // namespace fracfem
