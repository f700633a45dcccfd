#pragma once

#include <vector>

#include "fracfem/raypath.hpp"

namespace fracfem {

/// One Riemann-Liouville operator: order gamma in (0,1], side, and the
/// coordinate direction it acts along. gamma == 1 selects the
/// classical derivative, which bypasses path integrals.
struct FractionalOrder {
  double gamma = 0.5;
  Side side = Side::Left;
  int direction = 0;  // 0-based axis

  bool classical() const { return gamma == 1.0; }
};

/// Trace of one P1 basis function over one chord segment: i-th
/// coordinates u < v of the endpoints and the basis values there.
/// Left side has v <= s, right side s <= u, s the evaluation
/// coordinate.
struct SegmentBasisTrace {
  double u = 0;
  double v = 0;
  double psi_u = 0;
  double psi_v = 0;
};

/// Euler Gamma for x > 0.
double gamma_function(double x);

/// Contribution of a segment not touching the evaluation point:
/// (1/Gamma(1-g)) d/ds of the kernel integral over [u,v], psi linear.
/// Evaluated through the differentiated kernel -g (s-y)^{-g-1}, in a
/// cancellation-safe expm1/log1p form.
double segment_contribution_interior(const FractionalOrder& order,
                                     const SegmentBasisTrace& seg, double s);

/// Contribution of the segment whose endpoint is the evaluation point
/// (v == s on the left, u == s on the right).
double segment_contribution_terminal(const FractionalOrder& order,
                                     const SegmentBasisTrace& seg, double s);

/// Fractional derivative of one local basis function accumulated over
/// the whole path.
double eval_fractional_derivative(const FractionalOrder& order,
                                  const IntegrationPath& path,
                                  const SimplicialMesh& mesh, int element,
                                  int local_basis);

/// All nonzero global basis contributions along the path, consolidated
/// per global vertex id and sorted by id.
std::vector<std::pair<int, double>> eval_all_local_basis(const FractionalOrder& order,
                                                         const IntegrationPath& path,
                                                         const SimplicialMesh& mesh);

/// Constant gradient component of a P1 basis on an element.
double derivative_classical(const SimplicialMesh& mesh, int element, int local_basis,
                            int direction);

}  // namespace fracfem
