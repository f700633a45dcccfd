#include "fracfem/fracops.hpp"

#include <algorithm>
#include <cmath>

namespace fracfem {

double gamma_function(double x) {
  if (!(x > 0)) fail(ErrorCode::InvalidArgument, "gamma_function requires x > 0");
  return std::tgamma(x);
}

namespace {

void check_fractional(const FractionalOrder& order) {
  if (!(order.gamma > 0 && order.gamma < 1))
    fail(ErrorCode::InvalidArgument,
         "segment kernels require 0 < gamma < 1; gamma = 1 is the classical case");
}

// Shared per-segment factors; the per-basis evaluation is then linear
// in the anchored endpoint value and the slope.
struct SegmentKernel {
  double f0 = 0;  // multiplies the anchored endpoint value
  double f1 = 0;  // multiplies the slope c1 = (psi_v - psi_u)/(v - u)
  bool anchor_is_u = true;
};

SegmentKernel terminal_kernel(double gamma, double rgamma1, double span, Side side) {
  SegmentKernel k;
  const double ag = std::pow(span, -gamma);
  k.f0 = rgamma1 * ag;
  k.f1 = rgamma1 * span * ag / (1.0 - gamma);
  if (side == Side::Right) {
    // Anchored at psi(v); the (-1)^m right-derivative convention is
    // folded in.
    k.f1 = -k.f1;
    k.anchor_is_u = false;
  }
  return k;
}

// near = distance from s to the closer endpoint, len = v - u. Both
// sides are anchored at psi(u).
SegmentKernel interior_kernel(double gamma, double rgamma1, double near, double len,
                              Side side) {
  SegmentKernel k;
  const double t = std::log1p(len / near);
  const double em_g = std::expm1(-gamma * t);
  const double em_1g = std::expm1((1.0 - gamma) * t);
  const double ng = std::pow(near, -gamma);
  k.f0 = rgamma1 * ng * em_g;
  if (side == Side::Left) {
    // near = s - v: f0 = (s-u)^{-g} - (s-v)^{-g}.
    k.f1 = rgamma1 * (near * ng * em_1g / (1.0 - gamma) - len * ng);
  } else {
    // near = u - s: f0 = (v-s)^{-g} - (u-s)^{-g}.
    const double fg = std::pow(near + len, -gamma);
    k.f1 = rgamma1 * (len * fg - near * ng * em_1g / (1.0 - gamma));
  }
  return k;
}

double apply(const SegmentKernel& k, double psi_u, double psi_v, double len) {
  const double c1 = (psi_v - psi_u) / len;
  const double anchor = k.anchor_is_u ? psi_u : psi_v;
  return anchor * k.f0 + c1 * k.f1;
}

}  // namespace

double segment_contribution_interior(const FractionalOrder& order,
                                     const SegmentBasisTrace& seg, double s) {
  check_fractional(order);
  if (!(seg.u < seg.v))
    fail(ErrorCode::InvalidArgument, "segment needs u < v");
  const double rg1 = 1.0 / std::tgamma(1.0 - order.gamma);
  const double len = seg.v - seg.u;
  double near;
  if (order.side == Side::Left) {
    near = s - seg.v;
    if (!(near > 0))
      fail(ErrorCode::InvalidArgument,
           "interior segment touches the evaluation point; use the terminal form");
  } else {
    near = seg.u - s;
    if (!(near > 0))
      fail(ErrorCode::InvalidArgument,
           "interior segment touches the evaluation point; use the terminal form");
  }
  return apply(interior_kernel(order.gamma, rg1, near, len, order.side), seg.psi_u,
               seg.psi_v, len);
}

double segment_contribution_terminal(const FractionalOrder& order,
                                     const SegmentBasisTrace& seg, double s) {
  check_fractional(order);
  if (!(seg.u < seg.v))
    fail(ErrorCode::InvalidArgument, "segment needs u < v");
  const double rg1 = 1.0 / std::tgamma(1.0 - order.gamma);
  const double len = seg.v - seg.u;
  if (order.side == Side::Left) {
    if (std::fabs(seg.v - s) > 1e-12 * std::max(1.0, std::fabs(s)))
      fail(ErrorCode::InvalidArgument, "terminal segment must end at s");
    if (!(s - seg.u > 0)) fail(ErrorCode::InvalidArgument, "terminal span must be positive");
    return apply(terminal_kernel(order.gamma, rg1, s - seg.u, Side::Left), seg.psi_u,
                 seg.psi_v, len);
  }
  if (std::fabs(seg.u - s) > 1e-12 * std::max(1.0, std::fabs(s)))
    fail(ErrorCode::InvalidArgument, "terminal segment must start at s");
  if (!(seg.v - s > 0)) fail(ErrorCode::InvalidArgument, "terminal span must be positive");
  return apply(terminal_kernel(order.gamma, rg1, seg.v - s, Side::Right), seg.psi_u,
               seg.psi_v, len);
}

namespace {

void check_path_match(const FractionalOrder& order, const IntegrationPath& path) {
  if (order.side != path.side || order.direction != path.direction)
    fail(ErrorCode::InvalidArgument, "operator order and path side/direction mismatch");
}

// Per-segment geometry shared by both evaluators.
struct SegmentGeometry {
  SegmentKernel kernel;
  double len = 0;
  // Which stored endpoint (k_min or k_max) is u, i.e. the smaller
  // coordinate. Left rays run toward smaller coordinates, so k_max is
  // the u end there.
  bool u_is_kmax = true;
};

SegmentGeometry segment_geometry(const FractionalOrder& order, const SegmentHit& hit,
                                 double rg1, bool terminal) {
  SegmentGeometry g;
  g.len = hit.r_max - hit.r_min;
  g.u_is_kmax = order.side == Side::Left;
  if (terminal)
    g.kernel = terminal_kernel(order.gamma, rg1, hit.r_max, order.side);
  else
    g.kernel = interior_kernel(order.gamma, rg1, hit.r_min, g.len, order.side);
  return g;
}

}  // namespace

double eval_fractional_derivative(const FractionalOrder& order,
                                  const IntegrationPath& path,
                                  const SimplicialMesh& mesh, int element,
                                  int local_basis) {
  check_fractional(order);
  check_path_match(order, path);
  const int gid = mesh.simplex(element)[local_basis];
  double total = 0;
  const double rg1 = 1.0 / std::tgamma(1.0 - order.gamma);
  for (std::size_t m = 0; m < path.segments.size(); ++m) {
    const SegmentHit& hit = path.segments[m];
    const auto& sv = mesh.simplex(hit.simplex);
    int local = -1;
    for (int l = 0; l <= mesh.dim(); ++l)
      if (sv[l] == gid) local = l;
    if (local < 0) continue;  // basis vanishes on this segment
    const SegmentGeometry g = segment_geometry(order, hit, rg1, m == 0);
    const double psi_u = g.u_is_kmax ? hit.k_max[local] : hit.k_min[local];
    const double psi_v = g.u_is_kmax ? hit.k_min[local] : hit.k_max[local];
    total += apply(g.kernel, psi_u, psi_v, g.len);
  }
  return total;
}

std::vector<std::pair<int, double>> eval_all_local_basis(const FractionalOrder& order,
                                                         const IntegrationPath& path,
                                                         const SimplicialMesh& mesh) {
  check_fractional(order);
  check_path_match(order, path);
  const double rg1 = 1.0 / std::tgamma(1.0 - order.gamma);
  std::vector<std::pair<int, double>> raw;
  raw.reserve(path.segments.size() * (mesh.dim() + 1));
  for (std::size_t m = 0; m < path.segments.size(); ++m) {
    const SegmentHit& hit = path.segments[m];
    const SegmentGeometry g = segment_geometry(order, hit, rg1, m == 0);
    const auto& sv = mesh.simplex(hit.simplex);
    for (int l = 0; l <= mesh.dim(); ++l) {
      const double psi_u = g.u_is_kmax ? hit.k_max[l] : hit.k_min[l];
      const double psi_v = g.u_is_kmax ? hit.k_min[l] : hit.k_max[l];
      raw.emplace_back(sv[l], apply(g.kernel, psi_u, psi_v, g.len));
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<int, double>> out;
  out.reserve(raw.size());
  for (const auto& [gid, val] : raw) {
    if (!out.empty() && out.back().first == gid)
      out.back().second += val;
    else
      out.emplace_back(gid, val);
  }
  return out;
}

double derivative_classical(const SimplicialMesh& mesh, int element, int local_basis,
                            int direction) {
  return mesh.basis_gradient(element, local_basis)[direction];
}

}  // namespace fracfem
