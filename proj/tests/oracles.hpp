#pragma once

// Test-only reference implementations, independent of the production
// code paths they check.

#include <functional>
#include <random>
#include <vector>

#include "fracfem/mesh.hpp"
#include "fracfem/raypath.hpp"

namespace oracles {

// Seed for randomized tests; FRACFEM_SEED overrides the default 42.
unsigned long long test_seed();

// Adaptive Simpson for smooth (possibly steep) integrands.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-13, int max_depth = 60);

// tanh-sinh quadrature; handles integrable endpoint singularities.
// The integrand receives (x, x - a, b - x) with the endpoint
// distances computed cancellation-free, so kernels like
// (b - x)^{-gamma} stay accurate arbitrarily close to the endpoint.
double integrate_tanh_sinh(const std::function<double(double, double, double)>& f,
                           double a, double b, int levels = 12);

// Terminal-segment derivative by Richardson-extrapolated central
// differences of tanh-sinh kernel integrals; psi(y) = c0 + c1 (y - u)
// is held fixed. Left side expects v == s, right side u == s.
// Noise-limited to roughly 1e-7 relative.
double terminal_derivative_fd(double gamma, double u, double v, double s, double c0,
                              double c1, fracfem::Side side);

// Terminal-segment derivative via the substitution t = |s - y|:
// Leibniz boundary term plus numerical quadrature of the slope
// integral. Accurate to ~1e-12 relative.
double terminal_derivative_substitution(double gamma, double u, double v, double s,
                                        double c0, double c1, fracfem::Side side);

// -gamma/Gamma(1-gamma) * integral over the segment of the
// differentiated kernel; smooth integrand, adaptive quadrature.
double interior_derivative_quadrature(double gamma, double u, double v, double s,
                                      double c0, double c1, fracfem::Side side);

// All-element ray intersection, sorted by entry parameter.
std::vector<fracfem::SegmentHit> brute_force_path(const fracfem::SimplicialMesh& mesh,
                                                  const fracfem::Vec3& point, int axis,
                                                  fracfem::Side side);

// Dense textbook P1 stiffness matrix sum_E vol (grad phi_i . grad
// phi_j), gradients from an independent (n+1)x(n+1) solve per element.
std::vector<std::vector<double>> textbook_stiffness(const fracfem::SimplicialMesh& mesh);

// Exact integral of a barycentric monomial over a simplex of volume
// `volume`: V n! prod(a_l!) / (n + sum a_l)!.
double barycentric_monomial_integral(int dim, const std::array<int, 4>& powers,
                                     double volume);

// Numeric left/right RL derivative of a smooth function along axis i
// with u(chord endpoint) = 0, via the integrated-by-parts form and
// tanh-sinh quadrature.
double numeric_fractional_derivative(const std::function<double(fracfem::Vec3)>& u,
                                     const fracfem::Vec3& x, int axis, double beta,
                                     double chord_a, double chord_b, fracfem::Side side,
                                     double fd_step);

}  // namespace oracles
