#include "oracles.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdlib>

namespace oracles {

using fracfem::SegmentHit;
using fracfem::Side;
using fracfem::SimplicialMesh;
using fracfem::Vec3;

unsigned long long test_seed() {
  if (const char* env = std::getenv("FRACFEM_SEED")) return std::strtoull(env, nullptr, 10);
  return 42;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa,
                     double b, double fb, double m, double fm, double whole, double tol,
                     int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int max_depth) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(a, fa, b, fb, fm);
  const double tol = rel_tol * std::max(std::fabs(whole), 1e-30);
  return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double integrate_tanh_sinh(const std::function<double(double, double, double)>& f,
                           double a, double b, int levels) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double t_max = 6.8;

  auto node_sum = [&](double h, bool odd_only) {
    double sum = 0;
    const int kmax = static_cast<int>(t_max / h);
    for (int k = odd_only ? 1 : 0; k <= kmax; k += odd_only ? 2 : 1) {
      for (int sign = k == 0 ? 1 : -1; sign <= 1; sign += 2) {
        const double t = sign * k * h;
        const double sh = 0.5 * M_PI * std::sinh(t);
        // 1 -+ tanh(sh) without cancellation: the distances to the
        // endpoints stay meaningful far into the tails.
        const double dist_a = half * 2.0 / (std::exp(-2.0 * sh) + 1.0);
        const double dist_b = half * 2.0 / (std::exp(2.0 * sh) + 1.0);
        if (dist_a <= 0 || dist_b <= 0) continue;
        const double ch = std::cosh(sh);
        const double w = half * 0.5 * M_PI * std::cosh(t) / (ch * ch);
        if (w == 0 || !std::isfinite(w)) continue;
        const double x = dist_a < dist_b ? a + dist_a : b - dist_b;
        const double fx = f(x, dist_a, dist_b);
        if (std::isfinite(fx)) sum += w * fx;
        if (k == 0) break;
      }
    }
    return sum;
  };

  double h = 1.0;
  double value = h * node_sum(h, false);
  for (int level = 1; level <= levels; ++level) {
    h *= 0.5;
    const double refined = 0.5 * value + h * node_sum(h, true);
    if (level > 3 && std::fabs(refined - value) <= 1e-14 * std::fabs(refined)) {
      return refined;
    }
    value = refined;
  }
  return value;
}

double terminal_derivative_fd(double gamma, double u, double v, double s, double c0,
                              double c1, Side side) {
  const double rg1 = 1.0 / std::tgamma(1.0 - gamma);
  auto psi = [&](double y) { return c0 + c1 * (y - u); };
  if (side == Side::Left) {
    auto kernel_integral = [&](double sigma) {
      return integrate_tanh_sinh(
          [&](double y, double, double db) { return std::pow(db, -gamma) * psi(y); },
          u, sigma);
    };
    auto central = [&](double d) {
      return (kernel_integral(s + d) - kernel_integral(s - d)) / (2.0 * d);
    };
    const double d = 3e-3 * (s - u);
    return rg1 * (4.0 * central(0.5 * d) - central(d)) / 3.0;
  }
  auto kernel_integral = [&](double sigma) {
    return integrate_tanh_sinh(
        [&](double y, double da, double) { return std::pow(da, -gamma) * psi(y); },
        sigma, v);
  };
  auto central = [&](double d) {
    return (kernel_integral(s + d) - kernel_integral(s - d)) / (2.0 * d);
  };
  const double d = 3e-3 * (v - s);
  return -rg1 * (4.0 * central(0.5 * d) - central(d)) / 3.0;
}

double terminal_derivative_substitution(double gamma, double u, double v, double s,
                                        double c0, double c1, Side side) {
  const double rg1 = 1.0 / std::tgamma(1.0 - gamma);
  if (side == Side::Left) {
    // I(s) = int_0^{s-u} t^{-g} psi(s-t) dt; d/ds = (s-u)^{-g} psi(u)
    // + int_0^{s-u} t^{-g} psi'(s-t) dt.
    const double span = s - u;
    const double slope_int = integrate_tanh_sinh(
        [&](double, double da, double) { return std::pow(da, -gamma) * c1; }, 0.0,
        span);
    return rg1 * (std::pow(span, -gamma) * c0 + slope_int);
  }
  // Right side: psi anchored at u == s; the far endpoint value is
  // psi(v) = c0 + c1 (v - u).
  const double span = v - s;
  const double d0 = c0 + c1 * (v - u);
  const double slope_int = integrate_tanh_sinh(
      [&](double, double da, double) { return std::pow(da, -gamma) * c1; }, 0.0, span);
  return rg1 * (std::pow(span, -gamma) * d0 - slope_int);
}

double interior_derivative_quadrature(double gamma, double u, double v, double s,
                                      double c0, double c1, Side side) {
  const double rg1 = 1.0 / std::tgamma(1.0 - gamma);
  if (side == Side::Left) {
    return -gamma * rg1 *
           integrate_adaptive(
               [&](double y) {
                 return std::pow(s - y, -gamma - 1.0) * (c0 + c1 * (y - u));
               },
               u, v);
  }
  return -gamma * rg1 *
         integrate_adaptive(
             [&](double y) {
               return std::pow(y - s, -gamma - 1.0) * (c0 + c1 * (y - u));
             },
             u, v);
}

std::vector<SegmentHit> brute_force_path(const SimplicialMesh& mesh, const Vec3& point,
                                         int axis, Side side) {
  fracfem::RayQuery query;
  query.origin = point;
  query.direction = {0, 0, 0};
  query.direction[axis] = side == Side::Left ? -1.0 : 1.0;
  std::vector<SegmentHit> hits;
  for (int e = 0; e < mesh.num_simplices(); ++e)
    if (auto h = fracfem::ray_simplex_intersect(mesh, e, query)) hits.push_back(*h);
  std::sort(hits.begin(), hits.end(),
            [](const SegmentHit& a, const SegmentHit& b) { return a.r_min < b.r_min; });
  return hits;
}

std::vector<std::vector<double>> textbook_stiffness(const SimplicialMesh& mesh) {
  const int nv = mesh.num_vertices();
  const int n = mesh.dim();
  std::vector<std::vector<double>> k(nv, std::vector<double>(nv, 0.0));
  for (int e = 0; e < mesh.num_simplices(); ++e) {
    const auto& s = mesh.simplex(e);
    Eigen::MatrixXd m(n + 1, n + 1);
    for (int l = 0; l <= n; ++l) {
      m(l, 0) = 1.0;
      for (int c = 0; c < n; ++c) m(l, c + 1) = mesh.vertex(s[l])[c];
    }
    const Eigen::MatrixXd coeffs = m.fullPivLu().inverse();
    // Column l of coeffs holds the affine coefficients of phi_l;
    // rows 1..n are the gradient.
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) {
        double dot = 0;
        for (int c = 1; c <= n; ++c) dot += coeffs(c, a) * coeffs(c, b);
        k[s[a]][s[b]] += mesh.volume(e) * dot;
      }
  }
  return k;
}

double barycentric_monomial_integral(int dim, const std::array<int, 4>& powers,
                                     double volume) {
  auto factorial = [](int n) {
    double r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
  };
  int total = 0;
  double num = factorial(dim);
  for (int l = 0; l <= dim; ++l) {
    total += powers[l];
    num *= factorial(powers[l]);
  }
  return volume * num / factorial(dim + total);
}

double numeric_fractional_derivative(const std::function<double(Vec3)>& u, const Vec3& x,
                                     int axis, double beta, double chord_a,
                                     double chord_b, Side side, double fd_step) {
  const double rg1 = 1.0 / std::tgamma(1.0 - beta);
  auto du = [&](double yi) {
    Vec3 yp = x, ym = x;
    yp[axis] = yi + fd_step;
    ym[axis] = yi - fd_step;
    return (u(yp) - u(ym)) / (2.0 * fd_step);
  };
  if (side == Side::Left) {
    return rg1 * integrate_tanh_sinh(
                     [&](double y, double, double db) {
                       return std::pow(db, -beta) * du(y);
                     },
                     chord_a, x[axis]);
  }
  return -rg1 * integrate_tanh_sinh(
                    [&](double y, double da, double) {
                      return std::pow(da, -beta) * du(y);
                    },
                    x[axis], chord_b);
}

}  // namespace oracles
