#pragma once

// Independent numerical oracles for the tests: Boost Gauss-Kronrod quadrature, bisection on
// domain defining inequalities, and direct polar quadrature on disks.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

/// Adaptive 61-point Gauss-Kronrod on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-14, unsigned max_depth = 6) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, tol);
}

/// Integral of f over the disk of radius r: Gauss-Kronrod in the radius, trapezoid in the angle
/// (spectrally accurate for smooth periodic integrands).
inline double disk_integral(const std::function<double(cplx)>& f, double r, int n_angle = 256) {
  return integrate(
      [&](double rho) {
        double s = 0.0;
        for (int k = 0; k < n_angle; ++k) s += f(std::polar(rho, 2.0 * kPi * k / n_angle));
        return rho * s * 2.0 * kPi / n_angle;
      },
      0.0, r, 1e-13);
}

inline cplx disk_integral_c(const std::function<cplx(cplx)>& f, double r, int n_angle = 256) {
  return {disk_integral([&](cplx z) { return f(z).real(); }, r, n_angle),
          disk_integral([&](cplx z) { return f(z).imag(); }, r, n_angle)};
}

/// Defining inequality of a complete Reinhardt domain in terms of (|z|, |w|).
using Membership = std::function<bool(double, double)>;

inline Membership bidisk_member(double rz, double rw) {
  return [=](double x, double y) { return x < rz && y < rw; };
}
inline Membership ball_member(double big_r) {
  return [=](double x, double y) { return x * x + y * y < big_r * big_r; };
}
inline Membership intersection_member(double rz, double rw, double big_r) {
  return [=](double x, double y) { return x < rz && y < rw && x * x + y * y < big_r * big_r; };
}

/// sup{|z| : (z, w) in Omega, |w| = y} by bisection on the defining inequality.
inline double slice_radius(const Membership& in, double y, double x_hi = 10.0) {
  if (!in(0.0, y)) return 0.0;
  double lo = 0.0, hi = x_hi;
  for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
    const double mid = 0.5 * (lo + hi);
    (in(mid, y) ? lo : hi) = mid;
  }
  return lo;
}

/// Positive root of x^2 + y^2 = R^2 in x (the sphere constraint), by Boost bisection.
inline double sphere_root(double big_r, double y) {
  auto f = [&](double x) { return x * x + y * y - big_r * big_r; };
  auto tol = boost::math::tools::eps_tolerance<double>(52);
  const auto [lo, hi] = boost::math::tools::bisect(f, 0.0, big_r, tol);
  return 0.5 * (lo + hi);
}

/// mu(p, q) = int_Omega |z|^p |w|^q dV = (2 pi)^2 int_0^{y_max} int_0^{r(y)} x^{p+1} y^{q+1} dx dy
/// with r(y) from bisection; the y range is split at the given breakpoints.
inline double moment(const Membership& in, double y_max, int p, int q,
                     const std::vector<double>& breaks = {}) {
  auto outer = [&](double y) {
    const double r = slice_radius(in, y);
    return std::pow(y, q + 1) * std::pow(r, p + 2) / (p + 2);
  };
  std::vector<double> cuts{0.0};
  cuts.insert(cuts.end(), breaks.begin(), breaks.end());
  cuts.push_back(y_max);
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) s += integrate(outer, cuts[k], cuts[k + 1], 1e-15);
  return 4.0 * kPi * kPi * s;
}

/// Bergman kernel of D_r as a truncated series sum (n + 1) (z conj(xi))^n / (pi r^{2n+4}).
inline cplx kernel_series(double r, cplx z, cplx xi, int terms = 4000) {
  cplx s{}, t = 1.0;
  const cplx q = z * std::conj(xi) / (r * r);
  for (int n = 0; n < terms; ++n) {
    s += static_cast<double>(n + 1) * t;
    t *= q;
  }
  return s / (kPi * r * r);
}

}  // namespace oracle
