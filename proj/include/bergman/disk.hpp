#pragma once

// One-variable Bergman-space computations on the disks D_r = {|z| < r}.
//
// Functions are finite sums  sum c * z^a * conj(z)^b.  Every inner product reduces to
//   int_{D_r} |z|^{2k} dV = pi r^{2k+2} / (k+1),
// so projections, Hankel forms and Gram values are exact up to rounding.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bergman/error.hpp"

namespace bergman {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

/// Finite sum of c * z^a * conj(z)^b on D_radius; at most one term per (a, b), no zero terms.
class DiskFunction {
public:
  using Key = std::pair<int, int>;

  DiskFunction() = default;
  explicit DiskFunction(double radius) : radius_(radius) {}

  static DiskFunction monomial(int a, int b, cplx coeff = 1.0, double radius = 1.0) {
    DiskFunction f(radius);
    f.add(a, b, coeff);
    return f;
  }
  static DiskFunction constant(cplx c, double radius = 1.0) { return monomial(0, 0, c, radius); }

  double radius() const { return radius_; }
  DiskFunction with_radius(double r) const {
    DiskFunction f = *this;
    f.radius_ = r;
    return f;
  }

  const std::map<Key, cplx>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  cplx coefficient(int a, int b) const {
    auto it = terms_.find({a, b});
    return it == terms_.end() ? cplx{} : it->second;
  }

  DiskFunction& add(int a, int b, cplx c) {
    if (a < 0 || b < 0) fail(ErrorCode::InvalidArgument, "negative exponent in disk function");
    if (c == cplx{}) return *this;
    auto [it, inserted] = terms_.try_emplace({a, b}, c);
    if (!inserted) {
      it->second += c;
      if (it->second == cplx{}) terms_.erase(it);
    }
    return *this;
  }

  /// Holomorphic: no conj(z) factors.
  bool is_holomorphic() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.second == 0; });
  }
  /// Harmonic in the polynomial class: every term is z^a or conj(z)^b.
  bool is_harmonic() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.first.first == 0 || t.first.second == 0; });
  }

  cplx operator()(cplx z) const {
    cplx s{};
    for (const auto& [k, c] : terms_) s += c * std::pow(z, k.first) * std::pow(std::conj(z), k.second);
    return s;
  }

  DiskFunction conj() const {
    DiskFunction f(radius_);
    for (const auto& [k, c] : terms_) f.add(k.second, k.first, std::conj(c));
    return f;
  }

  DiskFunction& operator+=(const DiskFunction& o) {
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, c);
    return *this;
  }
  DiskFunction& operator-=(const DiskFunction& o) {
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, -c);
    return *this;
  }
  DiskFunction& operator*=(cplx s) {
    if (s == cplx{}) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

  friend DiskFunction operator+(DiskFunction a, const DiskFunction& b) { return a += b; }
  friend DiskFunction operator-(DiskFunction a, const DiskFunction& b) { return a -= b; }
  friend DiskFunction operator*(DiskFunction a, cplx s) { return a *= s; }
  friend DiskFunction operator*(const DiskFunction& a, const DiskFunction& b) {
    DiskFunction f(a.radius_);
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) f.add(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return f;
  }

  friend bool operator==(const DiskFunction& a, const DiskFunction& b) { return a.terms_ == b.terms_; }

private:
  std::map<Key, cplx> terms_;
  double radius_ = 1.0;
};

/// int_{rho_in < |z| < rho_out} |z|^{2k} dV.
inline double radial_moment(int k, double rho_out, double rho_in = 0.0) {
  const double e = 2.0 * k + 2.0;
  return kPi * (std::pow(rho_out, e) - std::pow(rho_in, e)) / (k + 1);
}

/// <f, g> over the annulus rho_in < |z| < rho_out (a disk when rho_in = 0).
inline cplx disk_inner(const DiskFunction& f, const DiskFunction& g, double rho_out,
                       double rho_in = 0.0) {
  cplx s{};
  for (const auto& [kf, cf] : f.terms())
    for (const auto& [kg, cg] : g.terms()) {
      // z^{a_f + b_g} conj(z)^{b_f + a_g} survives angular integration only when balanced.
      if (kf.first + kg.second != kf.second + kg.first) continue;
      s += cf * std::conj(cg) * radial_moment(kf.first + kg.second, rho_out, rho_in);
    }
  return s;
}

inline double disk_norm_sq(const DiskFunction& f, double rho_out, double rho_in = 0.0) {
  return disk_inner(f, f, rho_out, rho_in).real();
}

/// Bergman kernel of D_r: r^2 / (pi (r^2 - z conj(xi))^2).
inline cplx disk_kernel(double r, cplx z, cplx xi) {
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "disk radius must be positive");
  const cplx d = r * r - z * std::conj(xi);
  if (std::abs(d) < 1e-14) fail(ErrorCode::PoleProximity, "r^2 - z conj(xi) vanishes");
  return r * r / (kPi * d * d);
}

/// Bergman projection on D_r: z^a conj(z)^b -> ((a-b+1)/(a+1)) r^{2b} z^{a-b} for a >= b, else 0.
inline DiskFunction disk_project(double r, const DiskFunction& f) {
  DiskFunction out(r);
  for (const auto& [k, c] : f.terms()) {
    const auto [a, b] = k;
    if (a < b) continue;
    if (b == 0) {
      out.add(a, 0, c);
      continue;
    }
    out.add(a - b, 0, c * (static_cast<double>(a - b + 1) / (a + 1)) * std::pow(r, 2.0 * b));
  }
  return out;
}

/// H_phi f = phi f - P(phi f) on D_r.
inline DiskFunction disk_hankel(double r, const DiskFunction& phi, const DiskFunction& f) {
  const DiskFunction prod = phi * f;
  return prod - disk_project(r, prod);
}

inline void require_holomorphic(const DiskFunction& f, const char* what) {
  if (!f.is_holomorphic())
    fail(ErrorCode::NotHolomorphic, std::string(what) + " must be a holomorphic polynomial");
}

/// <H_phi f1, H_psi f2>_{D_r} = <phi f1, psi f2> - <P(phi f1), P(psi f2)>.
inline cplx disk_hankel_gram(double r, const DiskFunction& phi, const DiskFunction& f1,
                             const DiskFunction& psi, const DiskFunction& f2) {
  require_holomorphic(f1, "f1");
  require_holomorphic(f2, "f2");
  const DiskFunction a = phi * f1, b = psi * f2;
  return disk_inner(a, b, r) - disk_inner(disk_project(r, a), disk_project(r, b), r);
}

/// Normalised monomial e_n = z^n / ||z^n||_{D_r}.
inline DiskFunction disk_basis(double r, int n) {
  return DiskFunction::monomial(n, 0, 1.0 / std::sqrt(radial_moment(n, r)), r);
}

/// N x N section of H_psi^* H_phi on A^2(D_r): entry (j, k) = <H_phi e_k, H_psi e_j>.
inline Eigen::MatrixXcd disk_hankel_product_section(double r, const DiskFunction& phi,
                                                    const DiskFunction& psi, int n) {
  Eigen::MatrixXcd m(n, n);
  std::vector<DiskFunction> hphi, hpsi;
  for (int k = 0; k < n; ++k) {
    hphi.push_back(disk_hankel(r, phi, disk_basis(r, k)));
    hpsi.push_back(disk_hankel(r, psi, disk_basis(r, k)));
  }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) m(j, k) = disk_inner(hphi[k], hpsi[j], r);
  return m;
}

/// Operator norm of the N x N section of H_psi^* H_phi on A^2(D_r). Symbols must be harmonic
/// polynomials; the product vanishes when either symbol is holomorphic and is nonzero otherwise.
inline double zheng_product_norm(double r, const DiskFunction& phi, const DiskFunction& psi, int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "truncation degree must be at least 1");
  if (!phi.is_harmonic() || !psi.is_harmonic())
    fail(ErrorCode::NotHarmonic, "symbols must be sums of z^a and conj(z)^b terms");
  const Eigen::MatrixXcd m = disk_hankel_product_section(r, phi, psi, n);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------------------------
// Polynomial approximation by dilation and Taylor truncation.

/// Geometric majorant |c_n| <= bound * radius^{-n}.
struct CoefficientMajorant {
  double bound = 0.0;
  double radius = 0.0;
};

/// Power series sum c_n z^n. A polynomial sets `degree`; an infinite series needs a majorant
/// with radius beyond the target disk for the tail to be certifiable.
struct PowerSeries {
  std::function<cplx(int)> coefficient;
  std::optional<int> degree;
  std::optional<CoefficientMajorant> majorant;
  std::function<cplx(cplx)> evaluate;  // optional closed form, used for a-posteriori checks
};

inline PowerSeries polynomial_series(const DiskFunction& p) {
  require_holomorphic(p, "polynomial");
  int deg = 0;
  for (const auto& [k, c] : p.terms()) deg = std::max(deg, k.first);
  return PowerSeries{[p](int n) { return p.coefficient(n, 0); }, deg, std::nullopt,
                     [p](cplx z) { return p(z); }};
}

/// 1 / (pole - z), |pole| > 0.
inline PowerSeries inverse_linear_series(cplx pole) {
  const double m = std::abs(pole);
  return PowerSeries{[pole](int n) { return std::pow(pole, -(n + 1)); }, std::nullopt,
                     CoefficientMajorant{1.0 / m, m}, [pole](cplx z) { return 1.0 / (pole - z); }};
}

struct PolynomialApproximation {
  DiskFunction polynomial;      // h, holomorphic
  double dilation = 1.0;        // rho in f_rho(z) = f(rho z)
  int degree = 0;
  double dilation_bound = 0.0;  // certified ||f - f_rho||
  double truncation_bound = 0.0;  // certified ||f_rho - h||
  double certified_bound = 0.0;   // sum of the two
};

/// Finds a holomorphic polynomial h with ||f - h||_{L^2(D_r)} < epsilon: first a dilation
/// f_rho(z) = f(rho z) close to f, then a Taylor truncation of f_rho. Both distances are
/// certified from exact head sums plus a geometric tail bound.
inline PolynomialApproximation approximate_by_polynomial(const PowerSeries& f, double epsilon,
                                                         double r) {
  if (!(epsilon > 0.0)) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "disk radius must be positive");
  PolynomialApproximation out;
  out.polynomial = DiskFunction(r);
  if (f.degree) {
    for (int n = 0; n <= *f.degree; ++n) out.polynomial.add(n, 0, f.coefficient(n));
    out.degree = *f.degree;
    return out;
  }
  if (!f.majorant || !(f.majorant->radius > r) || !(f.majorant->bound >= 0.0))
    fail(ErrorCode::TailBoundUnavailable, "no geometric majorant with radius beyond the disk");

  const double m2 = f.majorant->bound * f.majorant->bound;
  const double q = (r / f.majorant->radius) * (r / f.majorant->radius);
  auto weight = [&](int n) { return radial_moment(n, r); };
  // sum_{n > k} m2 * q^n * pi r^2 / (n+1) <= m2 pi r^2 q^{k+1} / ((k+2)(1-q))
  auto majorant_tail = [&](int k, double ratio) {
    return m2 * kPi * r * r * std::pow(ratio, k + 1) / ((k + 2) * (1.0 - ratio));
  };

  const double target_sq = 0.25 * epsilon * epsilon;
  int head = 1;
  while (majorant_tail(head, q) > 1e-6 * target_sq) {
    head *= 2;
    if (head > (1 << 22)) fail(ErrorCode::TailBoundUnavailable, "majorant tail does not decay");
  }
  std::vector<double> c2(head + 1), w(head + 1);
  for (int n = 0; n <= head; ++n) {
    c2[n] = std::norm(f.coefficient(n));
    w[n] = weight(n);
  }

  double rho = 0.5;
  double dil_sq = 0.0;
  for (int k = 1;; ++k) {
    rho = 1.0 - std::ldexp(1.0, -k);
    dil_sq = majorant_tail(head, q);  // (1 - rho^n)^2 <= 1 beyond the head
    for (int n = 1; n <= head; ++n) {
      const double d = 1.0 - std::pow(rho, n);
      dil_sq += c2[n] * d * d * w[n];
    }
    if (dil_sq < target_sq) break;
    if (k > 60) fail(ErrorCode::TailBoundUnavailable, "dilation does not converge");
  }

  const double q_rho = q * rho * rho;
  int degree = 0;
  double trunc_sq = 0.0;
  for (;; ++degree) {
    trunc_sq = majorant_tail(head, q_rho);
    for (int n = degree + 1; n <= head; ++n) trunc_sq += c2[n] * std::pow(rho, 2.0 * n) * w[n];
    if (trunc_sq < target_sq) break;
    if (degree >= head) fail(ErrorCode::TailBoundUnavailable, "truncation does not converge");
  }

  for (int n = 0; n <= degree; ++n) out.polynomial.add(n, 0, f.coefficient(n) * std::pow(rho, n));
  out.dilation = rho;
  out.degree = degree;
  out.dilation_bound = std::sqrt(dil_sq);
  out.truncation_bound = std::sqrt(trunc_sq);
  out.certified_bound = out.dilation_bound + out.truncation_bound;
  return out;
}

// ---------------------------------------------------------------------------------------------
// Radius-convergence experiments.

/// T_{D_cutoff} * symbol: a disk function multiplied by the indicator of a concentric disk.
struct CutoffFunction {
  DiskFunction symbol;
  double cutoff = 1.0;
};

/// P^{D_r} of a cut-off function: <T_{D_s} z^a conj(z)^b, z^n>_{D_r} = int_{D_min(r,s)} |z|^{2a}
/// when n = a - b.
inline DiskFunction disk_project_cutoff(double r, const CutoffFunction& psi) {
  DiskFunction out(r);
  const double m = std::min(r, psi.cutoff);
  for (const auto& [k, c] : psi.symbol.terms()) {
    const auto [a, b] = k;
    if (a < b) continue;
    const int n = a - b;
    out.add(n, 0, c * radial_moment(a, m) / radial_moment(n, r));
  }
  return out;
}

struct ProjectionConvergenceReport {
  double target_radius = 1.0;
  double compact_radius = 0.5;
  std::vector<double> radii;
  std::vector<double> error_sq;      // ||E_{D_r} P^{D_r} psi - E_{D_t} P^{D_t} psi||^2_{L^2(C)}
  std::vector<double> error;         // square root of the above
  std::vector<double> uniform_error; // sup over |z| <= compact_radius of |P^{D_r}psi - P^{D_t}psi|
  bool l2_decreasing = false;
  bool l2_converged = false;
  bool uniform_converged = false;
  bool passed = false;
};

/// Squared L^2(C) distance between the zero extensions of P^{D_r} psi and P^{D_t} psi:
/// the plane splits into D_min, the annulus between the radii, and the exterior (where both vanish).
inline double projection_distance_sq(const CutoffFunction& psi, double r, double target) {
  const DiskFunction pr = disk_project_cutoff(r, psi);
  const DiskFunction pt = disk_project_cutoff(target, psi);
  const double inner = std::min(r, target), outer = std::max(r, target);
  const DiskFunction& alive = r > target ? pr : pt;
  return disk_norm_sq(pr - pt, inner) + disk_norm_sq(alive, outer, inner);
}

inline double projection_uniform_distance(const CutoffFunction& psi, double r, double target,
                                          double compact_radius) {
  const DiskFunction diff = disk_project_cutoff(r, psi) - disk_project_cutoff(target, psi);
  double sup = 0.0;
  constexpr int kRadial = 32, kAngular = 64;
  for (int i = 0; i <= kRadial; ++i)
    for (int k = 0; k < kAngular; ++k)
      sup = std::max(sup, std::abs(diff(std::polar(compact_radius * i / kRadial,
                                                   2.0 * kPi * k / kAngular))));
  return sup;
}

/// Projection convergence on dilated disks: E_{D_r} P^{D_r} psi -> E_{D_t} P^{D_t} psi in L^2(C) as r -> t, and
/// uniformly on the compact disk of radius compact_radius.
inline ProjectionConvergenceReport projection_convergence_experiment(
    const CutoffFunction& psi, const std::vector<double>& radii, double target = 1.0,
    double compact_radius = 0.5, double l2_tol = 1e-3, double uniform_tol = 1e-3) {
  if (radii.empty()) fail(ErrorCode::InvalidArgument, "radius sequence is empty");
  ProjectionConvergenceReport rep;
  rep.target_radius = target;
  rep.compact_radius = compact_radius;
  rep.radii = radii;
  for (double r : radii) {
    if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "radii must be positive");
    const double e2 = projection_distance_sq(psi, r, target);
    rep.error_sq.push_back(e2);
    rep.error.push_back(std::sqrt(std::max(0.0, e2)));
    rep.uniform_error.push_back(projection_uniform_distance(psi, r, target, compact_radius));
  }
  rep.l2_decreasing = true;
  for (std::size_t k = 1; k < radii.size(); ++k) {
    const double prev = rep.error_sq[k - 1], cur = rep.error_sq[k];
    if (prev == 0.0 ? cur != 0.0 : !(cur / prev < 1.0)) rep.l2_decreasing = false;
  }
  rep.l2_converged = rep.error_sq.back() < l2_tol;
  rep.uniform_converged = rep.uniform_error.back() < uniform_tol;
  rep.passed = rep.l2_decreasing && rep.l2_converged && rep.uniform_converged;
  return rep;
}

struct GramConvergenceReport {
  double target_radius = 1.0;
  cplx limit;                    // G(target)
  std::vector<double> radii;
  std::vector<cplx> gram;        // G(r)
  std::vector<double> error;     // |G(r) - G(target)|
  bool monotone = false;
  bool passed = false;
};

/// Gram convergence on dilated disks: G(r) = <H_phi f1, H_psi f2>_{D_r} -> G(target) from both sides. On each
/// side of the target the error must shrink as r approaches it, and the closest radius on each
/// side must land within tol.
inline GramConvergenceReport gram_convergence_experiment(const DiskFunction& phi,
                                                         const DiskFunction& psi,
                                                         const DiskFunction& f1,
                                                         const DiskFunction& f2,
                                                         const std::vector<double>& radii,
                                                         double target = 1.0, double tol = 1e-2) {
  if (radii.empty()) fail(ErrorCode::InvalidArgument, "radius sequence is empty");
  GramConvergenceReport rep;
  rep.target_radius = target;
  rep.limit = disk_hankel_gram(target, phi, f1, psi, f2);
  rep.radii = radii;
  for (double r : radii) {
    if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "radii must be positive");
    rep.gram.push_back(disk_hankel_gram(r, phi, f1, psi, f2));
    rep.error.push_back(std::abs(rep.gram.back() - rep.limit));
  }
  rep.monotone = true;
  bool close_enough = true;
  for (int side : {-1, 1}) {
    std::vector<std::pair<double, double>> pts;  // (distance, error)
    for (std::size_t k = 0; k < radii.size(); ++k) {
      const double d = radii[k] - target;
      if (d * side > 0.0) pts.emplace_back(std::abs(d), rep.error[k]);
    }
    std::sort(pts.begin(), pts.end(), [](auto a, auto b) { return a.first > b.first; });
    for (std::size_t k = 1; k < pts.size(); ++k)
      if (pts[k].second > pts[k - 1].second * (1.0 + 1e-12) + 1e-15) rep.monotone = false;
    if (!pts.empty() && !(pts.back().second < tol)) close_enough = false;
  }
  rep.passed = rep.monotone && close_enough;
  return rep;
}

}  // namespace bergman
