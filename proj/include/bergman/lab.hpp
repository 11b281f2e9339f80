#pragma once

// Compactness diagnostics for H_psi^* H_phi on A^2(Omega): boundary-disk classification of the
// symbols, test-sequence functionals, the slice decomposition of the functional, spectral tails,
// and the combined dichotomy run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "bergman/disk.hpp"
#include "bergman/error.hpp"
#include "bergman/moments.hpp"
#include "bergman/parallel.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/report.hpp"
#include "bergman/sections.hpp"
#include "bergman/shadow.hpp"
#include "bergman/symbol.hpp"

namespace bergman {

inline constexpr double kDecayFraction = 0.05;
inline constexpr double kBoundedFraction = 0.5;
inline constexpr double kZeroFloor = 1e-14;

namespace detail {
inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace detail

// ---------------------------------------------------------------------------------------------
// Classification on boundary disks.

enum class DiskClass { holomorphic, non_holomorphic, not_harmonic };

inline const char* to_string(DiskClass c) {
  switch (c) {
    case DiskClass::holomorphic: return "holomorphic";
    case DiskClass::non_holomorphic: return "non_holomorphic";
    case DiskClass::not_harmonic: return "not_harmonic";
  }
  return "not_harmonic";
}

struct DiskSymbolProfile {
  BoundaryDisk disk;
  DiskFunction restricted;  // function of the disk variable
  DiskClass classification = DiskClass::holomorphic;
};

/// Restriction of a symbol to the representative disk with real positive base point.
inline DiskFunction restrict_to_disk(const MonomialSymbol& s, const BoundaryDisk& d) {
  return d.orientation == DiskOrientation::horizontal
             ? s.restrict_horizontal(d.base_modulus, d.radius)
             : s.restrict_vertical(d.base_modulus, d.radius);
}

inline DiskClass classify(const DiskFunction& f) {
  if (!f.is_harmonic()) return DiskClass::not_harmonic;
  return f.is_holomorphic() ? DiskClass::holomorphic : DiskClass::non_holomorphic;
}

inline std::vector<DiskSymbolProfile> classify_symbol_on_disks(const MonomialSymbol& symbol,
                                                               const std::vector<BoundaryDisk>& disks) {
  std::vector<DiskSymbolProfile> out;
  for (const auto& d : disks) {
    DiskFunction r = restrict_to_disk(symbol, d);
    const DiskClass c = classify(r);
    out.push_back({d, std::move(r), c});
  }
  return out;
}

struct DichotomyAnalysis {
  std::vector<DiskSymbolProfile> phi, psi;
  Prediction prediction = Prediction::compact_consistent;
  std::optional<std::size_t> offending_disk;  // first disk on which both restrictions are non-holomorphic
};

/// Raises NotHarmonicOnDisk when a restriction is not harmonic.
inline DichotomyAnalysis analyse_dichotomy(const ShadowRegion& shadow, const MonomialSymbol& phi,
                                           const MonomialSymbol& psi) {
  const auto disks = detect_boundary_disks(shadow);
  DichotomyAnalysis a;
  a.phi = classify_symbol_on_disks(phi, disks);
  a.psi = classify_symbol_on_disks(psi, disks);
  for (std::size_t k = 0; k < disks.size(); ++k) {
    for (const auto* p : {&a.phi[k], &a.psi[k]})
      if (p->classification == DiskClass::not_harmonic)
        fail(ErrorCode::NotHarmonicOnDisk, std::string("symbol is not harmonic on the ") +
                                               to_string(disks[k].orientation) + " boundary disk");
    if (!a.offending_disk && a.phi[k].classification == DiskClass::non_holomorphic &&
        a.psi[k].classification == DiskClass::non_holomorphic)
      a.offending_disk = k;
  }
  a.prediction = a.offending_disk ? Prediction::non_compact : Prediction::compact_consistent;
  return a;
}

/// Holomorphic payloads (zeta^k, zeta^l), k, l <= max_degree, maximising the slice Gram value
/// |<H_phi zeta^k, H_psi zeta^l>| on the disk.
inline std::pair<int, int> choose_payloads(const DiskFunction& phi, const DiskFunction& psi,
                                           double radius, int max_degree = 3) {
  std::pair<int, int> best{0, 0};
  double best_val = -1.0;
  for (int k = 0; k <= max_degree; ++k)
    for (int l = 0; l <= max_degree; ++l) {
      const double v = std::abs(disk_hankel_gram(radius, phi, DiskFunction::monomial(k, 0, 1.0, radius),
                                                 psi, DiskFunction::monomial(l, 0, 1.0, radius)));
      if (v > best_val * (1.0 + 1e-12)) {
        best_val = v;
        best = {k, l};
      }
    }
  return best;
}

// ---------------------------------------------------------------------------------------------
// Verdict rule shared by the test-sequence functionals.

/// decays_to_zero: every magnitude in the last quarter is below 5% of the overall maximum (or
/// everything is numerically zero). bounded_away_from_zero: the smallest magnitude in the last
/// quarter exceeds half the maximum. Otherwise inconclusive.
inline Verdict tail_verdict(const std::vector<double>& magnitudes) {
  if (magnitudes.empty()) return Verdict::inconclusive;
  const std::size_t n = magnitudes.size();
  const std::size_t q = std::max<std::size_t>(1, n / 4);
  const double max_all = *std::max_element(magnitudes.begin(), magnitudes.end());
  if (max_all <= kZeroFloor) return Verdict::decays_to_zero;
  const auto tail_begin = magnitudes.end() - static_cast<std::ptrdiff_t>(q);
  const double tail_max = *std::max_element(tail_begin, magnitudes.end());
  const double tail_min = *std::min_element(tail_begin, magnitudes.end());
  if (tail_max < kDecayFraction * max_all) return Verdict::decays_to_zero;
  if (tail_min > kBoundedFraction * max_all) return Verdict::bounded_away_from_zero;
  return Verdict::inconclusive;
}

// ---------------------------------------------------------------------------------------------
// Test sequences.

enum class RayDirection { w, z };

inline const char* to_string(RayDirection d) { return d == RayDirection::w ? "w" : "z"; }

struct MonomialRaySequence {
  int m_max = 128;
  RayDirection direction = RayDirection::w;
};

struct PaperGSequence {
  std::vector<double> alphas;
  std::vector<double> a;       // normalising constants, ||g_j||_{A^2(H)} = 1
  int taylor_degree = 256;
  double base_point = 1.0;     // w0 = y_max, real positive
};

struct TestSequence {
  std::variant<MonomialRaySequence, PaperGSequence> kind;
  MonomialSymbol payload_f1 = MonomialSymbol::constant(1.0);
  MonomialSymbol payload_f2 = MonomialSymbol::constant(1.0);
};

/// alpha_j = 1 - 1/j, j = 1..count.
inline std::vector<double> default_alpha_schedule(int count = 20) {
  std::vector<double> out;
  for (int j = 1; j <= count; ++j) out.push_back(1.0 - 1.0 / j);
  return out;
}

/// int_H |i (w - w0)|^{-2 alpha} dV(w) for H = {|w| < w0}, in closed form:
///   (2 w0)^{2 - 2 alpha} / (2 - 2 alpha) * sqrt(pi) Gamma(3/2 - alpha) / Gamma(2 - alpha).
inline double paper_g_mass_closed_form(double alpha, double w0) {
  const double k = 2.0 - 2.0 * alpha;
  return std::pow(2.0 * w0, k) / k * std::sqrt(std::numbers::pi) *
         std::exp(std::lgamma(1.5 - alpha) - std::lgamma(2.0 - alpha));
}

/// Same integral, in polar coordinates about w0: int (2 w0 cos t)^{2-2 alpha} / (2 - 2 alpha) dt.
inline double paper_g_mass_numeric(double alpha, double w0) {
  const double k = 2.0 - 2.0 * alpha;
  const double h = 0.5 * std::numbers::pi;
  return adaptive_gauss([&](double t) { return std::pow(2.0 * w0 * std::cos(t), k) / k; }, -h, h,
                        1e-15)
      .value;
}

inline PaperGSequence paper_g_sequence(const ShadowRegion& shadow, std::vector<double> alphas,
                                       int taylor_degree) {
  if (alphas.empty()) fail(ErrorCode::InvalidArgument, "alpha schedule is empty");
  if (taylor_degree < 1) fail(ErrorCode::InvalidArgument, "taylor_degree must be >= 1");
  PaperGSequence s;
  s.alphas = std::move(alphas);
  s.taylor_degree = taylor_degree;
  s.base_point = shadow.y_max();
  for (double alpha : s.alphas) {
    if (!(alpha >= 0.0 && alpha < 1.0)) fail(ErrorCode::InvalidArgument, "alphas must lie in [0, 1)");
    s.a.push_back(1.0 / std::sqrt(paper_g_mass_numeric(alpha, s.base_point)));
  }
  return s;
}

/// g(w) = a (i (w - w0))^{-alpha}, principal branch.
inline cplx paper_g_value(double a, double alpha, double w0, cplx w) {
  return a * std::pow(cplx(0.0, 1.0) * (w - w0), -alpha);
}

/// Coefficients of g in the orthonormal basis w^n / ||w^n||_{A^2(H)} of the disk H = {|w| < w0}:
///   g_n = a (-i w0)^{-alpha} (alpha)_n / n! w0^{-n},  ||w^n||^2 = pi w0^{2n+2} / (n+1).
inline std::vector<cplx> paper_g_coefficients(double a, double alpha, double w0, int degree) {
  std::vector<cplx> out(static_cast<std::size_t>(degree) + 1);
  const cplx lead = a * std::pow(w0, -alpha) * std::polar(1.0, 0.5 * alpha * std::numbers::pi);
  double t = 1.0;  // (alpha)_n / n!
  for (int n = 0; n <= degree; ++n) {
    if (n > 0) t *= (alpha + n - 1) / n;
    out[static_cast<std::size_t>(n)] = lead * t * std::sqrt(std::numbers::pi / (n + 1)) * w0;
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Monomial-ray functional.

namespace detail {

inline void require_harmonic_on_disks(const ShadowRegion& shadow, const MonomialSymbol& phi,
                                      const MonomialSymbol& psi) {
  (void)analyse_dichotomy(shadow, phi, psi);
}

inline MonomialSymbol ray_monomial(RayDirection dir, int m) {
  return dir == RayDirection::w ? MonomialSymbol::monomial(0, 0, m, 0)
                                : MonomialSymbol::monomial(m, 0, 0, 0);
}

}  // namespace detail

/// v_m = <H_phi(f1 h_m), H_psi(f2 h_m)> for h_m = w^m / ||w^m|| (or z^m / ||z^m||), m = 0..m_max.
inline ExperimentReport monomial_ray_functional(const MomentTable& table, const MonomialSymbol& phi,
                                                const MonomialSymbol& psi, const MonomialSymbol& f1,
                                                const MonomialSymbol& f2, int m_max,
                                                RayDirection direction = RayDirection::w) {
  const auto t0 = std::chrono::steady_clock::now();
  if (m_max < 8) fail(ErrorCode::InvalidArgument, "m_max must be at least 8");
  if (!f1.is_holomorphic() || !f2.is_holomorphic())
    fail(ErrorCode::NotHolomorphic, "payloads must be holomorphic polynomials");
  detail::require_harmonic_on_disks(table.shadow(), phi, psi);

  const std::size_t n = static_cast<std::size_t>(m_max) + 1;
  std::vector<cplx> v(n);
  std::vector<double> scale(n);
  parallel_for(n, [&](std::size_t m) {
    const MonomialSymbol h = detail::ray_monomial(direction, static_cast<int>(m));
    const double norm = std::sqrt(l2_norm_sq(table, h));
    const MonomialSymbol a = hankel_apply(table, phi, f1 * h) * (1.0 / norm);
    const MonomialSymbol b = hankel_apply(table, psi, f2 * h) * (1.0 / norm);
    v[m] = l2_inner(table, a, b);
    scale[m] = std::sqrt(l2_norm_sq(table, phi * f1 * h) * l2_norm_sq(table, psi * f2 * h)) /
               (norm * norm);
  });

  ExperimentReport r;
  r.experiment = "ray";
  const double rel = table.max_relative_error();
  auto& re = r.add_series("ray_value");
  auto& im = r.add_series("ray_value_imag");
  std::vector<double> mags(n);
  for (std::size_t m = 0; m < n; ++m) {
    // Each value is a short signed sum of moment ratios; bound the propagated moment error.
    const double eb = 8.0 * rel * (scale[m] + std::abs(v[m])) + 1e-15 * scale[m];
    re.push(static_cast<double>(m), v[m].real(), eb);
    im.push(static_cast<double>(m), v[m].imag(), eb);
    mags[m] = std::abs(v[m]);
  }
  r.verdict = tail_verdict(mags);
  r.scalars["m_max"] = m_max;
  r.scalars["max_abs_value"] = *std::max_element(mags.begin(), mags.end());
  r.scalars["tail_min_abs_value"] =
      *std::min_element(mags.end() - static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, n / 4)),
                        mags.end());
  r.tolerances["decay_fraction"] = kDecayFraction;
  r.tolerances["bounded_fraction"] = kBoundedFraction;
  r.tolerances["zero_floor"] = kZeroFloor;
  r.provenance["moments"] = to_string(table.method());
  r.provenance["direction"] = to_string(direction);
  r.provenance["max_relative_moment_error"] = std::to_string(rel);
  r.runtimes_s["compute"] = detail::seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------------------------
// The paper's sequence g_j = a_j / (i (w - w0))^{alpha_j}.

struct PaperGOptions {
  std::vector<double> alphas = default_alpha_schedule();
  int taylor_degree = 256;
  double tail_tolerance = 1e-3;
  std::optional<MonomialSymbol> vanishing;  // symbol chi vanishing on the disk; reports ||chi f1 g_j||
};

/// ||chi f1 g||_{L^2(Omega)} by polar quadrature about w0 with the substitution
/// u = (t / T)^{2 - 2 alpha}, which absorbs the singularity of |g|^2.
inline double paper_g_weighted_norm(const ShadowRegion& shadow, const MonomialSymbol& chi_f1,
                                    double a, double alpha, int nodes = 64) {
  const double w0 = shadow.y_max();
  const double k = 2.0 - 2.0 * alpha;
  const double h = 0.5 * std::numbers::pi;
  const double total = gauss_fixed(
      [&](double psi) {
        const double big_t = 2.0 * w0 * std::cos(psi);
        const double inner = gauss_fixed(
            [&](double u) {
              const double t = big_t * std::pow(u, 1.0 / k);
              const cplx w = w0 - std::polar(t, psi);
              const double rho = shadow.slice_radius(std::min(std::abs(w), w0));
              return disk_norm_sq(chi_f1.restrict_horizontal(w, rho), rho);
            },
            0.0, 1.0, nodes);
        return a * a * std::pow(big_t, k) / k * inner;
      },
      -h, h, nodes);
  return std::sqrt(std::max(0.0, total));
}

/// F_j = <H_phi(f1 g_j), H_psi(f2 g_j)>_Omega with the degree-N expansion of g_j about the centre
/// of H = {|w| < y_max} and an asymptotic tail: row contributions divided by their mass tend to
/// the slice Gram value L on the top disk, so the tail is L times the missing mass, with error at
/// most the missing mass times max_{N/2 <= n <= N} |R_n / p_n - L|.
inline ExperimentReport paper_sequence_functional(const MomentTable& table, const MonomialSymbol& phi,
                                                  const MonomialSymbol& psi, const MonomialSymbol& f1,
                                                  const MonomialSymbol& f2, const PaperGOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const ShadowRegion& shadow = table.shadow();
  if (!f1.is_holomorphic() || !f2.is_holomorphic() || !f1.is_z_only() || !f2.is_z_only())
    fail(ErrorCode::NotHolomorphic, "payloads must be holomorphic polynomials in z");
  detail::require_harmonic_on_disks(shadow, phi, psi);
  const auto disks = detect_boundary_disks(shadow);
  const auto top = std::find_if(disks.begin(), disks.end(), [](const BoundaryDisk& d) {
    return d.orientation == DiskOrientation::horizontal;
  });
  if (top == disks.end()) fail(ErrorCode::NoBoundaryDisk, "domain has no horizontal boundary disk");

  const PaperGSequence seq = paper_g_sequence(shadow, opt.alphas, opt.taylor_degree);
  const double w0 = seq.base_point;
  const int big_n = seq.taylor_degree;
  const int band = phi.max_w_frequency() + psi.max_w_frequency();

  // Normalised w-monomials u_n = w^n / ||w^n||_{A^2(H)}; Hankel images for n <= N + band.
  const int n_cols = big_n + band;
  std::vector<MonomialSymbol> h_phi(static_cast<std::size_t>(big_n) + 1),
      h_psi(static_cast<std::size_t>(n_cols) + 1);
  auto u = [&](int n) {
    return MonomialSymbol::monomial(0, 0, n, 0,
                                    1.0 / std::sqrt(std::numbers::pi * std::pow(w0, 2 * n + 2) / (n + 1)));
  };
  parallel_for(h_psi.size(), [&](std::size_t n) {
    const int ni = static_cast<int>(n);
    if (ni <= big_n) h_phi[n] = hankel_apply(table, phi, f1 * u(ni));
    h_psi[n] = hankel_apply(table, psi, f2 * u(ni));
  });
  // Banded Gram B(n, n') = <H_phi(f1 u_n), H_psi(f2 u_n')>, |n - n'| <= band.
  const std::size_t width = 2 * static_cast<std::size_t>(band) + 1;
  std::vector<cplx> gram((static_cast<std::size_t>(big_n) + 1) * width);
  parallel_for(static_cast<std::size_t>(big_n) + 1, [&](std::size_t n) {
    for (int off = -band; off <= band; ++off) {
      const int np = static_cast<int>(n) + off;
      if (np < 0 || np > n_cols) continue;
      gram[n * width + static_cast<std::size_t>(off + band)] =
          l2_inner(table, h_phi[n], h_psi[static_cast<std::size_t>(np)]);
    }
  });

  const double rho0 = top->radius;
  auto slice = [&](const MonomialSymbol& s) { return s.restrict_horizontal(w0, rho0); };
  const cplx limit = disk_hankel_gram(rho0, slice(phi), slice(f1), slice(psi), slice(f2));

  ExperimentReport r;
  r.experiment = "paper_g";
  auto& f_re = r.add_series("functional");
  auto& f_im = r.add_series("functional_imag");
  auto& s_a = r.add_series("a_j");
  auto& s_alpha = r.add_series("alpha_j");
  auto& s_norm = r.add_series("norm_defect");
  auto& s_mass = r.add_series("head_mass");
  auto& s_tail = r.add_series("tail_bound");
  auto& s_weak = r.add_series("weak_null_sup");
  Series* s_vanishing = opt.vanishing ? &r.add_series("vanishing_weighted_norm") : nullptr;

  const std::size_t jobs = seq.alphas.size();
  std::vector<cplx> values(jobs);
  std::vector<double> tail_bounds(jobs), masses(jobs), vanishing_norm(jobs);
  parallel_for(jobs, [&](std::size_t j) {
    const double alpha = seq.alphas[j], a = seq.a[j];
    const auto g = paper_g_coefficients(a, alpha, w0, n_cols);
    cplx head{};
    double mass = 0.0, worst = 0.0;
    for (int n = 0; n <= big_n; ++n) {
      cplx row{};
      for (int off = -band; off <= band; ++off) {
        const int np = n + off;
        if (np < 0 || np > n_cols) continue;
        row += std::conj(g[static_cast<std::size_t>(np)]) *
               gram[static_cast<std::size_t>(n) * width + static_cast<std::size_t>(off + band)];
      }
      row *= g[static_cast<std::size_t>(n)];
      const double p = std::norm(g[static_cast<std::size_t>(n)]);
      head += row;
      mass += p;
      if (2 * n >= big_n && p > 0.0) worst = std::max(worst, std::abs(row / p - limit));
    }
    const double missing = std::max(0.0, 1.0 - mass);
    values[j] = head + limit * missing;
    masses[j] = mass;
    tail_bounds[j] = missing * worst;
    if (opt.vanishing) vanishing_norm[j] = paper_g_weighted_norm(shadow, *opt.vanishing * f1, a, alpha);
  });

  const double delta = shadow.y_max() / 4.0;
  std::vector<double> mags;
  double worst_tail = 0.0;
  for (std::size_t j = 0; j < jobs; ++j) {
    const double alpha = seq.alphas[j], a = seq.a[j];
    const double idx = static_cast<double>(j + 1);
    f_re.push(idx, values[j].real(), tail_bounds[j]);
    f_im.push(idx, values[j].imag(), tail_bounds[j]);
    s_a.push(idx, a);
    s_alpha.push(idx, alpha);
    s_norm.push(idx, std::abs(a * a * paper_g_mass_closed_form(alpha, w0) - 1.0));
    s_mass.push(idx, masses[j]);
    s_tail.push(idx, tail_bounds[j]);
    s_weak.push(idx, a * std::pow(delta, -alpha));
    if (s_vanishing) s_vanishing->push(idx, vanishing_norm[j]);
    mags.push_back(std::abs(values[j]));
    worst_tail = std::max(worst_tail, tail_bounds[j]);
  }
  if (worst_tail > opt.tail_tolerance)
    fail(ErrorCode::TaylorTailTooLarge,
         "Taylor tail bound " + std::to_string(worst_tail) + " exceeds " +
             std::to_string(opt.tail_tolerance) + "; raise taylor_degree");

  r.verdict = tail_verdict(mags);
  r.scalars["base_point"] = w0;
  r.scalars["taylor_degree"] = big_n;
  r.scalars["slice_gram_limit_re"] = limit.real();
  r.scalars["slice_gram_limit_im"] = limit.imag();
  r.scalars["weak_null_delta"] = delta;
  r.scalars["max_tail_bound"] = worst_tail;
  r.tolerances["tail_tolerance"] = opt.tail_tolerance;
  r.tolerances["normalisation"] = 1e-6;
  r.tolerances["decay_fraction"] = kDecayFraction;
  r.tolerances["bounded_fraction"] = kBoundedFraction;
  r.provenance["moments"] = to_string(table.method());
  r.provenance["a_j"] = "adaptive Gauss in polar coordinates about w0, checked against the Gamma closed form";
  r.provenance["branch"] = "principal branch of (i (w - w0))^{-alpha}";
  r.runtimes_s["compute"] = detail::seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------------------------
// Slice decomposition of the functional.

/// Exponents of z^A zbar^B w^c wbar^d rho^e, rho = r_h(|w|) the slice radius.
struct SliceExponents {
  int A = 0, B = 0, c = 0, d = 0, e = 0;
  auto operator<=>(const SliceExponents&) const = default;
};

/// Functions on Omega that are polynomial in z, zbar, w, wbar and the slice radius.
class SliceSymbol {
public:
  SliceSymbol() = default;
  explicit SliceSymbol(const MonomialSymbol& s) {
    for (const auto& [x, c] : s.terms()) add({x.a, x.b, x.c, x.d, 0}, c);
  }

  const std::map<SliceExponents, cplx>& terms() const { return terms_; }

  SliceSymbol& add(SliceExponents x, cplx c) {
    if (c == cplx{}) return *this;
    auto [it, inserted] = terms_.try_emplace(x, c);
    if (!inserted) {
      it->second += c;
      if (it->second == cplx{}) terms_.erase(it);
    }
    return *this;
  }

  friend SliceSymbol operator-(SliceSymbol x, const SliceSymbol& y) {
    for (const auto& [e, c] : y.terms_) x.add(e, -c);
    return x;
  }
  friend SliceSymbol operator*(const MonomialSymbol& m, const SliceSymbol& s) {
    SliceSymbol out;
    for (const auto& [x, cx] : m.terms())
      for (const auto& [y, cy] : s.terms_)
        out.add({x.a + y.A, x.b + y.B, x.c + y.c, x.d + y.d, y.e}, cx * cy);
    return out;
  }

private:
  std::map<SliceExponents, cplx> terms_;
};

/// P^{Delta_w} in the z variable with w frozen:
///   z^A zbar^B -> ((A - B + 1) / (A + 1)) rho^{2B} z^{A - B}  (A >= B).
inline SliceSymbol slice_project(const SliceSymbol& f) {
  SliceSymbol out;
  for (const auto& [x, c] : f.terms()) {
    if (x.A < x.B) continue;
    out.add({x.A - x.B, 0, x.c, x.d, x.e + 2 * x.B},
            c * (static_cast<double>(x.A - x.B + 1) / (x.A + 1)));
  }
  return out;
}

/// <f, g>_{L^2(Omega)} slice by slice:
///   int_Omega |z|^P |w|^Q rho^E dV = (2 pi)^2 / (P + 2) int_0^{y_max} s^{Q+1} rho(s)^{P+E+2} ds,
/// integrated by adaptive Gauss on each smooth piece of the profile.
class SliceIntegrator {
public:
  explicit SliceIntegrator(const ShadowRegion& shadow) : shadow_(shadow) {}

  cplx inner(const SliceSymbol& f, const SliceSymbol& g) {
    cplx s{};
    for (const auto& [x, cx] : f.terms())
      for (const auto& [y, cy] : g.terms()) {
        if (x.A + y.B != x.B + y.A || x.c + y.d != x.d + y.c) continue;
        s += cx * std::conj(cy) *
             radial(x.A + y.B + x.B + y.A, x.c + y.d + x.d + y.c, x.e + y.e);
      }
    return s;
  }

  double max_error() const { return max_error_; }

private:
  double radial(int p, int q, int e) {
    const auto key = std::make_tuple(p, q, e);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::vector<double> cuts{0.0};
    for (double b : shadow_.breakpoints()) cuts.push_back(b);
    cuts.push_back(shadow_.y_max());
    double v = 0.0, err = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const auto r = adaptive_gauss(
          [&](double s) {
            return std::pow(s, q + 1) * std::pow(shadow_.slice_radius(std::min(s, shadow_.y_max())),
                                                 p + e + 2);
          },
          cuts[k], cuts[k + 1], 1e-15);
      v += r.value;
      err += r.error_bound;
    }
    const double scale = 4.0 * std::numbers::pi * std::numbers::pi / (p + 2);
    max_error_ = std::max(max_error_, scale * err);
    return cache_.emplace(key, scale * v).first->second;
  }

  const ShadowRegion& shadow_;
  std::map<std::tuple<int, int, int>, double> cache_;
  double max_error_ = 0.0;
};

struct SliceDecompositionResult {
  cplx lhs;          // <H_phi(f1 g), H_psi(f2 g)>_Omega, from moments
  cplx slice_term;   // int |g|^2 <H^{Delta_w}_phi f1, H^{Delta_w}_psi f2>_{Delta_w}
  cplx cross_term;   // int H_phi(f1 g) conj(P^{Delta_w}(psi f2) g)
  double residual = 0.0;
  double quadrature_error = 0.0;
};

inline SliceDecompositionResult verify_eqn3(const MomentTable& table, const MonomialSymbol& phi,
                              const MonomialSymbol& psi, const MonomialSymbol& f1,
                              const MonomialSymbol& f2, const MonomialSymbol& g) {
  if (!f1.is_holomorphic() || !f2.is_holomorphic() || !f1.is_z_only() || !f2.is_z_only())
    fail(ErrorCode::NotHolomorphic, "f1 and f2 must be holomorphic polynomials in z");
  if (!g.is_holomorphic() ||
      !std::all_of(g.terms().begin(), g.terms().end(), [](const auto& t) { return t.first.a == 0; }))
    fail(ErrorCode::NotHolomorphic, "g must be a holomorphic polynomial in w");

  SliceDecompositionResult r;
  const MonomialSymbol h_phi = hankel_apply(table, phi, f1 * g);
  r.lhs = l2_inner(table, h_phi, hankel_apply(table, psi, f2 * g));

  SliceIntegrator integ(table.shadow());
  const SliceSymbol phi_f1(phi * f1), psi_f2(psi * f2);
  const SliceSymbol slice_h_phi = phi_f1 - slice_project(phi_f1);
  const SliceSymbol slice_h_psi = psi_f2 - slice_project(psi_f2);
  r.slice_term = integ.inner(g * slice_h_phi, g * slice_h_psi);
  r.cross_term = integ.inner(SliceSymbol(h_phi), g * slice_project(psi_f2));
  r.residual = std::abs(r.lhs - r.slice_term - r.cross_term);
  r.quadrature_error = integ.max_error();
  return r;
}

// ---------------------------------------------------------------------------------------------
// Spectral tails.

enum class SpectrumKind { eigenvalues, singular_values };

inline std::vector<double> section_spectrum(const OperatorSection& s, SpectrumKind kind) {
  std::vector<double> vals;
  if (kind == SpectrumKind::eigenvalues) {
    if (s.hermitian_defect() > 1e-10)
      fail(ErrorCode::NotHermitian, "section is not Hermitian (defect " +
                                        std::to_string(s.hermitian_defect()) + ")");
    const Eigen::MatrixXcd herm = 0.5 * (s.entries + s.entries.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    vals.assign(ev.data(), ev.data() + ev.size());
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s.entries);
    const auto& sv = svd.singularValues();
    vals.assign(sv.data(), sv.data() + sv.size());
  }
  std::sort(vals.begin(), vals.end(), std::greater<>());
  return vals;
}

inline constexpr int kTailRanks[] = {5, 10, 20};

/// Non-compact signature: the number of spectral values above tau = lambda_max / 2 grows strictly
/// with the truncation and stays proportional to N + 1. Compact signature: the count is stable
/// over the last two truncations and the values at ranks 5, 10, 20 of the largest truncation
/// fall strictly (or the spectrum is numerically zero).
inline ExperimentReport singular_tail_diagnostic(const std::vector<OperatorSection>& sections,
                                                 SpectrumKind kind = SpectrumKind::eigenvalues) {
  const auto t0 = std::chrono::steady_clock::now();
  if (sections.size() < 2) fail(ErrorCode::InvalidArgument, "need at least two truncations");
  for (std::size_t k = 1; k < sections.size(); ++k)
    if (sections[k].n_w <= sections[k - 1].n_w)
      fail(ErrorCode::InvalidArgument, "truncations must increase");
  ExperimentReport r;
  r.experiment = "spectra";
  std::vector<std::vector<double>> spectra(sections.size());
  parallel_for(sections.size(), [&](std::size_t k) { spectra[k] = section_spectrum(sections[k], kind); });

  double lambda_max = 0.0;
  for (const auto& s : spectra)
    if (!s.empty()) lambda_max = std::max(lambda_max, std::abs(s.front()));
  const double tau = 0.5 * lambda_max;
  auto& counts = r.add_series("count_above_threshold");
  auto& fractions = r.add_series("count_fraction");
  auto& top = r.add_series("lambda_max");
  std::vector<int> cnt;
  for (std::size_t k = 0; k < sections.size(); ++k) {
    const int c = static_cast<int>(std::count_if(spectra[k].begin(), spectra[k].end(), [&](double v) {
      return v > tau + 1e-9 * lambda_max;
    }));
    cnt.push_back(c);
    counts.push(sections[k].n_w, c);
    fractions.push(sections[k].n_w, c / static_cast<double>(sections[k].n_w + 1));
    top.push(sections[k].n_w, spectra[k].empty() ? 0.0 : spectra[k].front());
    r.spectra.push_back({sections[k].n_w,
                         kind == SpectrumKind::eigenvalues ? "eigenvalues" : "singular_values",
                         spectra[k]});
  }

  const auto& last = spectra.back();
  auto& ranks = r.add_series("rank_values");
  for (int k : kTailRanks)
    if (static_cast<std::size_t>(k) <= last.size()) ranks.push(k, last[static_cast<std::size_t>(k - 1)]);

  bool growing = true;
  double fmin = INFINITY, fmax = 0.0;
  for (std::size_t k = 0; k < cnt.size(); ++k) {
    if (k > 0 && cnt[k] <= cnt[k - 1]) growing = false;
    const double f = cnt[k] / static_cast<double>(sections[k].n_w + 1);
    fmin = std::min(fmin, f);
    fmax = std::max(fmax, f);
  }
  const bool proportional = fmin >= 0.5 * fmax;
  bool falling = ranks.points.size() == std::size(kTailRanks);
  for (std::size_t k = 1; falling && k < ranks.points.size(); ++k)
    if (!(ranks.points[k].value < ranks.points[k - 1].value * (1.0 - 1e-9))) falling = false;
  const bool zero = lambda_max <= kZeroFloor;
  const bool stable = cnt[cnt.size() - 1] == cnt[cnt.size() - 2];

  if (zero)
    r.verdict = Verdict::decays_to_zero;
  else if (growing && proportional)
    r.verdict = Verdict::bounded_away_from_zero;
  else if (stable && falling)
    r.verdict = Verdict::decays_to_zero;
  else
    r.verdict = Verdict::inconclusive;

  r.scalars["lambda_max"] = lambda_max;
  r.scalars["threshold"] = tau;
  r.tolerances["threshold_fraction"] = 0.5;
  r.tolerances["proportionality"] = 0.5;
  r.tolerances["zero_floor"] = kZeroFloor;
  r.provenance["spectrum"] = kind == SpectrumKind::eigenvalues ? "Eigen SelfAdjointEigenSolver"
                                                               : "Eigen JacobiSVD";
  r.runtimes_s["compute"] = detail::seconds_since(t0);
  return r;
}

/// Hankel-product sections at nested truncations N_z = N_w = N.
inline std::vector<OperatorSection> nested_product_sections(const MomentTable& table,
                                                            const MonomialSymbol& psi,
                                                            const MonomialSymbol& phi,
                                                            const std::vector<int>& truncations) {
  std::vector<OperatorSection> out;
  for (int n : truncations) out.push_back(hankel_product_section(table, psi, phi, n, n));
  return out;
}

// ---------------------------------------------------------------------------------------------
// Dichotomy.

struct DichotomyOptions {
  int m_max = 128;
  std::vector<int> truncations = {8, 16, 24};
};

/// Prediction from the boundary disks; verdict from the ray functional and the spectral tail,
/// which must concur (disagreement gives inconclusive).
inline ExperimentReport dichotomy_experiment(const MomentTable& table, const MonomialSymbol& phi,
                                             const MonomialSymbol& psi,
                                             const DichotomyOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const DichotomyAnalysis an = analyse_dichotomy(table.shadow(), phi, psi);
  ExperimentReport r;
  r.experiment = "dichotomy";
  r.prediction = an.prediction;

  for (std::size_t k = 0; k < an.phi.size(); ++k) {
    const auto& d = an.phi[k].disk;
    const std::string tag = std::string(to_string(d.orientation)) + "_disk";
    r.provenance[tag + "_phi"] = to_string(an.phi[k].classification);
    r.provenance[tag + "_psi"] = to_string(an.psi[k].classification);
    r.scalars[tag + "_radius"] = d.radius;
    r.scalars[tag + "_base_modulus"] = d.base_modulus;
  }
  r.scalars["boundary_disks"] = static_cast<double>(an.phi.size());

  // Test-sequence functional(s).
  struct Ray {
    RayDirection dir;
    MonomialSymbol f1, f2;
  };
  std::vector<Ray> rays;
  if (an.offending_disk) {
    const auto& p = an.phi[*an.offending_disk];
    const auto& q = an.psi[*an.offending_disk];
    const auto [k, l] = choose_payloads(p.restricted, q.restricted, p.disk.radius);
    if (p.disk.orientation == DiskOrientation::horizontal)
      rays.push_back({RayDirection::w, MonomialSymbol::monomial(k, 0, 0, 0),
                      MonomialSymbol::monomial(l, 0, 0, 0)});
    else
      rays.push_back({RayDirection::z, MonomialSymbol::monomial(0, 0, k, 0),
                      MonomialSymbol::monomial(0, 0, l, 0)});
    r.scalars["payload_f1_degree"] = k;
    r.scalars["payload_f2_degree"] = l;
  } else {
    const MonomialSymbol one = MonomialSymbol::constant(1.0);
    rays.push_back({RayDirection::w, one, one});
    rays.push_back({RayDirection::z, one, one});
  }
  std::vector<Verdict> ray_verdicts;
  for (const auto& ray : rays) {
    ExperimentReport rr = monomial_ray_functional(table, phi, psi, ray.f1, ray.f2, opt.m_max, ray.dir);
    ray_verdicts.push_back(*rr.verdict);
    for (auto& s : rr.series) {
      s.name += std::string("_") + to_string(ray.dir);
      r.series.push_back(std::move(s));
    }
    r.provenance[std::string("ray_verdict_") + to_string(ray.dir)] = to_string(*rr.verdict);
  }
  Verdict ray_verdict = Verdict::inconclusive;
  if (std::any_of(ray_verdicts.begin(), ray_verdicts.end(),
                  [](Verdict v) { return v == Verdict::bounded_away_from_zero; }))
    ray_verdict = Verdict::bounded_away_from_zero;
  else if (std::all_of(ray_verdicts.begin(), ray_verdicts.end(),
                       [](Verdict v) { return v == Verdict::decays_to_zero; }))
    ray_verdict = Verdict::decays_to_zero;

  // Spectral tail.
  const auto sections = nested_product_sections(table, psi, phi, opt.truncations);
  const SpectrumKind kind = phi == psi ? SpectrumKind::eigenvalues : SpectrumKind::singular_values;
  ExperimentReport sp = singular_tail_diagnostic(sections, kind);
  for (auto& s : sp.series) r.series.push_back(std::move(s));
  r.spectra = std::move(sp.spectra);

  r.provenance["ray_verdict"] = to_string(ray_verdict);
  r.provenance["spectral_verdict"] = to_string(*sp.verdict);
  r.provenance["moments"] = to_string(table.method());
  r.verdict = ray_verdict == *sp.verdict ? ray_verdict : Verdict::inconclusive;
  r.agreement = *r.verdict == expected_verdict(an.prediction);
  r.passed = *r.agreement;
  r.scalars["m_max"] = opt.m_max;
  r.tolerances["decay_fraction"] = kDecayFraction;
  r.tolerances["bounded_fraction"] = kBoundedFraction;
  r.tolerances["threshold_fraction"] = 0.5;
  if (an.prediction == Prediction::compact_consistent &&
      !std::holds_alternative<profile::Bidisk>(table.shadow().profile()))
    r.notes.push_back("compactness beyond the bidisk is exploratory; the prediction is only "
                      "consistency with the necessary condition");
  r.runtimes_s["compute"] = detail::seconds_since(t0);
  return r;
}

}  // namespace bergman
