#pragma once

// Moments  mu(p, q) = int_Omega |z|^p |w|^q dV = (2 pi)^2 int_Z x^{p+1} y^{q+1} dx dy.
// The inner x-integral is exact, leaving  (2 pi)^2 int_0^{y_max} y^{q+1} r_h(y)^{p+2} / (p+2) dy.

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <utility>
#include <variant>
#include <vector>

#include "bergman/error.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/shadow.hpp"

namespace bergman {

enum class MomentMethod { closed_form, quadrature };

inline const char* to_string(MomentMethod m) {
  return m == MomentMethod::closed_form ? "closed_form" : "quadrature";
}

struct MomentValue {
  double value = 0.0;
  double error_bound = 0.0;
  MomentMethod method = MomentMethod::closed_form;
};

namespace detail {

inline double bidisk_moment(const profile::Bidisk& b, int p, int q) {
  const double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
  return four_pi_sq * std::pow(b.r_z, p + 2) / (p + 2) * std::pow(b.r_w, q + 2) / (q + 2);
}

// (2 pi)^2 / (p+2) * int_0^R y^{q+1} (R^2 - y^2)^{(p+2)/2} dy
//   = (2 pi)^2 / (p+2) * R^{p+q+4} * B((q+2)/2, (p+4)/2) / 2.
/// B(x, y) for x, y positive multiples of 1/2 by the recurrence B(x + 1, y) = B(x, y) x / (x + y),
/// down to B(1/2, 1/2) = pi, B(1/2, 1) = B(1, 1/2) = 2 or B(1, 1) = 1.
inline double half_integer_beta(double x, double y) {
  double factor = 1.0;
  while (x > 1.0) {
    x -= 1.0;
    factor *= x / (x + y);
  }
  while (y > 1.0) {
    y -= 1.0;
    factor *= y / (x + y);
  }
  const double base = x == 1.0 ? (y == 1.0 ? 1.0 : 2.0) : (y == 1.0 ? 2.0 : std::numbers::pi);
  return factor * base;
}

inline double ball_moment(const profile::Ball& b, int p, int q) {
  const double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
  return four_pi_sq / (p + 2) * std::pow(b.radius, p + q + 4) * 0.5 * half_integer_beta(0.5 * (q + 2), 0.5 * (p + 4));
}

/// Relative rounding allowance of the closed forms: one unit per multiplication.
inline double closed_form_rounding(int p, int q) { return (8.0 + p + q) * std::numeric_limits<double>::epsilon(); }

}  // namespace detail

/// Memoised moment table of one shadow. Copies share the cache. Concurrent lookups are safe;
/// a miss may be computed twice by racing threads but is written once.
class MomentTable {
public:
  explicit MomentTable(ShadowRegion shadow, bool force_quadrature = false)
    : state_(std::make_shared<State>(std::move(shadow))) {
    state_->method = (state_->shadow.has_closed_form_moments() && !force_quadrature)
                         ? MomentMethod::closed_form
                         : MomentMethod::quadrature;
  }

  const ShadowRegion& shadow() const { return state_->shadow; }
  MomentMethod method() const { return state_->method; }

  MomentValue entry(int p, int q) const {
    if (p < 0 || q < 0) fail(ErrorCode::InvalidArgument, "moment orders must be non-negative");
    {
      std::shared_lock lock(state_->mutex);
      if (auto it = state_->cache.find({p, q}); it != state_->cache.end()) return it->second;
    }
    const MomentValue v = compute(p, q);
    std::unique_lock lock(state_->mutex);
    return state_->cache.try_emplace({p, q}, v).first->second;
  }

  double operator()(int p, int q) const { return entry(p, q).value; }

  /// c_{alpha beta} = ||z^alpha w^beta||.
  double monomial_norm(int alpha, int beta) const { return std::sqrt((*this)(2 * alpha, 2 * beta)); }

  std::size_t cache_size() const {
    std::shared_lock lock(state_->mutex);
    return state_->cache.size();
  }

  /// Largest relative error bound among the cached entries.
  double max_relative_error() const {
    std::shared_lock lock(state_->mutex);
    double e = 0.0;
    for (const auto& [k, v] : state_->cache)
      if (v.value > 0.0) e = std::max(e, v.error_bound / v.value);
    return e;
  }

private:
  struct State {
    explicit State(ShadowRegion s) : shadow(std::move(s)) {}
    ShadowRegion shadow;
    MomentMethod method = MomentMethod::closed_form;
    mutable std::shared_mutex mutex;
    std::map<std::pair<int, int>, MomentValue> cache;
  };

  MomentValue compute(int p, int q) const {
    const ShadowRegion& s = state_->shadow;
    if (state_->method == MomentMethod::closed_form) {
      const double v = std::holds_alternative<profile::Bidisk>(s.profile())
                           ? detail::bidisk_moment(std::get<profile::Bidisk>(s.profile()), p, q)
                           : detail::ball_moment(std::get<profile::Ball>(s.profile()), p, q);
      return {v, detail::closed_form_rounding(p, q) * v, MomentMethod::closed_form};
    }
    // Romberg on each smooth piece of the profile.
    std::vector<double> cuts{0.0};
    for (double b : s.breakpoints()) cuts.push_back(b);
    cuts.push_back(s.y_max());
    auto integrand = [&](double y) {
      return std::pow(y, q + 1) * std::pow(s.slice_radius(std::min(y, s.y_max())), p + 2);
    };
    RombergOptions opt;
    opt.rel_tol = 1e-13;
    opt.accept_tol = 1e-9;
    double value = 0.0, err = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const QuadratureResult r = romberg(integrand, cuts[k], cuts[k + 1], opt);
      value += r.value;
      err += r.error_bound;
    }
    const double scale = 4.0 * std::numbers::pi * std::numbers::pi / (p + 2);
    return {scale * value, scale * err + 1e-15 * scale * std::abs(value), MomentMethod::quadrature};
  }

  std::shared_ptr<State> state_;
};

inline double moment(const MomentTable& table, int p, int q) { return table(p, q); }
inline double monomial_norm(const MomentTable& table, int alpha, int beta) {
  return table.monomial_norm(alpha, beta);
}

}  // namespace bergman
