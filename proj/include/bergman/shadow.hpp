#pragma once

// Complete Reinhardt domains in C^2 described by their absolute shadow
//   Z = {(|z|, |w|) : (z, w) in Omega}  in the closed first quadrant.
// The shadow is stored as the horizontal slice-radius profile r_h(y): the slice
// {z : (z, w) in Omega} at |w| = y is the disk of radius r_h(y) centred at 0.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "bergman/error.hpp"

namespace bergman {

inline constexpr double kProfileTolerance = 1e-9;
inline constexpr double kDiskTolerance = 1e-9;

namespace profile {

/// D(r_z) x D(r_w).
struct Bidisk {
  double r_z = 1.0;
  double r_w = 1.0;
};

/// |z|^2 + |w|^2 < R^2.
struct Ball {
  double radius = 1.0;
};

/// (D(r_z) x D(r_w)) intersected with the ball of radius R.
struct Intersection {
  double r_z = 1.0;
  double r_w = 1.0;
  double radius = 1.0;
};

/// Piecewise-linear profile through (y_i, r_i), y_0 = 0, strictly increasing y.
struct Sampled {
  std::vector<std::pair<double, double>> points;
};

}  // namespace profile

using Profile = std::variant<profile::Bidisk, profile::Ball, profile::Intersection,
                             profile::Sampled>;

/// Immutable description of a bounded complete Reinhardt domain via its shadow.
class ShadowRegion {
public:
  const Profile& profile() const { return profile_; }
  double y_max() const { return y_max_; }
  double x_max() const { return x_max_; }
  const std::string& name() const { return name_; }

  /// Horizontal slice radius r_h(y), y in [0, y_max].
  double slice_radius(double y) const {
    if (!(y >= 0.0 && y <= y_max_))
      fail(ErrorCode::OutOfRange,
           "slice height " + std::to_string(y) + " outside [0, " + std::to_string(y_max_) + "]");
    return profile_value(y);
  }

  /// Vertical slice radius r_v(x) = sup{ y : r_h(y) >= x }, x in [0, x_max].
  double vertical_slice_radius(double x) const {
    if (!(x >= 0.0 && x <= x_max_))
      fail(ErrorCode::OutOfRange,
           "slice abscissa " + std::to_string(x) + " outside [0, " + std::to_string(x_max_) + "]");
    return std::visit([&](const auto& p) { return vertical(p, x); }, profile_);
  }

  /// Interior points of [0, y_max] where r_h fails to be smooth (corners, sample nodes).
  std::vector<double> breakpoints() const {
    return std::visit([&](const auto& p) { return corners(p); }, profile_);
  }

  /// Whether moments have a closed form (bidisk and ball families).
  bool has_closed_form_moments() const {
    return std::holds_alternative<profile::Bidisk>(profile_) ||
           std::holds_alternative<profile::Ball>(profile_);
  }

private:
  friend ShadowRegion make_shadow(Profile, std::string);

  ShadowRegion(Profile p, std::string name) : profile_(std::move(p)), name_(std::move(name)) {}

  double profile_value(double y) const {
    return std::visit([&](const auto& p) { return value(p, y); }, profile_);
  }

  static double value(const profile::Bidisk& p, double) { return p.r_z; }
  static double value(const profile::Ball& p, double y) {
    return std::sqrt(std::max(0.0, p.radius * p.radius - y * y));
  }
  static double value(const profile::Intersection& p, double y) {
    return std::min(p.r_z, std::sqrt(std::max(0.0, p.radius * p.radius - y * y)));
  }
  static double value(const profile::Sampled& p, double y) {
    const auto& pts = p.points;
    if (y >= pts.back().first) return pts.back().second;
    auto it = std::upper_bound(pts.begin(), pts.end(), y,
                               [](double v, const auto& pt) { return v < pt.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (y - lo.first) / (hi.first - lo.first);
    return lo.second + t * (hi.second - lo.second);
  }

  double vertical(const profile::Bidisk& p, double) const { return p.r_w; }
  double vertical(const profile::Ball& p, double x) const {
    return std::sqrt(std::max(0.0, p.radius * p.radius - x * x));
  }
  double vertical(const profile::Intersection& p, double x) const {
    return std::min(y_max_, std::sqrt(std::max(0.0, p.radius * p.radius - x * x)));
  }
  double vertical(const profile::Sampled& p, double x) const {
    // r_h is non-increasing: bisect for the last height where it still reaches x.
    if (value(p, y_max_) >= x) return y_max_;
    double lo = 0.0, hi = y_max_;
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
      const double mid = 0.5 * (lo + hi);
      (value(p, mid) >= x ? lo : hi) = mid;
    }
    return lo;
  }

  std::vector<double> corners(const profile::Bidisk&) const { return {}; }
  std::vector<double> corners(const profile::Ball&) const { return {}; }
  std::vector<double> corners(const profile::Intersection& p) const {
    if (p.radius <= p.r_z) return {};
    const double y = std::sqrt(p.radius * p.radius - p.r_z * p.r_z);
    if (y > 0.0 && y < y_max_) return {y};
    return {};
  }
  std::vector<double> corners(const profile::Sampled& p) const {
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < p.points.size(); ++i) out.push_back(p.points[i].first);
    return out;
  }

  Profile profile_;
  std::string name_;
  double y_max_ = 0.0;
  double x_max_ = 0.0;
};

namespace detail {

inline std::pair<double, double> extent(const Profile& p) {
  struct {
    std::pair<double, double> operator()(const profile::Bidisk& b) const { return {b.r_w, b.r_z}; }
    std::pair<double, double> operator()(const profile::Ball& b) const {
      return {b.radius, b.radius};
    }
    std::pair<double, double> operator()(const profile::Intersection& b) const {
      return {std::min(b.r_w, b.radius), std::min(b.r_z, b.radius)};
    }
    std::pair<double, double> operator()(const profile::Sampled& s) const {
      if (s.points.empty()) return {0.0, 0.0};
      return {s.points.back().first, s.points.front().second};
    }
  } visitor;
  return std::visit(visitor, p);
}

inline void check_sampled(const profile::Sampled& s) {
  const auto& pts = s.points;
  if (pts.size() < 2) fail(ErrorCode::EmptyDomain, "sampled profile needs at least two points");
  if (pts.front().first != 0.0)
    fail(ErrorCode::InvalidArgument, "sampled profile must start at y = 0");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!std::isfinite(pts[i].first) || !std::isfinite(pts[i].second) || pts[i].second < 0.0)
      fail(ErrorCode::InvalidArgument, "sampled profile has a negative or non-finite entry");
    if (i > 0 && !(pts[i].first > pts[i - 1].first))
      fail(ErrorCode::InvalidArgument, "sampled heights must be strictly increasing");
  }
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].second > pts[i - 1].second + kProfileTolerance)
      fail(ErrorCode::NonMonotoneProfile,
           "profile increases between y = " + std::to_string(pts[i - 1].first) + " and " +
               std::to_string(pts[i].first));
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double s0 = (pts[i].second - pts[i - 1].second) / (pts[i].first - pts[i - 1].first);
    const double s1 = (pts[i + 1].second - pts[i].second) / (pts[i + 1].first - pts[i].first);
    // Slope increase by ds over a panel of width h bends the curve by about ds*h.
    const double h = std::min(pts[i].first - pts[i - 1].first, pts[i + 1].first - pts[i].first);
    if ((s1 - s0) * h > kProfileTolerance)
      fail(ErrorCode::NonConvexShadow,
           "profile is not concave at y = " + std::to_string(pts[i].first));
  }
}

}  // namespace detail

/// Validates a profile and builds the region. Rejects non-monotone or non-concave profiles
/// beyond 1e-9 (checked exactly at sample nodes and on a 1000-point grid).
inline ShadowRegion make_shadow(Profile p, std::string name = {}) {
  std::visit(
      [](const auto& q) {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, profile::Bidisk>) {
          if (!(q.r_z > 0.0 && q.r_w > 0.0))
            fail(ErrorCode::EmptyDomain, "bidisk radii must be positive");
        } else if constexpr (std::is_same_v<T, profile::Ball>) {
          if (!(q.radius > 0.0)) fail(ErrorCode::EmptyDomain, "ball radius must be positive");
        } else if constexpr (std::is_same_v<T, profile::Intersection>) {
          if (!(q.r_z > 0.0 && q.r_w > 0.0 && q.radius > 0.0))
            fail(ErrorCode::EmptyDomain, "intersection radii must be positive");
        } else {
          detail::check_sampled(q);
        }
      },
      p);
  const auto [y_max, x_max] = detail::extent(p);
  if (!(y_max > 0.0) || !(x_max > 0.0))
    fail(ErrorCode::EmptyDomain, "shadow has y_max <= 0 or x_max <= 0");

  ShadowRegion shadow(std::move(p), std::move(name));
  shadow.y_max_ = y_max;
  shadow.x_max_ = x_max;

  constexpr int kGrid = 1000;
  double prev = shadow.profile_value(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double y = y_max * i / kGrid;
    const double r = shadow.profile_value(y);
    if (r > prev + kProfileTolerance)
      fail(ErrorCode::NonMonotoneProfile, "profile increases near y = " + std::to_string(y));
    prev = r;
  }
  for (int i = 1; i < kGrid; ++i) {
    const double y0 = y_max * (i - 1) / kGrid, y2 = y_max * (i + 1) / kGrid;
    const double mid = shadow.profile_value(0.5 * (y0 + y2));
    if (mid < 0.5 * (shadow.profile_value(y0) + shadow.profile_value(y2)) - kProfileTolerance)
      fail(ErrorCode::NonConvexShadow, "midpoint test fails near y = " + std::to_string(y0));
  }
  return shadow;
}

inline ShadowRegion unit_bidisk() { return make_shadow(profile::Bidisk{1.0, 1.0}, "bidisk"); }
inline ShadowRegion unit_ball() { return make_shadow(profile::Ball{1.0}, "ball"); }

/// The bidisk cut by the ball of radius (1 + sqrt 2)/2: a convex Reinhardt domain whose
/// boundary carries both horizontal and vertical disks.
inline constexpr double kPaperIntersectionRadius = 1.2071067811865475244;  // (1 + sqrt 2) / 2

inline ShadowRegion paper_intersection() {
  return make_shadow(profile::Intersection{1.0, 1.0, kPaperIntersectionRadius},
                     "paper-intersection");
}

enum class DiskOrientation { horizontal, vertical };

inline const char* to_string(DiskOrientation o) {
  return o == DiskOrientation::horizontal ? "horizontal" : "vertical";
}

/// Representative of a circle family of analytic disks in the boundary.
/// Horizontal: {(zeta, w0) : |zeta| < radius}, |w0| = base_modulus = y_max.
/// Vertical:   {(z0, zeta) : |zeta| < radius}, |z0| = base_modulus = x_max.
struct BoundaryDisk {
  DiskOrientation orientation = DiskOrientation::horizontal;
  double base_modulus = 0.0;
  double radius = 0.0;
};

inline double slice_radius(const ShadowRegion& shadow, double y) { return shadow.slice_radius(y); }

/// Disks in the boundary of a convex complete Reinhardt domain in C^2 are horizontal or
/// vertical; they sit over the top edge (y = y_max) and the right edge (x = x_max) of the
/// shadow. One representative per orientation, only when its radius exceeds 1e-9.
inline std::vector<BoundaryDisk> detect_boundary_disks(const ShadowRegion& shadow) {
  std::vector<BoundaryDisk> disks;
  const double top = shadow.slice_radius(shadow.y_max());
  if (top > kDiskTolerance)
    disks.push_back({DiskOrientation::horizontal, shadow.y_max(), top});
  const double right = shadow.vertical_slice_radius(shadow.x_max());
  if (right > kDiskTolerance)
    disks.push_back({DiskOrientation::vertical, shadow.x_max(), right});
  return disks;
}

struct SliceLimitReport {
  double y0 = 0.0;
  double limit = 0.0;  // r_h(y0)
  std::vector<double> heights;
  std::vector<double> radii;
  std::vector<double> errors;  // |r_j - r_0|
  double observed_rate = 0.0;  // slope of log error against log |y_j - y0|
  bool monotone_tail = false;
  bool passed = false;
};

/// Checks r_j = r_h(y_j) -> r_h(y0) along a sequence y_j -> y0. Passes when the error is
/// already below 1e-9 everywhere, or when the second half of the error sequence is
/// non-increasing, the last error is below the largest one, and the observed rate is positive.
inline SliceLimitReport verify_slice_limit(const ShadowRegion& shadow, double y0,
                                           const std::vector<double>& approach) {
  if (approach.size() < 2) fail(ErrorCode::InvalidArgument, "approach sequence needs 2+ points");
  SliceLimitReport rep;
  rep.y0 = y0;
  rep.limit = shadow.slice_radius(y0);
  double max_err = 0.0;
  for (double y : approach) {
    const double r = shadow.slice_radius(y);
    rep.heights.push_back(y);
    rep.radii.push_back(r);
    rep.errors.push_back(std::abs(r - rep.limit));
    max_err = std::max(max_err, rep.errors.back());
  }
  const std::size_t n = approach.size();
  rep.monotone_tail = true;
  for (std::size_t j = n / 2 + 1; j < n; ++j)
    if (rep.errors[j] > rep.errors[j - 1] + 1e-15) rep.monotone_tail = false;

  // Rate from the first and last points with nonzero error and distance.
  std::optional<std::size_t> first, last;
  for (std::size_t j = 0; j < n; ++j) {
    if (rep.errors[j] > 0.0 && std::abs(approach[j] - y0) > 0.0) {
      if (!first) first = j;
      last = j;
    }
  }
  if (first && last && *first != *last) {
    const double de = std::log(rep.errors[*last] / rep.errors[*first]);
    const double dd = std::log(std::abs(approach[*last] - y0) / std::abs(approach[*first] - y0));
    if (dd != 0.0) rep.observed_rate = de / dd;
  }
  if (max_err <= kProfileTolerance) {
    rep.passed = true;
  } else {
    rep.passed = rep.monotone_tail && rep.errors.back() < max_err && rep.observed_rate > 0.0;
  }
  return rep;
}

}  // namespace bergman
