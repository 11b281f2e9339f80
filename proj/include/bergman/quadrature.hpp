#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "bergman/error.hpp"

namespace bergman {

struct QuadratureResult {
  double value = 0.0;
  double error_bound = 0.0;
  long evaluations = 0;
};

struct RombergOptions {
  double rel_tol = 1e-13;     // stop when two consecutive diagonal estimates agree to this
  double accept_tol = 1e-8;   // relative error still acceptable when max_level is reached
  int min_level = 5;
  int max_level = 22;
};

/// Romberg integration: trapezoid sums refined by inserting midpoints, with the Richardson
/// tableau carried along. The error bound is four times the larger of the last two changes of the
/// diagonal estimate, floored at a rounding allowance.
template <class F>
QuadratureResult romberg(F&& f, double a, double b, const RombergOptions& opt = {}) {
  QuadratureResult out;
  if (a == b) return out;
  std::vector<double> prev, row;
  double h = b - a;
  double trap = 0.5 * h * (f(a) + f(b));
  out.evaluations = 2;
  prev.push_back(trap);
  double last_err = INFINITY;
  for (int k = 1; k <= opt.max_level; ++k) {
    h *= 0.5;
    const long n_new = 1L << (k - 1);
    double sum = 0.0;
    for (long i = 0; i < n_new; ++i) sum += f(a + (2 * i + 1) * h);
    out.evaluations += n_new;
    trap = 0.5 * trap + h * sum;
    row.assign(k + 1, 0.0);
    row[0] = trap;
    double factor = 1.0;
    for (int j = 1; j <= k; ++j) {
      factor *= 4.0;
      row[j] = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0);
    }
    const double err = std::abs(row[k] - prev[k - 1]);
    const double scale = std::abs(row[k]);
    out.value = row[k];
    out.error_bound = std::max(err, last_err == INFINITY ? err : last_err);
    if (k >= opt.min_level && err <= opt.rel_tol * scale && last_err <= opt.rel_tol * scale * 16) {
      out.error_bound = std::max({4.0 * err, 4.0 * last_err, 64.0 * std::numeric_limits<double>::epsilon() * scale});
      return out;
    }
    last_err = err;
    prev.swap(row);
  }
  if (out.error_bound <= opt.accept_tol * std::abs(out.value)) return out;
  fail(ErrorCode::QuadratureNonConvergence,
       "Romberg did not converge on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
}

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
inline const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

template <class F>
auto gauss_fixed(F&& f, double a, double b, int n) {
  using R = std::decay_t<decltype(f(a))>;
  const auto& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  R s{};
  for (int i = 0; i < n; ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return s * half;
}

/// Globally adaptive Gauss-Legendre: the panel with the largest error estimate (difference between
/// one 12-point rule and two half-panel rules) is bisected until the summed estimate drops below
/// abs_tol or max_panels is reached. The error bound is the summed estimate.
template <class F>
QuadratureResult adaptive_gauss(F&& f, double a, double b, double abs_tol = 1e-13,
                                int max_panels = 4000) {
  struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  QuadratureResult out;
  if (a == b) return out;
  auto make = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double whole = gauss_fixed(f, lo, hi, 12);
    const double split = gauss_fixed(f, lo, mid, 12) + gauss_fixed(f, mid, hi, 12);
    out.evaluations += 36;
    return Panel{lo, hi, split, std::abs(split - whole)};
  };
  std::priority_queue<Panel> heap;
  heap.push(make(a, b));
  double value = heap.top().value, error = heap.top().error;
  while (error > abs_tol && static_cast<int>(heap.size()) < max_panels) {
    const Panel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.lo + p.hi);
    if (!(mid > p.lo && mid < p.hi)) {  // panel below double resolution: freeze it
      heap.push({p.lo, p.hi, p.value, 0.0});
      error -= p.error;
      if (heap.top().error == 0.0) break;
      continue;
    }
    const Panel l = make(p.lo, mid), r = make(mid, p.hi);
    value += l.value + r.value - p.value;
    error += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
  }
  // Re-sum to shed drift from the running updates.
  value = 0.0;
  error = 0.0;
  for (; !heap.empty(); heap.pop()) {
    value += heap.top().value;
    error += heap.top().error;
  }
  out.value = value;
  out.error_bound = error;
  return out;
}

/// Integral of f over the annulus rho_in < |z| < rho_out: Gauss-Legendre in the radius,
/// trapezoid (spectrally accurate for periodic integrands) in the angle.
template <class F>
auto polar_integral(F&& f, double rho_in, double rho_out, int n_radial = 64,
                    int n_angular = 128) {
  using R = std::decay_t<decltype(f(std::complex<double>{}))>;
  const double dtheta = 2.0 * std::numbers::pi / n_angular;
  return gauss_fixed(
      [&](double rho) {
        R s{};
        for (int k = 0; k < n_angular; ++k)
          s += f(std::polar(rho, (k + 0.5) * dtheta));
        return s * dtheta * rho;
      },
      rho_in, rho_out, n_radial);
}

}  // namespace bergman
