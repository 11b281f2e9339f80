#pragma once

// Bi-monomial symbols  sum c * z^a conj(z)^b w^c conj(w)^d  on C^2.

#include <algorithm>
#include <array>
#include <complex>
#include <map>
#include <sstream>
#include <string>

#include "bergman/disk.hpp"
#include "bergman/error.hpp"

namespace bergman {

struct Exponents {
  int a = 0, b = 0, c = 0, d = 0;
  auto operator<=>(const Exponents&) const = default;
};

class MonomialSymbol {
public:
  MonomialSymbol() = default;

  static MonomialSymbol monomial(int a, int b, int c, int d, cplx coeff = 1.0) {
    MonomialSymbol s;
    s.add({a, b, c, d}, coeff);
    return s;
  }
  static MonomialSymbol constant(cplx c) { return monomial(0, 0, 0, 0, c); }
  static MonomialSymbol z() { return monomial(1, 0, 0, 0); }
  static MonomialSymbol zbar() { return monomial(0, 1, 0, 0); }
  static MonomialSymbol w() { return monomial(0, 0, 1, 0); }
  static MonomialSymbol wbar() { return monomial(0, 0, 0, 1); }

  const std::map<Exponents, cplx>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  MonomialSymbol& add(Exponents e, cplx c) {
    if (e.a < 0 || e.b < 0 || e.c < 0 || e.d < 0)
      fail(ErrorCode::InvalidArgument, "negative exponent in symbol");
    if (c == cplx{}) return *this;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == cplx{}) terms_.erase(it);
    }
    return *this;
  }

  cplx coefficient(Exponents e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? cplx{} : it->second;
  }

  /// No conjugated variables.
  bool is_holomorphic() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.first.b == 0 && t.first.d == 0; });
  }
  /// Depends on z only (c = d = 0 everywhere).
  bool is_z_only() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.first.c == 0 && t.first.d == 0; });
  }

  /// Largest upward index shift in z and w produced by multiplication and projection.
  int max_shift_z() const {
    int s = 0;
    for (const auto& [e, c] : terms_) s = std::max(s, e.a - e.b);
    return s;
  }
  int max_shift_w() const {
    int s = 0;
    for (const auto& [e, c] : terms_) s = std::max(s, e.c - e.d);
    return s;
  }
  /// Largest |c - d|, the w-frequency spread of the symbol.
  int max_w_frequency() const {
    int s = 0;
    for (const auto& [e, c] : terms_) s = std::max(s, std::abs(e.c - e.d));
    return s;
  }

  cplx operator()(cplx z, cplx w) const {
    cplx s{};
    for (const auto& [e, c] : terms_)
      s += c * std::pow(z, e.a) * std::pow(std::conj(z), e.b) * std::pow(w, e.c) *
           std::pow(std::conj(w), e.d);
    return s;
  }

  MonomialSymbol conj() const {
    MonomialSymbol s;
    for (const auto& [e, c] : terms_) s.add({e.b, e.a, e.d, e.c}, std::conj(c));
    return s;
  }

  /// Swaps the roles of z and w.
  MonomialSymbol swapped() const {
    MonomialSymbol s;
    for (const auto& [e, c] : terms_) s.add({e.c, e.d, e.a, e.b}, c);
    return s;
  }

  /// Restriction to the horizontal disk {(zeta, w0)}: a function of zeta.
  DiskFunction restrict_horizontal(cplx w0, double radius) const {
    DiskFunction f(radius);
    for (const auto& [e, c] : terms_)
      f.add(e.a, e.b, c * std::pow(w0, e.c) * std::pow(std::conj(w0), e.d));
    return f;
  }
  /// Restriction to the vertical disk {(z0, zeta)}: a function of zeta.
  DiskFunction restrict_vertical(cplx z0, double radius) const {
    DiskFunction f(radius);
    for (const auto& [e, c] : terms_)
      f.add(e.c, e.d, c * std::pow(z0, e.a) * std::pow(std::conj(z0), e.b));
    return f;
  }

  MonomialSymbol& operator+=(const MonomialSymbol& o) {
    for (const auto& [e, c] : o.terms_) add(e, c);
    return *this;
  }
  MonomialSymbol& operator-=(const MonomialSymbol& o) {
    for (const auto& [e, c] : o.terms_) add(e, -c);
    return *this;
  }
  MonomialSymbol& operator*=(cplx s) {
    if (s == cplx{}) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend MonomialSymbol operator+(MonomialSymbol x, const MonomialSymbol& y) { return x += y; }
  friend MonomialSymbol operator-(MonomialSymbol x, const MonomialSymbol& y) { return x -= y; }
  friend MonomialSymbol operator*(MonomialSymbol x, cplx s) { return x *= s; }
  friend MonomialSymbol operator*(cplx s, MonomialSymbol x) { return x *= s; }
  friend MonomialSymbol operator*(const MonomialSymbol& x, const MonomialSymbol& y) {
    MonomialSymbol s;
    for (const auto& [ex, cx] : x.terms_)
      for (const auto& [ey, cy] : y.terms_)
        s.add({ex.a + ey.a, ex.b + ey.b, ex.c + ey.c, ex.d + ey.d}, cx * cy);
    return s;
  }
  friend bool operator==(const MonomialSymbol& x, const MonomialSymbol& y) {
    return x.terms_ == y.terms_;
  }

  /// Human-readable form, e.g. "(1+0i) zbar^1 + (2+0i) z^1 w^1".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << '(' << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
      if (e.a) os << " z^" << e.a;
      if (e.b) os << " zbar^" << e.b;
      if (e.c) os << " w^" << e.c;
      if (e.d) os << " wbar^" << e.d;
    }
    return os.str();
  }

private:
  std::map<Exponents, cplx> terms_;
};

}  // namespace bergman
