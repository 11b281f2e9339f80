#pragma once

// Finite sections of Toeplitz operators and Hankel products on A^2(Omega) in the orthonormal
// monomial basis e_{alpha beta} = z^alpha w^beta / c_{alpha beta}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bergman/error.hpp"
#include "bergman/moments.hpp"
#include "bergman/parallel.hpp"
#include "bergman/symbol.hpp"

namespace bergman {

// ---------------------------------------------------------------------------------------------
// L^2(Omega) algebra of bi-monomial functions.

/// <f, g>_{L^2(Omega)}. A pair of terms survives angular integration only when the z- and
/// w-frequencies match; the surviving integral is a moment.
inline cplx l2_inner(const MomentTable& table, const MonomialSymbol& f, const MonomialSymbol& g) {
  cplx s{};
  for (const auto& [ef, cf] : f.terms())
    for (const auto& [eg, cg] : g.terms()) {
      if (ef.a + eg.b != ef.b + eg.a || ef.c + eg.d != ef.d + eg.c) continue;
      s += cf * std::conj(cg) * table(ef.a + eg.b + ef.b + eg.a, ef.c + eg.d + ef.d + eg.c);
    }
  return s;
}

inline double l2_norm_sq(const MomentTable& table, const MonomialSymbol& f) {
  return l2_inner(table, f, f).real();
}

/// Bergman projection P^Omega:
///   z^a zbar^b w^c wbar^d -> mu(2a, 2c) / mu(2(a-b), 2(c-d)) z^{a-b} w^{c-d}  (a >= b, c >= d).
inline MonomialSymbol bergman_project(const MomentTable& table, const MonomialSymbol& f) {
  MonomialSymbol out;
  for (const auto& [e, c] : f.terms()) {
    if (e.a < e.b || e.c < e.d) continue;
    if (e.b == 0 && e.d == 0) {
      out.add(e, c);
      continue;
    }
    const int n = e.a - e.b, k = e.c - e.d;
    out.add({n, 0, k, 0}, c * table(2 * e.a, 2 * e.c) / table(2 * n, 2 * k));
  }
  return out;
}

/// H_phi f = phi f - P(phi f).
inline MonomialSymbol hankel_apply(const MomentTable& table, const MonomialSymbol& phi,
                                   const MonomialSymbol& f) {
  const MonomialSymbol prod = phi * f;
  return prod - bergman_project(table, prod);
}

/// T_phi f = P(phi f).
inline MonomialSymbol toeplitz_apply(const MomentTable& table, const MonomialSymbol& phi,
                                     const MonomialSymbol& f) {
  return bergman_project(table, phi * f);
}

// ---------------------------------------------------------------------------------------------
// Index sets and sections.

using BasisIndex = std::pair<int, int>;  // (alpha, beta)

/// All (alpha, beta) with alpha <= n_z, beta <= n_w in graded-lex order (alpha + beta, alpha).
inline std::vector<BasisIndex> graded_lex_indices(int n_z, int n_w) {
  if (n_z < 0 || n_w < 0) fail(ErrorCode::InvalidArgument, "truncation degrees must be >= 0");
  std::vector<BasisIndex> out;
  out.reserve(static_cast<std::size_t>(n_z + 1) * (n_w + 1));
  for (int total = 0; total <= n_z + n_w; ++total)
    for (int alpha = 0; alpha <= std::min(total, n_z); ++alpha)
      if (total - alpha <= n_w) out.emplace_back(alpha, total - alpha);
  return out;
}

/// Position lookup for a box index set in graded-lex order.
class IndexLookup {
public:
  explicit IndexLookup(const std::vector<BasisIndex>& idx, int n_z, int n_w)
    : n_z_(n_z), n_w_(n_w), pos_(static_cast<std::size_t>(n_z + 1) * (n_w + 1), -1) {
    for (std::size_t k = 0; k < idx.size(); ++k)
      pos_[static_cast<std::size_t>(idx[k].first) * (n_w + 1) + idx[k].second] = static_cast<int>(k);
  }
  int operator()(int alpha, int beta) const {
    if (alpha < 0 || beta < 0 || alpha > n_z_ || beta > n_w_) return -1;
    return pos_[static_cast<std::size_t>(alpha) * (n_w_ + 1) + beta];
  }

private:
  int n_z_, n_w_;
  std::vector<int> pos_;
};

/// Matrix of an operator from span{e_k : k in index_map} to span{e_j : j in range_map}.
/// Entry (j, k) = <A e_k, e_j>. Square sections have range_map == index_map.
struct OperatorSection {
  std::vector<BasisIndex> index_map;
  std::vector<BasisIndex> range_map;
  Eigen::MatrixXcd entries;
  std::string symbol_meta;
  int n_z = 0;
  int n_w = 0;
  int padding = 0;

  bool is_square() const { return index_map == range_map; }

  /// max |A - A^*| over the entries, relative to max |A|.
  double hermitian_defect() const {
    if (!is_square()) return INFINITY;
    const double scale = std::max(entries.cwiseAbs().maxCoeff(), 1e-300);
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff() / scale;
  }
};

namespace detail {

/// Matrix of T_symbol from the box (n_z, n_w) into the box (n_z + padding, n_w + padding);
/// images falling outside the range box are dropped.
inline OperatorSection toeplitz_block(const MomentTable& table, const MonomialSymbol& symbol,
                                      int n_z, int n_w, int padding) {
  OperatorSection s;
  s.n_z = n_z;
  s.n_w = n_w;
  s.padding = padding;
  s.symbol_meta = "T[" + symbol.to_string() + "]";
  s.index_map = graded_lex_indices(n_z, n_w);
  s.range_map = padding == 0 ? s.index_map : graded_lex_indices(n_z + padding, n_w + padding);
  const IndexLookup range(s.range_map, n_z + padding, n_w + padding);
  s.entries = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(s.range_map.size()),
                                     static_cast<Eigen::Index>(s.index_map.size()));
  parallel_for(s.index_map.size(), [&](std::size_t k) {
    const auto [alpha, beta] = s.index_map[k];
    const double c_in = table.monomial_norm(alpha, beta);
    for (const auto& [e, coeff] : symbol.terms()) {
      const int gamma = alpha + e.a - e.b, delta = beta + e.c - e.d;
      const int j = range(gamma, delta);
      if (j < 0) continue;
      s.entries(j, static_cast<Eigen::Index>(k)) +=
          coeff * table(2 * (alpha + e.a), 2 * (beta + e.c)) /
          (c_in * table.monomial_norm(gamma, delta));
    }
  });
  return s;
}

}  // namespace detail

/// Section of T_symbol from the box (n_z, n_w) into the box (n_z + padding, n_w + padding).
/// The padding must cover the symbol's upward shift, so every image T e_k is represented in full.
///   entry ((gamma, delta), (alpha, beta)) = sum coeff mu(2(alpha + a), 2(beta + c)) / (c_ab c_gd)
///   for gamma = alpha + a - b, delta = beta + c - d.
inline OperatorSection toeplitz_section(const MomentTable& table, const MonomialSymbol& symbol,
                                        int n_z, int n_w, int padding = 0) {
  if (padding < 0) fail(ErrorCode::InvalidArgument, "padding must be non-negative");
  if (padding < std::max(symbol.max_shift_z(), symbol.max_shift_w()))
    fail(ErrorCode::InvalidArgument, "padding " + std::to_string(padding) +
                                         " is below the symbol's index shift");
  return detail::toeplitz_block(table, symbol, n_z, n_w, padding);
}

/// Section of H_psi^* H_phi = T_{conj(psi) phi} - T_{conj(psi)} T_phi on the box (n_z, n_w).
/// T_phi is taken into a box padded by its upward shift (plus extra_padding), so each retained
/// entry of the product is exact.
inline OperatorSection hankel_product_section(const MomentTable& table, const MonomialSymbol& psi,
                                              const MonomialSymbol& phi, int n_z, int n_w,
                                              int extra_padding = 0) {
  if (extra_padding < 0) fail(ErrorCode::InvalidArgument, "padding must be non-negative");
  const MonomialSymbol psi_bar = psi.conj();
  const int pad = std::max(phi.max_shift_z(), phi.max_shift_w()) + extra_padding;
  const OperatorSection semi = detail::toeplitz_block(table, psi_bar * phi, n_z, n_w, 0);
  const OperatorSection t_phi = toeplitz_section(table, phi, n_z, n_w, pad);

  // T_{conj psi} restricted to the padded box, keeping only rows in the target box.
  const IndexLookup target(semi.index_map, n_z, n_w);
  Eigen::MatrixXcd t_psi_bar = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(semi.index_map.size()),
      static_cast<Eigen::Index>(t_phi.range_map.size()));
  parallel_for(t_phi.range_map.size(), [&](std::size_t k) {
    const auto [alpha, beta] = t_phi.range_map[k];
    const double c_in = table.monomial_norm(alpha, beta);
    for (const auto& [e, coeff] : psi_bar.terms()) {
      const int j = target(alpha + e.a - e.b, beta + e.c - e.d);
      if (j < 0) continue;
      t_psi_bar(j, static_cast<Eigen::Index>(k)) +=
          coeff * table(2 * (alpha + e.a), 2 * (beta + e.c)) /
          (c_in * table.monomial_norm(alpha + e.a - e.b, beta + e.c - e.d));
    }
  });

  OperatorSection out;
  out.n_z = n_z;
  out.n_w = n_w;
  out.padding = pad;
  out.index_map = semi.index_map;
  out.range_map = semi.index_map;
  out.symbol_meta = "H*[" + psi.to_string() + "] H[" + phi.to_string() + "]";
  out.entries = semi.entries - t_psi_bar * t_phi.entries;
  return out;
}

// ---------------------------------------------------------------------------------------------
// Product identity: H_psi^* H_phi = P M_{conj psi} H_phi.

struct ProductIdentityResult {
  cplx projected;  // <P(conj(psi) H_phi f), g>
  cplx gram;       // <H_phi f, H_psi g>
  double residual = 0.0;
};

inline ProductIdentityResult verify_lemma1(const MomentTable& table, const MonomialSymbol& psi,
                                  const MonomialSymbol& phi, const MonomialSymbol& f,
                                  const MonomialSymbol& g) {
  if (!f.is_holomorphic() || !g.is_holomorphic())
    fail(ErrorCode::NotHolomorphic, "f and g must be holomorphic polynomials");
  const MonomialSymbol h_phi_f = hankel_apply(table, phi, f);
  ProductIdentityResult r;
  r.projected = l2_inner(table, bergman_project(table, psi.conj() * h_phi_f), g);
  r.gram = l2_inner(table, h_phi_f, hankel_apply(table, psi, g));
  r.residual = std::abs(r.projected - r.gram);
  return r;
}

}  // namespace bergman
