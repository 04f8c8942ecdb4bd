#pragma once

#include <algorithm>
#include <vector>

#include "curvflow/bivar_poly.hpp"
#include "curvflow/univar_poly.hpp"

namespace curvflow {

namespace detail {

// Polynomials in the first variable whose coefficients are univariate polynomials in the second.
using RecursivePoly = std::vector<UnivarPoly>;

inline void trim(RecursivePoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline UnivarPoly content(const RecursivePoly& p) {
  UnivarPoly g;
  for (const auto& c : p) {
    g = gcd(g, c);
    if (g.degree() == 0) break;
  }
  return g;
}

inline RecursivePoly primitive_part(const RecursivePoly& p) {
  UnivarPoly c = content(p);
  RecursivePoly out;
  out.reserve(p.size());
  for (const auto& x : p) out.push_back(exact_div(x, c));
  return out;
}

// lc(b)^k * a mod b in Q[y][x], coefficients reduced to keep growth in check.
inline RecursivePoly pseudo_remainder(RecursivePoly a, const RecursivePoly& b) {
  const std::size_t n = b.size() - 1;
  const UnivarPoly& lc = b.back();
  trim(a);
  while (!a.empty() && a.size() - 1 >= n) {
    const std::size_t shift = a.size() - 1 - n;
    UnivarPoly t = a.back();
    for (auto& c : a) c = lc * c;
    for (std::size_t k = 0; k <= n; ++k) a[k + shift] = a[k + shift] - t * b[k];
    trim(a);
  }
  return a;
}

inline BivarPoly homogeneous_gcd(const BivarPoly& a, const BivarPoly& b) {
  UnivarPoly pa = a.dehomogenize();
  UnivarPoly pb = b.dehomogenize();
  unsigned ea = static_cast<unsigned>(a.degree() - pa.degree());
  unsigned eb = static_cast<unsigned>(b.degree() - pb.degree());
  UnivarPoly g = gcd(pa, pb);
  return BivarPoly::homogenize(g, static_cast<unsigned>(g.degree()) + std::min(ea, eb), a.basis());
}

inline BivarPoly recursive_gcd(const BivarPoly& a, const BivarPoly& b) {
  RecursivePoly ra = a.coeffs_in_first();
  RecursivePoly rb = b.coeffs_in_first();
  UnivarPoly ca = content(ra);
  UnivarPoly cb = content(rb);
  UnivarPoly c = gcd(ca, cb);
  ra = primitive_part(ra);
  rb = primitive_part(rb);
  if (ra.size() < rb.size()) std::swap(ra, rb);
  while (rb.size() > 1) {
    RecursivePoly r = pseudo_remainder(ra, rb);
    ra = std::move(rb);
    if (r.empty()) {
      rb.clear();
      break;
    }
    rb = primitive_part(r);
  }
  // rb empty: ra is the gcd; rb constant in x: the primitive gcd is 1.
  RecursivePoly g = rb.empty() ? ra : RecursivePoly{UnivarPoly::constant(1)};
  for (auto& x : g) x = c * x;
  return BivarPoly::from_coeffs_in_first(g, a.basis());
}

}  // namespace detail

/// Greatest common divisor normalized to coprime integer coefficients with positive
/// grlex-leading coefficient. gcd(0, 0) = 0.
inline BivarPoly gcd(const BivarPoly& a, const BivarPoly& b) {
  a.check_basis(b);
  if (a.is_zero()) return b.primitive_normalized();
  if (b.is_zero()) return a.primitive_normalized();
  if (a.is_constant() || b.is_constant()) return BivarPoly::constant(1, a.basis());
  BivarPoly g = (a.is_homogeneous() && b.is_homogeneous()) ? detail::homogeneous_gcd(a, b)
                                                            : detail::recursive_gcd(a, b);
  return g.primitive_normalized();
}

/// Same as gcd() but always through the recursive primitive remainder sequence; kept
/// public so tests can cross-check the homogeneous shortcut.
inline BivarPoly gcd_recursive(const BivarPoly& a, const BivarPoly& b) {
  a.check_basis(b);
  if (a.is_zero()) return b.primitive_normalized();
  if (b.is_zero()) return a.primitive_normalized();
  return detail::recursive_gcd(a, b).primitive_normalized();
}

}  // namespace curvflow
