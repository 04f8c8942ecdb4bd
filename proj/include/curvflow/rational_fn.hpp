#pragma once

#include <utility>

#include "curvflow/bivar_poly.hpp"
#include "curvflow/poly_gcd.hpp"

namespace curvflow {

/// Reduced quotient of two bivariate polynomials in the same basis.
///
/// Canonical form: gcd(num, den) is a unit, den has coprime integer coefficients and a
/// positive grlex-leading coefficient. Zero is 0/1. Two values are equal iff their
/// numerators and denominators are equal term by term.
class RationalFn {
 public:
  RationalFn() : num_(Basis::Lambda), den_(BivarPoly::constant(1)) {}
  explicit RationalFn(Basis basis) : num_(basis), den_(BivarPoly::constant(1, basis)) {}
  /// Polynomial value (denominator 1 up to normalization).
  RationalFn(const BivarPoly& p) : num_(p), den_(BivarPoly::constant(1, p.basis())) {}  // NOLINT
  RationalFn(const BivarPoly& num, const BivarPoly& den) : num_(num), den_(den) { reduce(); }

  static RationalFn constant(const Rational& c, Basis basis = Basis::Lambda) {
    return RationalFn(BivarPoly::constant(c, basis));
  }
  static RationalFn variable(int index, Basis basis = Basis::Lambda) {
    return RationalFn(BivarPoly::variable(index, basis));
  }

  const BivarPoly& num() const { return num_; }
  const BivarPoly& den() const { return den_; }
  Basis basis() const { return num_.basis(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }

  Rational operator()(const Rational& x, const Rational& y) const {
    Rational d = den_(x, y);
    if (d == 0) throw AlgebraError("evaluation at a zero of the denominator");
    return num_(x, y) / d;
  }
  double eval(double x, double y) const { return num_.eval(x, y) / den_.eval(x, y); }

  RationalFn swapped() const { return RationalFn(num_.swapped(), den_.swapped()); }

  /// Quotient-rule derivative with respect to the first (0) or second (1) variable.
  RationalFn partial(int var) const {
    if (den_.is_constant()) return RationalFn(num_.partial(var), den_);
    BivarPoly n = num_.partial(var) * den_ - num_ * den_.partial(var);
    return RationalFn(n, den_ * den_);
  }

  RationalFn pow(unsigned e) const { return RationalFn(num_.pow(e), den_.pow(e), Reduced{}); }

  RationalFn inverse() const {
    if (is_zero()) throw AlgebraError("division by zero rational function");
    return RationalFn(den_, num_);
  }

  friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
    a.num_.check_basis(b.num_);
    if (a.den_ == b.den_) return RationalFn(a.num_ + b.num_, a.den_);
    BivarPoly g = gcd(a.den_, b.den_);
    BivarPoly bd = exact_div(b.den_, g);
    BivarPoly ad = exact_div(a.den_, g);
    return RationalFn(a.num_ * bd + b.num_ * ad, a.den_ * bd);
  }
  friend RationalFn operator-(const RationalFn& a) { return RationalFn(-a.num_, a.den_, Reduced{}); }
  friend RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + (-b); }
  friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
    a.num_.check_basis(b.num_);
    if (a.is_zero() || b.is_zero()) return RationalFn(a.basis());
    // Cross-cancel first so the products stay small.
    BivarPoly g1 = gcd(a.num_, b.den_);
    BivarPoly g2 = gcd(b.num_, a.den_);
    BivarPoly n = exact_div(a.num_, g1) * exact_div(b.num_, g2);
    BivarPoly d = exact_div(a.den_, g2) * exact_div(b.den_, g1);
    return RationalFn(std::move(n), std::move(d), Reduced{});
  }
  friend RationalFn operator*(const Rational& s, const RationalFn& a) {
    return RationalFn(a.num_.scaled(s), a.den_, Reduced{});
  }
  friend RationalFn operator/(const RationalFn& a, const RationalFn& b) { return a * b.inverse(); }

  RationalFn& operator+=(const RationalFn& o) { return *this = *this + o; }
  RationalFn& operator-=(const RationalFn& o) { return *this = *this - o; }
  RationalFn& operator*=(const RationalFn& o) { return *this = *this * o; }

  friend bool operator==(const RationalFn& a, const RationalFn& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  struct Reduced {};
  // Caller guarantees gcd(num, den) is a unit; only the scalar normalization is applied.
  RationalFn(BivarPoly num, BivarPoly den, Reduced) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  void reduce() {
    num_.check_basis(den_);
    if (den_.is_zero()) throw AlgebraError("zero denominator");
    if (num_.is_zero()) {
      den_ = BivarPoly::constant(1, num_.basis());
      return;
    }
    if (!den_.is_constant()) {
      BivarPoly g = gcd(num_, den_);
      if (!g.is_constant()) {
        num_ = exact_div(num_, g);
        den_ = exact_div(den_, g);
      }
    }
    normalize();
  }

  void normalize() {
    if (num_.is_zero()) {
      den_ = BivarPoly::constant(1, num_.basis());
      return;
    }
    Rational s = den_.primitive_scale();
    if (den_.leading_coeff() < 0) s = -s;
    if (s != 1) {
      num_ = num_.scaled(s);
      den_ = den_.scaled(s);
    }
  }

  BivarPoly num_;
  BivarPoly den_;
};

struct SymmetryInfo {
  bool symmetric = false;
  bool homogeneous = false;
  int degree = 0;  ///< deg num - deg den, meaningful when homogeneous
};

inline SymmetryInfo symmetry_and_homogeneity(const RationalFn& f) {
  SymmetryInfo info;
  info.symmetric = f.swapped() == f;
  if (f.is_zero()) {
    info.homogeneous = true;
    return info;
  }
  info.homogeneous = f.num().is_homogeneous() && f.den().is_homogeneous();
  if (info.homogeneous) info.degree = f.num().degree() - f.den().degree();
  return info;
}

/// Write a symmetric polynomial in (l1, l2) as a polynomial in (H, A).
inline BivarPoly to_HA(const BivarPoly& p) {
  if (p.basis() != Basis::Lambda) throw AlgebraError("to_HA expects a lambda-basis polynomial");
  // Reduce against e1^(a-b) e2^b, then substitute e1 = H, e2 = (H^2 - A)/2.
  BivarPoly rest = p;
  BivarPoly in_e(Basis::HA);  // first variable e1, second e2
  const BivarPoly e1 = BivarPoly::variable(0) + BivarPoly::variable(1);
  const BivarPoly e2 = BivarPoly::term(1, 1, 1);
  while (!rest.is_zero()) {
    const auto [m, c] = rest.leading();
    if (m.first < m.second) throw AlgebraError("to_HA: polynomial is not symmetric");
    in_e += BivarPoly::term(c, m.first - m.second, m.second, Basis::HA);
    rest -= (e1.pow(m.first - m.second) * e2.pow(m.second)).scaled(c);
  }
  const BivarPoly H = BivarPoly::variable(0, Basis::HA);
  const BivarPoly A = BivarPoly::variable(1, Basis::HA);
  const BivarPoly K = (H * H - A).scaled(Rational(1, 2));
  return in_e.substitute(H, K);
}

/// Substitute H = l1 + l2, A = l1^2 + l2^2.
inline BivarPoly from_HA(const BivarPoly& p) {
  if (p.basis() != Basis::HA) throw AlgebraError("from_HA expects an HA-basis polynomial");
  const BivarPoly l1 = BivarPoly::variable(0);
  const BivarPoly l2 = BivarPoly::variable(1);
  return p.substitute(l1 + l2, l1 * l1 + l2 * l2);
}

inline RationalFn to_HA(const RationalFn& f) {
  if (f.basis() != Basis::Lambda) throw AlgebraError("to_HA expects a lambda-basis function");
  // In reduced form a symmetric quotient has symmetric numerator and denominator.
  if (!(f.num().swapped() == f.num()) || !(f.den().swapped() == f.den()))
    throw AlgebraError("to_HA: function is not symmetric");
  return RationalFn(to_HA(f.num()), to_HA(f.den()));
}

inline RationalFn from_HA(const RationalFn& f) {
  if (f.basis() != Basis::HA) throw AlgebraError("from_HA expects an HA-basis function");
  return RationalFn(from_HA(f.num()), from_HA(f.den()));
}

/// Bring f into the lambda basis whatever basis it is in.
inline RationalFn as_lambda(const RationalFn& f) { return f.basis() == Basis::Lambda ? f : from_HA(f); }

/// (dF/dl1 - dF/dl2) / (l1 - l2) computed by exact polynomial division.
inline RationalFn difference_quotient(const RationalFn& F) {
  if (F.basis() != Basis::Lambda) throw AlgebraError("difference_quotient expects the lambda basis");
  const BivarPoly& p = F.num();
  const BivarPoly& q = F.den();
  BivarPoly n = (p.partial(0) - p.partial(1)) * q - p * (q.partial(0) - q.partial(1));
  BivarPoly diag = BivarPoly::variable(0) - BivarPoly::variable(1);
  auto [quot, rem] = divmod(n, diag);
  if (!rem.is_zero())
    throw AlgebraError("difference_quotient: numerator not divisible by (l1 - l2); velocity is not symmetric");
  return RationalFn(quot, q * q);
}

}  // namespace curvflow
