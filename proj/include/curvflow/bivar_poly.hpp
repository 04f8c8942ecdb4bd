#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "curvflow/rational.hpp"
#include "curvflow/univar_poly.hpp"

namespace curvflow {

/// Which pair of variables a polynomial is written in.
enum class Basis {
  Lambda,  ///< principal curvatures (l1, l2)
  HA,      ///< mean curvature H = l1 + l2 and A = |A|^2 = l1^2 + l2^2
};

inline const char* basis_name(Basis b) { return b == Basis::Lambda ? "lambda" : "HA"; }

/// Exponent pair (first, second).
struct Monomial {
  unsigned first = 0;
  unsigned second = 0;

  unsigned degree() const { return first + second; }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded-lexicographic order, largest first: higher total degree wins, ties go to the
/// larger power of the first variable.
struct GrlexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.degree() != b.degree()) return a.degree() > b.degree();
    return a.first > b.first;
  }
};

class BivarPoly {
 public:
  using Terms = std::map<Monomial, Rational, GrlexDescending>;

  BivarPoly() = default;
  explicit BivarPoly(Basis basis) : basis_(basis) {}
  BivarPoly(Basis basis, Terms terms) : basis_(basis), terms_(std::move(terms)) { prune(); }

  static BivarPoly constant(const Rational& c, Basis basis = Basis::Lambda) {
    BivarPoly p(basis);
    if (c != 0) p.terms_.emplace(Monomial{0, 0}, c);
    return p;
  }
  static BivarPoly term(const Rational& c, unsigned i, unsigned j, Basis basis = Basis::Lambda) {
    BivarPoly p(basis);
    if (c != 0) p.terms_.emplace(Monomial{i, j}, c);
    return p;
  }
  /// The first (index 0) or second (index 1) variable.
  static BivarPoly variable(int index, Basis basis = Basis::Lambda) {
    return index == 0 ? term(1, 1, 0, basis) : term(1, 0, 1, basis);
  }

  Basis basis() const { return basis_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0); }
  std::size_t size() const { return terms_.size(); }

  Rational coeff(unsigned i, unsigned j) const {
    auto it = terms_.find(Monomial{i, j});
    return it == terms_.end() ? Rational(0) : it->second;
  }
  Rational constant_term() const { return coeff(0, 0); }

  /// Leading term under grlex; undefined on zero.
  const std::pair<const Monomial, Rational>& leading() const { return *terms_.begin(); }
  const Rational& leading_coeff() const { return terms_.begin()->second; }

  /// Total degree; -1 for zero.
  int degree() const { return is_zero() ? -1 : static_cast<int>(terms_.begin()->first.degree()); }
  int min_degree() const {
    if (is_zero()) return -1;
    return static_cast<int>(terms_.rbegin()->first.degree());
  }
  bool is_homogeneous() const { return !is_zero() && degree() == min_degree(); }

  int degree_in(int var) const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(var == 0 ? m.first : m.second));
    return d;
  }
  /// Largest k such that var^k divides this polynomial.
  unsigned valuation_in(int var) const {
    if (is_zero()) return 0;
    unsigned v = ~0u;
    for (const auto& [m, c] : terms_) v = std::min(v, var == 0 ? m.first : m.second);
    return v;
  }

  BivarPoly with_basis(Basis b) const {
    BivarPoly p = *this;
    p.basis_ = b;
    return p;
  }

  Rational operator()(const Rational& x, const Rational& y) const {
    Rational acc = 0;
    std::map<unsigned, Rational> xp, yp;
    for (const auto& [m, c] : terms_) {
      auto xi = xp.find(m.first);
      if (xi == xp.end()) xi = xp.emplace(m.first, curvflow::pow(x, m.first)).first;
      auto yi = yp.find(m.second);
      if (yi == yp.end()) yi = yp.emplace(m.second, curvflow::pow(y, m.second)).first;
      acc += c * xi->second * yi->second;
    }
    return acc;
  }

  double eval(double x, double y) const {
    double acc = 0.0;
    for (const auto& [m, c] : terms_) acc += c.get_d() * ipow(x, m.first) * ipow(y, m.second);
    return acc;
  }

  BivarPoly partial(int var) const {
    BivarPoly r(basis_);
    for (const auto& [m, c] : terms_) {
      unsigned e = var == 0 ? m.first : m.second;
      if (e == 0) continue;
      Monomial d = var == 0 ? Monomial{m.first - 1, m.second} : Monomial{m.first, m.second - 1};
      r.terms_.emplace(d, c * Rational(static_cast<long>(e)));
    }
    return r;
  }

  /// p(second, first)
  BivarPoly swapped() const {
    BivarPoly r(basis_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(Monomial{m.second, m.first}, c);
    return r;
  }

  /// p(x, 1) as a univariate polynomial in x.
  UnivarPoly dehomogenize() const {
    std::vector<Rational> c(static_cast<std::size_t>(std::max(degree_in(0), -1) + 1));
    for (const auto& [m, v] : terms_) c[m.first] += v;
    return UnivarPoly(std::move(c));
  }

  /// p(c, y) as a univariate polynomial in y.
  UnivarPoly restrict_first(const Rational& x) const {
    std::vector<Rational> c(static_cast<std::size_t>(std::max(degree_in(1), -1) + 1));
    for (const auto& [m, v] : terms_) c[m.second] += v * curvflow::pow(x, m.first);
    return UnivarPoly(std::move(c));
  }

  /// Homogeneous lift of p of total degree `degree`: sum c_k x^k y^(degree-k).
  static BivarPoly homogenize(const UnivarPoly& p, unsigned degree, Basis basis = Basis::Lambda) {
    if (p.degree() > static_cast<int>(degree)) throw AlgebraError("homogenize: degree too small");
    BivarPoly r(basis);
    for (std::size_t k = 0; k < p.coeffs().size(); ++k)
      if (p.coeffs()[k] != 0) r.terms_.emplace(Monomial{static_cast<unsigned>(k), degree - static_cast<unsigned>(k)}, p.coeffs()[k]);
    return r;
  }

  /// Coefficients with respect to the first variable: result[k] is the coefficient of
  /// first^k, a univariate polynomial in the second variable.
  std::vector<UnivarPoly> coeffs_in_first() const {
    int d = degree_in(0);
    std::vector<std::vector<Rational>> raw(static_cast<std::size_t>(d + 1));
    for (const auto& [m, c] : terms_) {
      auto& v = raw[m.first];
      if (v.size() <= m.second) v.resize(m.second + 1);
      v[m.second] += c;
    }
    std::vector<UnivarPoly> out;
    out.reserve(raw.size());
    for (auto& v : raw) out.emplace_back(std::move(v));
    return out;
  }

  static BivarPoly from_coeffs_in_first(const std::vector<UnivarPoly>& cs, Basis basis) {
    BivarPoly r(basis);
    for (std::size_t k = 0; k < cs.size(); ++k)
      for (std::size_t j = 0; j < cs[k].coeffs().size(); ++j)
        if (cs[k].coeffs()[j] != 0)
          r.terms_.emplace(Monomial{static_cast<unsigned>(k), static_cast<unsigned>(j)}, cs[k].coeffs()[j]);
    return r;
  }

  /// Lift a univariate polynomial in the second variable.
  static BivarPoly from_second(const UnivarPoly& p, Basis basis) {
    return from_coeffs_in_first({p}, basis);
  }

  /// Substitute the variables by polynomials (same result basis as the substitutes).
  BivarPoly substitute(const BivarPoly& first, const BivarPoly& second) const;

  /// Multiply every coefficient by s.
  BivarPoly scaled(const Rational& s) const {
    if (s == 0) return BivarPoly(basis_);
    BivarPoly r = *this;
    for (auto& [m, c] : r.terms_) c *= s;
    return r;
  }

  /// Least common multiple of the coefficient denominators.
  Integer denominator_lcm() const {
    Integer d = 1;
    for (const auto& [m, c] : terms_) d = lcm(d, c.get_den());
    return d;
  }

  /// Positive rational s such that s*p has coprime integer coefficients.
  Rational primitive_scale() const {
    if (is_zero()) return 1;
    Integer den = denominator_lcm();
    Integer g = 0;
    for (const auto& [m, c] : terms_) g = gcd(g, Integer(c.get_num() * (den / c.get_den())));
    return Rational(den) / Rational(g);
  }

  /// Integer primitive part with positive leading coefficient.
  BivarPoly primitive_normalized() const {
    if (is_zero()) return *this;
    Rational s = primitive_scale();
    if (leading_coeff() < 0) s = -s;
    return scaled(s);
  }

  BivarPoly& operator+=(const BivarPoly& o) {
    check_basis(o);
    for (const auto& [m, c] : o.terms_) {
      auto [it, inserted] = terms_.emplace(m, c);
      if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
      }
    }
    return *this;
  }
  BivarPoly& operator-=(const BivarPoly& o) {
    check_basis(o);
    for (const auto& [m, c] : o.terms_) {
      auto [it, inserted] = terms_.emplace(m, -c);
      if (!inserted) {
        it->second -= c;
        if (it->second == 0) terms_.erase(it);
      }
    }
    return *this;
  }

  friend BivarPoly operator+(BivarPoly a, const BivarPoly& b) { return a += b; }
  friend BivarPoly operator-(BivarPoly a, const BivarPoly& b) { return a -= b; }
  friend BivarPoly operator-(const BivarPoly& a) { return a.scaled(-1); }
  friend BivarPoly operator*(const Rational& s, const BivarPoly& a) { return a.scaled(s); }
  friend BivarPoly operator*(const BivarPoly& a, const BivarPoly& b) {
    a.check_basis(b);
    BivarPoly r(a.basis_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m{ma.first + mb.first, ma.second + mb.second};
        auto [it, inserted] = r.terms_.emplace(m, ca * cb);
        if (!inserted) it->second += ca * cb;
      }
    r.prune();
    return r;
  }
  BivarPoly& operator*=(const BivarPoly& o) { return *this = *this * o; }

  BivarPoly pow(unsigned e) const {
    BivarPoly r = constant(1, basis_);
    BivarPoly b = *this;
    while (e) {
      if (e & 1u) r *= b;
      e >>= 1u;
      if (e) b *= b;
    }
    return r;
  }

  friend bool operator==(const BivarPoly& a, const BivarPoly& b) {
    return a.basis_ == b.basis_ && a.terms_ == b.terms_;
  }

  /// Division with remainder by b under grlex; returns {q, r} with a = q*b + r.
  friend std::pair<BivarPoly, BivarPoly> divmod(const BivarPoly& a, const BivarPoly& b) {
    if (b.is_zero()) throw AlgebraError("division by zero polynomial");
    a.check_basis(b);
    BivarPoly q(a.basis_), r(a.basis_), p = a;
    const auto& [lm, lc] = b.leading();
    while (!p.is_zero()) {
      const auto& [pm, pc] = p.leading();
      if (pm.first >= lm.first && pm.second >= lm.second) {
        BivarPoly t = term(pc / lc, pm.first - lm.first, pm.second - lm.second, a.basis_);
        q += t;
        p -= t * b;
      } else {
        BivarPoly t = term(pc, pm.first, pm.second, a.basis_);
        r += t;
        p -= t;
      }
    }
    return {q, r};
  }

  /// Exact quotient; throws when b does not divide a.
  friend BivarPoly exact_div(const BivarPoly& a, const BivarPoly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw AlgebraError("exact division: divisor does not divide dividend");
    return q;
  }

  void check_basis(const BivarPoly& o) const {
    if (basis_ != o.basis_) throw AlgebraError("basis mismatch between polynomials");
  }

 private:
  static double ipow(double x, unsigned e) {
    double r = 1.0;
    while (e) {
      if (e & 1u) r *= x;
      e >>= 1u;
      x *= x;
    }
    return r;
  }

  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (it->second == 0)
        it = terms_.erase(it);
      else
        ++it;
    }
  }

  Basis basis_ = Basis::Lambda;
  Terms terms_;
};

inline BivarPoly BivarPoly::substitute(const BivarPoly& first, const BivarPoly& second) const {
  first.check_basis(second);
  BivarPoly out(first.basis());
  std::map<unsigned, BivarPoly> fp, sp;
  auto power = [](std::map<unsigned, BivarPoly>& cache, const BivarPoly& base, unsigned e) -> const BivarPoly& {
    auto it = cache.find(e);
    if (it == cache.end()) it = cache.emplace(e, base.pow(e)).first;
    return it->second;
  };
  for (const auto& [m, c] : terms_) out += (power(fp, first, m.first) * power(sp, second, m.second)).scaled(c);
  return out;
}

}  // namespace curvflow
