#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "curvflow/rational.hpp"

namespace curvflow {

class UnivarPoly;

namespace detail {
inline bool coprime_mod_prime(const UnivarPoly& a, const UnivarPoly& b);
}

/// Dense univariate polynomial over Q, lowest degree first.
/// The coefficient vector never ends in a zero; the zero polynomial is empty.
class UnivarPoly {
 public:
  UnivarPoly() = default;
  explicit UnivarPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  UnivarPoly(std::initializer_list<long> coeffs) {
    for (long v : coeffs) c_.emplace_back(v);
    trim();
  }

  static UnivarPoly constant(const Rational& v) { return UnivarPoly(std::vector<Rational>{v}); }
  /// x - r
  static UnivarPoly linear_root(const Rational& r) {
    return UnivarPoly(std::vector<Rational>{-r, Rational(1)});
  }

  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
  const Rational& leading() const { return c_.back(); }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  double eval(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
    return acc;
  }

  int sign_at(const Rational& x) const { return sgn((*this)(x)); }

  /// Sign as x -> +infinity.
  int sign_at_infinity() const { return is_zero() ? 0 : sgn(leading()); }

  UnivarPoly derivative() const {
    std::vector<Rational> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * Rational(static_cast<long>(k)));
    return UnivarPoly(std::move(d));
  }

  /// p(-x)
  UnivarPoly reflected() const {
    std::vector<Rational> d = c_;
    for (std::size_t k = 1; k < d.size(); k += 2) d[k] = -d[k];
    return UnivarPoly(std::move(d));
  }

  UnivarPoly monic() const {
    if (is_zero()) return *this;
    std::vector<Rational> d = c_;
    Rational lc = leading();
    for (auto& v : d) v /= lc;
    return UnivarPoly(std::move(d));
  }

  /// Integer-coefficient primitive part scaled by a positive factor; sign is preserved.
  UnivarPoly primitive_positive() const {
    if (is_zero()) return *this;
    Integer den = 1;
    for (const auto& v : c_) den = lcm(den, v.get_den());
    Integer g = 0;
    for (const auto& v : c_) g = gcd(g, Integer(v.get_num() * (den / v.get_den())));
    std::vector<Rational> d;
    d.reserve(c_.size());
    for (const auto& v : c_) d.emplace_back(Integer(v.get_num() * (den / v.get_den())) / g);
    return UnivarPoly(std::move(d));
  }

  friend UnivarPoly operator+(const UnivarPoly& a, const UnivarPoly& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
    return UnivarPoly(std::move(r));
  }
  friend UnivarPoly operator-(const UnivarPoly& a) {
    std::vector<Rational> r = a.c_;
    for (auto& v : r) v = -v;
    return UnivarPoly(std::move(r));
  }
  friend UnivarPoly operator-(const UnivarPoly& a, const UnivarPoly& b) { return a + (-b); }
  friend UnivarPoly operator*(const UnivarPoly& a, const UnivarPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return UnivarPoly(std::move(r));
  }
  friend UnivarPoly operator*(const Rational& s, const UnivarPoly& a) {
    if (s == 0) return {};
    std::vector<Rational> r = a.c_;
    for (auto& v : r) v *= s;
    return UnivarPoly(std::move(r));
  }
  friend bool operator==(const UnivarPoly& a, const UnivarPoly& b) { return a.c_ == b.c_; }

  /// Euclidean division: returns {quotient, remainder}.
  friend std::pair<UnivarPoly, UnivarPoly> divmod(const UnivarPoly& a, const UnivarPoly& b) {
    if (b.is_zero()) throw AlgebraError("univariate division by zero polynomial");
    if (a.degree() < b.degree()) return {UnivarPoly{}, a};
    std::vector<Rational> rem = a.c_;
    std::vector<Rational> quo(a.c_.size() - b.c_.size() + 1);
    const Rational& lb = b.leading();
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
      const Rational& top = rem[static_cast<std::size_t>(k + b.degree())];
      if (top == 0) continue;
      Rational q = top / lb;
      quo[static_cast<std::size_t>(k)] = q;
      for (std::size_t j = 0; j < b.c_.size(); ++j) rem[static_cast<std::size_t>(k) + j] -= q * b.c_[j];
    }
    return {UnivarPoly(std::move(quo)), UnivarPoly(std::move(rem))};
  }

  friend UnivarPoly operator%(const UnivarPoly& a, const UnivarPoly& b) { return divmod(a, b).second; }

  /// Exact quotient; throws when b does not divide a.
  friend UnivarPoly exact_div(const UnivarPoly& a, const UnivarPoly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw AlgebraError("univariate exact division has a nonzero remainder");
    return q;
  }

  /// Monic gcd (zero if both are zero).
  friend UnivarPoly gcd(UnivarPoly a, UnivarPoly b) {
    if (!a.is_zero() && !b.is_zero() && detail::coprime_mod_prime(a, b)) return constant(1);
    while (!b.is_zero()) {
      UnivarPoly r = (a % b).primitive_positive();
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  /// x^k
  static UnivarPoly monomial(unsigned k, const Rational& c = 1) {
    std::vector<Rational> d(k + 1);
    d[k] = c;
    return UnivarPoly(std::move(d));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

namespace detail {

constexpr std::uint64_t kModPrime = 2147483647ULL;

inline std::uint64_t mod_inverse(std::uint64_t a) {
  std::uint64_t result = 1, e = kModPrime - 2;
  a %= kModPrime;
  while (e) {
    if (e & 1) result = result * a % kModPrime;
    a = a * a % kModPrime;
    e >>= 1;
  }
  return result;
}

// Coefficients modulo the prime; nullopt when a denominator or the leading coefficient
// vanishes there.
inline std::optional<std::vector<std::uint64_t>> reduce_mod_prime(const UnivarPoly& p) {
  std::vector<std::uint64_t> out;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) {
    std::uint64_t den = mpz_fdiv_ui(c.get_den_mpz_t(), kModPrime);
    if (den == 0) return std::nullopt;
    std::uint64_t num = mpz_fdiv_ui(c.get_num_mpz_t(), kModPrime);
    out.push_back(num * mod_inverse(den) % kModPrime);
  }
  if (out.back() == 0) return std::nullopt;
  return out;
}

// Sufficient test for gcd(a, b) = 1 over Q: the gcd of the images modulo a large prime is a
// unit while both leading coefficients survive the reduction.
inline bool coprime_mod_prime(const UnivarPoly& a, const UnivarPoly& b) {
  auto ra = reduce_mod_prime(a);
  auto rb = reduce_mod_prime(b);
  if (!ra || !rb) return false;
  std::vector<std::uint64_t> x = std::move(*ra), y = std::move(*rb);
  auto trim = [](std::vector<std::uint64_t>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  while (!y.empty()) {
    if (x.size() >= y.size()) {
      std::uint64_t inv = mod_inverse(y.back());
      while (x.size() >= y.size() && !x.empty()) {
        std::uint64_t q = x.back() * inv % kModPrime;
        std::size_t shift = x.size() - y.size();
        for (std::size_t j = 0; j < y.size(); ++j)
          x[shift + j] = (x[shift + j] + kModPrime - q * y[j] % kModPrime) % kModPrime;
        trim(x);
      }
    }
    std::swap(x, y);
  }
  return x.size() == 1;
}

}  // namespace detail

/// Squarefree part p / gcd(p, p').
inline UnivarPoly squarefree_part(const UnivarPoly& p) {
  if (p.degree() <= 0) return p;
  UnivarPoly g = gcd(p, p.derivative());
  return exact_div(p, g);
}

/// Yun's algorithm: p = c * prod f_i^i with each f_i squarefree, monic and pairwise coprime.
/// Returned as (content, [(f, multiplicity)]) with nonconstant factors only.
struct SquarefreeDecomposition {
  Rational content;
  std::vector<std::pair<UnivarPoly, unsigned>> factors;
};

inline SquarefreeDecomposition squarefree_decomposition(const UnivarPoly& p) {
  SquarefreeDecomposition out;
  if (p.is_zero()) throw AlgebraError("squarefree decomposition of the zero polynomial");
  out.content = p.leading();
  if (p.degree() == 0) return out;
  UnivarPoly f = p.monic();
  UnivarPoly fp = f.derivative();
  UnivarPoly a = gcd(f, fp);
  UnivarPoly b = exact_div(f, a);
  UnivarPoly c = exact_div(fp, a);
  UnivarPoly d = c - b.derivative();
  unsigned i = 1;
  while (b.degree() > 0) {
    UnivarPoly g = gcd(b, d);
    if (g.degree() > 0) out.factors.emplace_back(g, i);
    b = exact_div(b, g);
    c = exact_div(d, g);
    d = c - b.derivative();
    ++i;
  }
  return out;
}

}  // namespace curvflow
