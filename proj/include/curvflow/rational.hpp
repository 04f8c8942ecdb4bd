#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace curvflow {

using Integer = mpz_class;
using Rational = mpq_class;

/// Base class for every error raised by the algebra layer.
class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline int sign(const Rational& q) { return sgn(q); }
inline int sign(const Integer& z) { return sgn(z); }

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Rational pow(const Rational& base, unsigned e) {
  Rational r = 1;
  Rational b = base;
  while (e) {
    if (e & 1u) r *= b;
    e >>= 1u;
    if (e) b *= b;
  }
  return r;
}

}  // namespace curvflow
