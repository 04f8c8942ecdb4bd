#pragma once

#include <gmpxx.h>

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

struct GoldenPair {
  const char* name;
  const char* velocity;
  const char* quantity;
  const char* C_w;
  const char* G1;
};

inline const std::vector<GoldenPair>& golden_pairs() {
  static const std::vector<GoldenPair> pairs = {
      {"inverse_gauss", "-1/(l1*l2)", "(l1-l2)^2/(4*l1^2*l2^2)",
       "-(l1+l2)*(l1-l2)^2/(2*l1^3*l2^3)", "-2/(l1^6*l2)"},
      {"inverse_gauss_improved", "-1/(l1*l2)", "(l1^2+l2^2)*(l1-l2)^2/(8*(l1+l2)*l1^3*l2^3)",
       "-3*(l1^4+2*l1^3*l2-2*l1^2*l2^2+2*l1*l2^3+l2^4)*(l1-l2)^2/(8*(l1+l2)^2*l1^4*l2^4)",
       "-(18*l1^9-9*l1^8*l2+12*l1^7*l2^2+72*l1^6*l2^3-12*l1^5*l2^4+70*l1^4*l2^5+60*l1^3*l2^6"
       "+18*l1*l2^8+27*l2^9)/((3*l1^3+3*l1^2*l2-l1*l2^2+3*l2^3)^2*(l1+l2)^2*l1^7*l2^2)"},
      {"mean_squared_over_gauss_squared", "-(l1+l2)^2/(l1*l2)^2", "(l1-l2)^2/(2*(l1+l2)*l1*l2)",
       "-5*(l1-l2)^2/(l1^2*l2^2)", "-128/((l1+3*l2)^2*l1^4)"},
      {"norm_squared_over_gauss_squared", "-(l1^2+l2^2)/(l1*l2)^2", "(l1-l2)^2/(2*(l1+l2)*l1*l2)",
       "-2*(2*l1^2+l1*l2+2*l2^2)*(l1-l2)^2/((l1+l2)^2*l1^2*l2^2)",
       "-4*(21*l1^4+24*l1^3*l2+18*l1^2*l2^2+l2^4)/((l1+3*l2)^2*(l1+l2)^2*l1^6)"},
      {"mean_cubed_over_gauss_cubed", "-(l1+l2)^3/(l1*l2)^3",
       "(l1+l2)^6*(l1-l2)^2/(16*(l1^2+l2^2)*(l1^2+l1*l2+l2^2)*l1^3*l2^3)",
       "-(l1+l2)^8*(l1-l2)^2*(l1^6-l1^5*l2+8*l1^4*l2^2+2*l1^3*l2^3+8*l1^2*l2^4-l1*l2^5+l2^6)"
       "/(4*(l1^2+l2^2)^2*(l1^2+l1*l2+l2^2)^2*l1^6*l2^6)",
       "-3*(l1+l2)^8*(2*l1^18-4*l1^17*l2+57*l1^16*l2^2-108*l1^15*l2^3+508*l1^14*l2^4-428*l1^13*l2^5"
       "+2152*l1^12*l2^6-156*l1^11*l2^7+4784*l1^10*l2^8+172*l1^9*l2^9+4942*l1^8*l2^10"
       "-612*l1^7*l2^11+2676*l1^6*l2^12-772*l1^5*l2^13+872*l1^4*l2^14-340*l1^3*l2^15"
       "+126*l1^2*l2^16-56*l1*l2^17+9*l2^18)"
       "/(8*(3*l1^6+11*l1^4*l2^2+2*l1^3*l2^3+9*l1^2*l2^4-2*l1*l2^5+l2^6)^2"
       "*(l1^2+l1*l2+l2^2)^2*(l1^2+l2^2)^2*l1^8*l2^6)"},
      {"inverse_mean", "-1/(l1+l2)", "(l1-l2)^2/(2*(l1+l2)*l1*l2)",
       "-(l1^2+4*l1*l2+l2^2)*(l1-l2)^2/(2*(l1+l2)^3*l1*l2)",
       "-2*(5*l1^2+2*l1*l2+l2^2)*l2/((l1+3*l2)^2*(l1+l2)*l1^5)"},
      {"inverse_mean_second", "-1/(l1+l2)", "(l1^2+l2^2)*(l1-l2)^2/(8*(l1+l2)*l1^3*l2^3)",
       "-(3*l1^4-2*l1^2*l2^2+3*l2^4)*(l1-l2)^2/(8*(l1+l2)^3*l1^3*l2^3)",
       "-(9*l1^10-9*l1^8*l2^2+96*l1^7*l2^3-38*l1^6*l2^4+96*l1^5*l2^5+30*l1^4*l2^6+45*l1^2*l2^8"
       "+27*l2^10)/(2*(3*l1^3+3*l1^2*l2-l1*l2^2+3*l2^3)^2*(l1+l2)^3*l1^7*l2)"},
      {"mean_over_gauss", "-(l1+l2)/(l1*l2)", "(l1-l2)^2/(4*l1^2*l2^2)", "-(l1-l2)^2/(l1^2*l2^2)",
       "-2/l1^6"},
  };
  return pairs;
}

/// Dense univariate polynomial with exact coefficients, lowest degree first.
using Coeffs = std::vector<mpq_class>;

inline void trim(Coeffs& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline mpq_class horner(const Coeffs& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline int descartes_variations(const Coeffs& p) {
  int v = 0, last = 0;
  for (const auto& c : p) {
    int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

/// Coefficients of (1 + x)^n p((a + b x) / (1 + x)); its positive roots correspond to the
/// roots of p in (a, b).
inline Coeffs mobius(const Coeffs& p, const mpq_class& a, const mpq_class& b) {
  const std::size_t n = p.size() - 1;
  Coeffs out(n + 1, 0);
  for (std::size_t k = 0; k <= n; ++k) {
    // (a + b x)^k (1 + x)^(n - k)
    Coeffs term{1};
    for (std::size_t i = 0; i < k; ++i) {
      Coeffs next(term.size() + 1, 0);
      for (std::size_t j = 0; j < term.size(); ++j) {
        next[j] += a * term[j];
        next[j + 1] += b * term[j];
      }
      term = next;
    }
    for (std::size_t i = k; i < n; ++i) {
      Coeffs next(term.size() + 1, 0);
      for (std::size_t j = 0; j < term.size(); ++j) {
        next[j] += term[j];
        next[j + 1] += term[j];
      }
      term = next;
    }
    for (std::size_t j = 0; j < term.size(); ++j) out[j] += p[k] * term[j];
  }
  return out;
}

/// Roots of a squarefree p in the open interval (a, b), by Descartes bisection.
inline int bisection_count(const Coeffs& p, const mpq_class& a, const mpq_class& b, int depth = 0) {
  const int v = descartes_variations(mobius(p, a, b));
  if (v <= 1) return v;
  if (depth > 200) throw std::runtime_error("bisection did not separate the roots");
  mpq_class m = (a + b) / 2;
  return bisection_count(p, a, m, depth + 1) + (horner(p, m) == 0 ? 1 : 0) + bisection_count(p, m, b, depth + 1);
}

/// Distinct roots of a squarefree p on (0, infinity).
inline int positive_root_count(const Coeffs& p) {
  mpq_class bound = 0;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    mpq_class r = abs(p[k] / p.back());
    if (r > bound) bound = r;
  }
  bound += 1;
  return bisection_count(p, 0, bound) + (horner(p, bound) == 0 ? 1 : 0);
}

/// Seeded random integer polynomial of degree 1..max_degree with coefficients in [-c, c].
inline Coeffs random_integer_poly(std::mt19937_64& rng, int max_degree, long c) {
  std::uniform_int_distribution<int> deg(1, max_degree);
  std::uniform_int_distribution<long> coef(-c, c);
  Coeffs p(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& x : p) x = coef(rng);
  while (p.back() == 0) p.back() = coef(rng);
  return p;
}

}  // namespace fixtures
