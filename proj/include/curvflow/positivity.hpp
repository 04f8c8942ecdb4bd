#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "curvflow/rational_fn.hpp"
#include "curvflow/univar_poly.hpp"

namespace curvflow {

/// Remainder sequence p, p', -rem(p, p'), ... with every entry scaled by a positive
/// constant to integer primitive form. Sign variations are unaffected by the scaling.
struct SturmChain {
  std::vector<UnivarPoly> chain;

  explicit SturmChain(const UnivarPoly& p) {
    if (p.is_zero()) return;
    chain.push_back(p);
    UnivarPoly d = p.derivative();
    if (d.is_zero()) return;
    chain.push_back(d.primitive_positive());
    for (;;) {
      UnivarPoly r = chain[chain.size() - 2] % chain.back();
      if (r.is_zero()) break;
      chain.push_back((-r).primitive_positive());
    }
  }

  /// Sign variations at x (zeros skipped).
  int variations(const Rational& x) const {
    int count = 0, last = 0;
    for (const auto& q : chain) {
      int s = q.sign_at(x);
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }

  int variations_at_infinity() const {
    int count = 0, last = 0;
    for (const auto& q : chain) {
      int s = q.sign_at_infinity();
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }

  /// Distinct roots in (a, b]; b = nullopt means +infinity.
  int count(const Rational& a, const std::optional<Rational>& b) const {
    return variations(a) - (b ? variations(*b) : variations_at_infinity());
  }
};

inline bool is_squarefree(const UnivarPoly& p) {
  if (p.degree() <= 0) return true;
  return gcd(p, p.derivative()).degree() == 0;
}

/// Number of distinct real roots of a squarefree p in (a, b]; b = nullopt is +infinity.
inline int sturm_count(const UnivarPoly& p, const Rational& a, const std::optional<Rational>& b = std::nullopt) {
  if (b && !(a < *b)) throw AlgebraError("sturm_count: empty interval");
  if (p.is_zero()) throw AlgebraError("sturm_count: zero polynomial");
  if (!is_squarefree(p)) throw AlgebraError("sturm_count: polynomial is not squarefree");
  return SturmChain(p).count(a, b);
}

enum class SignVerdict { NonnegativeOnQuadrant, NonpositiveOnQuadrant, ZeroIdentically, Indefinite };
enum class CertMethod { Sturm, RandomizedOnly };

inline const char* verdict_name(SignVerdict v) {
  switch (v) {
    case SignVerdict::NonnegativeOnQuadrant: return "nonnegative";
    case SignVerdict::NonpositiveOnQuadrant: return "nonpositive";
    case SignVerdict::ZeroIdentically: return "zero";
    case SignVerdict::Indefinite: return "indefinite";
  }
  return "?";
}
inline const char* method_name(CertMethod m) { return m == CertMethod::Sturm ? "sturm" : "randomized-only"; }

/// A point with the exact sign of the certified function there.
struct Witness {
  Rational l1;
  Rational l2;
  int sign = 0;
};

/// Exact sign verdict on the open quadrant (or on an interval of the positive axis for
/// the one-dimensional variants, whose witnesses use l2 = 1). Indefinite verdicts carry
/// one witness of each sign; one-signed verdicts carry the sample point they used.
struct SignCertificate {
  SignVerdict verdict = SignVerdict::ZeroIdentically;
  std::vector<Witness> witnesses;
  CertMethod method = CertMethod::Sturm;

  bool nonpositive() const {
    return verdict == SignVerdict::NonpositiveOnQuadrant || verdict == SignVerdict::ZeroIdentically;
  }
  bool nonnegative() const {
    return verdict == SignVerdict::NonnegativeOnQuadrant || verdict == SignVerdict::ZeroIdentically;
  }
  /// First witness with the requested sign, if any.
  std::optional<Witness> witness_with_sign(int s) const {
    for (const auto& w : witnesses)
      if (w.sign == s) return w;
    return std::nullopt;
  }
};

namespace detail {

inline Rational floor_q(const Rational& q) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(f);
}

// Simplest rational (smallest denominator, then numerator) strictly inside (lo, hi), lo >= 0.
inline Rational simplest_between(const Rational& lo, const Rational& hi) {
  Rational fl = floor_q(lo);
  if (fl + 1 < hi) return fl + 1;
  // lo and hi share the integer part; recurse on reciprocals of the fractional parts.
  Rational a = lo - fl, b = hi - fl;
  if (a == 0) return fl + Rational(1) / (floor_q(Rational(1) / b) + 1);
  return fl + Rational(1) / simplest_between(Rational(1) / b, Rational(1) / a);
}

// Upper bound for the absolute value of every real root (Cauchy).
inline Rational root_bound(const UnivarPoly& p) {
  Rational m = 0;
  for (int k = 0; k < p.degree(); ++k) {
    Rational r = abs(p.coeff(static_cast<std::size_t>(k)) / p.leading());
    if (r > m) m = r;
  }
  return floor_q(m) + 2;
}

class SamplePicker {
 public:
  explicit SamplePicker(const UnivarPoly& squarefree) : chain_(squarefree) {}

  int count_open(const Rational& a, const Rational& b) const {
    int n = chain_.count(a, b);
    if (chain_.chain.front().sign_at(b) == 0) --n;
    return n;
  }

  // Points in (a, b) such that every maximal root-free subinterval contains one of them.
  void collect(const Rational& a, const Rational& b, std::vector<Rational>& out) const {
    int n = count_open(a, b);
    if (n == 0) {
      out.push_back(simplest_between(a, b));
      return;
    }
    if (n == 1) {
      bracket_single(a, b, out);
      return;
    }
    Rational m = (a + b) / 2;
    collect(a, m, out);
    out.push_back(m);
    collect(m, b, out);
  }

 private:
  // Exactly one root in (a, b): add a point on each side of it.
  void bracket_single(Rational a, Rational b, std::vector<Rational>& out) const {
    bool have_left = false, have_right = false;
    while (!(have_left && have_right)) {
      Rational m = (a + b) / 2;
      int s = chain_.chain.front().sign_at(m);
      if (s == 0) {
        out.push_back(simplest_between(a, m));
        out.push_back(simplest_between(m, b));
        return;
      }
      if (count_open(a, m) == 1) {
        out.push_back(m);  // right of the root
        have_right = true;
        b = m;
      } else {
        out.push_back(m);  // left of the root
        have_left = true;
        a = m;
      }
    }
  }

  SturmChain chain_;
};

inline SignVerdict verdict_from_sign(int s) {
  return s > 0 ? SignVerdict::NonnegativeOnQuadrant : SignVerdict::NonpositiveOnQuadrant;
}

}  // namespace detail

/// Sign of p on the open interval (lo, hi) (hi = nullopt is +infinity), via squarefree
/// decomposition and Sturm counts of the odd-multiplicity factors. Zeros are allowed in the
/// one-signed verdicts.
inline SignCertificate sign_on_interval(const UnivarPoly& p, const Rational& lo, const std::optional<Rational>& hi) {
  SignCertificate cert;
  cert.method = CertMethod::Sturm;
  if (p.is_zero()) {
    cert.verdict = SignVerdict::ZeroIdentically;
    return cert;
  }
  Rational top = hi ? *hi : std::max(lo, Rational(0)) + detail::root_bound(p);
  if (p.degree() == 0) {
    Rational x = detail::simplest_between(lo, top);
    cert.verdict = detail::verdict_from_sign(p.sign_at(x));
    cert.witnesses.push_back({x, 1, p.sign_at(x)});
    return cert;
  }
  auto sq = squarefree_decomposition(p);
  UnivarPoly odd = UnivarPoly::constant(1);
  UnivarPoly all = UnivarPoly::constant(1);
  for (const auto& [f, m] : sq.factors) {
    all = all * f;
    if (m % 2 == 1) odd = odd * f;
  }
  const Rational end = hi ? *hi : top + 1;
  auto nonzero_sample = [&](const std::vector<Rational>& pts) -> std::optional<Rational> {
    for (const auto& x : pts)
      if (p.sign_at(x) != 0) return x;
    return std::nullopt;
  };

  bool sign_changes = false;
  if (odd.degree() > 0) {
    detail::SamplePicker odd_picker(odd);
    sign_changes = odd_picker.count_open(lo, end) > 0;
  }
  std::vector<Rational> pts;
  if (all.degree() > 0) {
    detail::SamplePicker picker(all);
    picker.collect(lo, end, pts);
  } else {
    pts.push_back(detail::simplest_between(lo, end));
  }
  if (!sign_changes) {
    auto x = nonzero_sample(pts);
    if (!x) throw AlgebraError("sign_on_interval: no nonzero sample found");
    int s = p.sign_at(*x);
    cert.verdict = detail::verdict_from_sign(s);
    cert.witnesses.push_back({*x, 1, s});
    return cert;
  }
  cert.verdict = SignVerdict::Indefinite;
  std::optional<Witness> pos, neg;
  for (const auto& x : pts) {
    int s = p.sign_at(x);
    if (s > 0 && !pos) pos = Witness{x, 1, 1};
    if (s < 0 && !neg) neg = Witness{x, 1, -1};
  }
  if (!pos || !neg) throw AlgebraError("sign_on_interval: failed to locate witnesses of both signs");
  cert.witnesses = {*pos, *neg};
  return cert;
}

/// Sign of p on (0, infinity).
inline SignCertificate sign_on_positive_axis(const UnivarPoly& p) { return sign_on_interval(p, 0, std::nullopt); }

/// Exact sign of a homogeneous lambda-basis function on {l1 > 0, l2 > 0}. The question is
/// reduced to the ray l2 = 1 by homogeneity; witnesses are points (t, 1).
inline SignCertificate quadrant_sign(const RationalFn& f) {
  if (f.basis() != Basis::Lambda) throw AlgebraError("quadrant_sign expects the lambda basis");
  if (f.is_zero()) return SignCertificate{SignVerdict::ZeroIdentically, {}, CertMethod::Sturm};
  if (!f.num().is_homogeneous() || !f.den().is_homogeneous())
    throw AlgebraError("quadrant_sign requires a homogeneous function");
  UnivarPoly n = f.num().dehomogenize();
  UnivarPoly d = f.den().dehomogenize();
  SignCertificate cd = sign_on_positive_axis(d);
  SignCertificate cn = sign_on_positive_axis(n);
  if (cd.verdict != SignVerdict::Indefinite && cn.verdict != SignVerdict::Indefinite) {
    int sd = cd.nonnegative() ? 1 : -1;
    int sn = cn.verdict == SignVerdict::ZeroIdentically ? 0 : (cn.nonnegative() ? 1 : -1);
    SignCertificate out;
    out.verdict = sn == 0 ? SignVerdict::ZeroIdentically : detail::verdict_from_sign(sn * sd);
    if (out.verdict != SignVerdict::ZeroIdentically) {
      const Rational& x = cn.witnesses.front().l1;
      int s = n.sign_at(x) * d.sign_at(x);
      if (s != 0)
        out.witnesses.push_back({x, 1, s});
      else
        out.witnesses = sign_on_positive_axis(n * d).witnesses;
    }
    return out;
  }
  // sign(f) = sign(n * d) wherever d != 0, and the witnesses avoid zeros of n * d.
  return sign_on_positive_axis(n * d);
}

/// Sign the randomized pre-filter is checking for.
enum class SignTarget { Nonpositive, Nonnegative };

struct PrefilterResult {
  bool plausible = true;
  std::optional<Witness> witness;  ///< first violating sample
  int samples = 0;
};

/// Deterministic 64-bit stream for one (seed, stream) pair.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer on the combined key
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + stream + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

/// Random rational in (0, bound] with denominator at most 64.
inline Rational random_positive_rational(std::mt19937_64& rng, long bound) {
  unsigned long den = 1 + rng() % 64;
  unsigned long num = 1 + rng() % (static_cast<unsigned long>(bound) * den);
  Rational q(static_cast<unsigned long>(num), den);
  q.canonicalize();
  return q;
}

/// Evaluate f at n_samples seeded random rational points of (0, box]^2 and look for a
/// sample violating the target sign. Points where the denominator vanishes are redrawn.
inline PrefilterResult randomized_prefilter(const RationalFn& f, int n_samples, std::uint64_t seed,
                                            SignTarget target = SignTarget::Nonpositive, long box = 10,
                                            std::uint64_t stream = 0) {
  if (n_samples < 1) throw AlgebraError("randomized_prefilter: n_samples must be >= 1");
  RationalFn g = as_lambda(f);
  auto rng = make_rng(seed, stream);
  PrefilterResult res;
  constexpr int kRetries = 32;
  for (int k = 0; k < n_samples; ++k) {
    Rational x, y, d;
    int tries = 0;
    do {
      if (tries++ == kRetries) throw AlgebraError("randomized_prefilter: denominator vanished at every retry");
      x = random_positive_rational(rng, box);
      y = random_positive_rational(rng, box);
      d = g.den()(x, y);
    } while (d == 0);
    Rational v = g.num()(x, y) / d;
    ++res.samples;
    int s = sgn(v);
    bool bad = target == SignTarget::Nonpositive ? s > 0 : s < 0;
    if (bad) {
      res.plausible = false;
      res.witness = Witness{x, y, s};
      return res;
    }
  }
  return res;
}

}  // namespace curvflow
