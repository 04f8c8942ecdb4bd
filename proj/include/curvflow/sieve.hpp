#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "curvflow/evolution.hpp"
#include "curvflow/expr_io.hpp"
#include "curvflow/positivity.hpp"

namespace curvflow {

/// Bounds of the candidate enumeration. Monomial coefficients range over
/// {0} together with the integers in [coeff_lo, coeff_hi].
struct SearchSpace {
  int max_degree = 6;
  long coeff_lo = 1;
  long coeff_hi = 4;
  bool require_diagonal_factor = true;
  RationalFn velocity = RationalFn(BivarPoly::constant(-1), BivarPoly::term(1, 1, 1));
  std::uint64_t seed = 42;
  int n_samples = 32;

  void validate() const {
    if (max_degree < 2) throw std::invalid_argument("max_degree must be at least 2");
    if (coeff_lo > coeff_hi) throw std::invalid_argument("coefficient range is empty");
    if (n_samples < 1) throw std::invalid_argument("n_samples must be at least 1");
  }

  std::vector<Rational> coefficient_set() const {
    std::vector<long> vals{0};
    for (long c = coeff_lo; c <= coeff_hi; ++c)
      if (c != 0) vals.push_back(c);
    std::sort(vals.begin(), vals.end());
    std::vector<Rational> out;
    for (long v : vals) out.emplace_back(v);
    return out;
  }
};

enum class Stage { Precondition, NonNegativity, UmbilicZero, Degree, Derivative, Randomized, Exact };

inline const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Precondition: return "pre";
    case Stage::NonNegativity: return "1a";
    case Stage::UmbilicZero: return "1b";
    case Stage::Degree: return "2";
    case Stage::Derivative: return "3";
    case Stage::Randomized: return "4-randomized";
    case Stage::Exact: return "4-exact";
  }
  return "?";
}

struct Rejection {
  Stage stage = Stage::Precondition;
  std::string reason;
  std::optional<Witness> witness;
};

struct Verification {
  EvolutionResult evolution;
  SignCertificate cert_Cw;
  SignCertificate cert_G1;
};

struct CandidateReport {
  std::size_t index = 0;
  RationalFn candidate;
  std::optional<Rejection> rejection;
  std::optional<Verification> verification;
  double seconds = 0.0;

  bool verified() const { return verification.has_value(); }
};

/// Symmetric homogeneous polynomial sum_i c_i (l1^(d-i) l2^i + l1^i l2^(d-i)), i <= d/2;
/// the middle monomial of even degree is counted once.
inline BivarPoly symmetric_form(unsigned degree, const std::vector<Rational>& coeffs) {
  BivarPoly p;
  for (unsigned i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    p += BivarPoly::term(coeffs[i], degree - i, i);
    if (2 * i != degree) p += BivarPoly::term(coeffs[i], i, degree - i);
  }
  return p;
}

/// w divided by the absolute value of its numerator's leading coefficient.
inline RationalFn canonical_candidate(const RationalFn& w) {
  if (w.is_zero()) return w;
  Rational s = 1 / abs(w.num().leading_coeff());
  return s * w;
}

namespace detail {

// Calls f on every coefficient vector of length n over `set`, odometer order, skipping the
// all-zero vector.
template <class Fn>
void for_each_coeff_vector(std::size_t n, const std::vector<Rational>& set, Fn&& f) {
  std::vector<std::size_t> idx(n, 0);
  std::vector<Rational> c(n, set.front());
  for (;;) {
    bool nonzero = std::any_of(c.begin(), c.end(), [](const Rational& x) { return x != 0; });
    if (nonzero) f(c);
    std::size_t k = 0;
    while (k < n) {
      if (++idx[k] < set.size()) {
        c[k] = set[idx[k]];
        break;
      }
      idx[k] = 0;
      c[k] = set.front();
      ++k;
    }
    if (k == n) return;
  }
}

}  // namespace detail

/// Candidates w = p1/p2 in deterministic order: by deg p2, then the coefficients of p2, then
/// deg p1, then the coefficients of p1 (or of s1 where p1 = (l1 - l2)^2 s1). Duplicates up to
/// a positive scalar are dropped; every returned w is reduced and canonically scaled.
inline std::vector<RationalFn> enumerate_candidates(const SearchSpace& space) {
  space.validate();
  const std::vector<Rational> set = space.coefficient_set();
  const BivarPoly diff = BivarPoly::variable(0) - BivarPoly::variable(1);
  const BivarPoly diag = diff * diff;
  std::vector<RationalFn> out;
  std::unordered_set<std::string> seen;

  auto emit = [&](const BivarPoly& p1, const BivarPoly& p2) {
    RationalFn w = canonical_candidate(RationalFn(p1, p2));
    if (w.is_zero()) return;
    if (seen.insert(print(w, false)).second) out.push_back(std::move(w));
  };

  for (int d2 = 1; d2 <= space.max_degree; ++d2) {
    const auto ud2 = static_cast<unsigned>(d2);
    detail::for_each_coeff_vector(ud2 / 2 + 1, set, [&](const std::vector<Rational>& c2) {
      BivarPoly p2 = symmetric_form(ud2, c2);
      if (space.require_diagonal_factor) {
        for (int e = 0; e + 2 < d2; ++e) {
          const auto ue = static_cast<unsigned>(e);
          detail::for_each_coeff_vector(ue / 2 + 1, set, [&](const std::vector<Rational>& c1) {
            emit(diag * symmetric_form(ue, c1), p2);
          });
        }
      } else {
        for (int d1 = 0; d1 < d2; ++d1) {
          const auto ud1 = static_cast<unsigned>(d1);
          detail::for_each_coeff_vector(ud1 / 2 + 1, set, [&](const std::vector<Rational>& c1) {
            emit(symmetric_form(ud1, c1), p2);
          });
        }
      }
    });
  }
  return out;
}

namespace detail {

inline bool all_coefficients_nonnegative(const BivarPoly& p) {
  for (const auto& [m, c] : p.terms())
    if (c < 0) return false;
  return true;
}

// Cheap sample points of (lo, hi) used before any Sturm computation.
inline std::vector<Rational> probe_points(const Rational& lo, const std::optional<Rational>& hi) {
  std::vector<Rational> pts;
  if (hi) {
    for (int k : {2, 4, 8, 16}) {
      Rational step = (*hi - lo) / k;
      pts.push_back(lo + step);
      pts.push_back(*hi - step);
    }
  } else {
    for (int k : {1, 2, 4, 16, 256}) pts.push_back(lo + Rational(1, k));
    for (int k : {1, 3, 9, 100}) pts.push_back(lo + k);
  }
  return pts;
}

// First probe point where p does not have sign `want`.
inline std::optional<Rational> probe_violation(const UnivarPoly& p, const Rational& lo,
                                               const std::optional<Rational>& hi, int want) {
  for (const auto& x : probe_points(lo, hi))
    if (p.sign_at(x) != want) return x;
  return std::nullopt;
}

// True when p has sign `want` everywhere on the open interval (no zeros at all).
inline bool strictly_of_sign(const UnivarPoly& p, const Rational& lo, const std::optional<Rational>& hi, int want) {
  if (p.is_zero()) return false;
  if (probe_violation(p, lo, hi, want)) return false;
  if (p.degree() == 0) return true;
  UnivarPoly sq = squarefree_part(p);
  int roots = sturm_count(sq, lo, hi);
  if (hi && sq(*hi) == 0) --roots;
  return roots == 0;
}

// A point t of the interval where p does not have sign `want`, reported as (1, t).
inline std::optional<Witness> derivative_witness(const UnivarPoly& p, const Rational& lo,
                                                 const std::optional<Rational>& hi, int want) {
  if (auto x = probe_violation(p, lo, hi, want)) return Witness{Rational(1), *x, p.sign_at(*x)};
  if (p.is_zero()) return Witness{Rational(1), probe_points(lo, hi).front(), 0};
  SignCertificate cert = sign_on_interval(p, lo, hi);
  for (const auto& w : cert.witnesses)
    if (w.sign != want) return Witness{Rational(1), w.l1, w.sign};
  return std::nullopt;
}

}  // namespace detail

/// Runs stages (1a), (1b), (2), (3), randomized (4) and exact (4) in that order and stops at
/// the first failure. `stream` selects the random stream of the randomized stage.
inline CandidateReport filter_candidate(const VelocityDerivatives& vel, const RationalFn& w_in, const SearchSpace& space,
                                        std::uint64_t stream = 0) {
  const auto start = std::chrono::steady_clock::now();
  CandidateReport rep;
  rep.index = static_cast<std::size_t>(stream);
  rep.candidate = as_lambda(w_in);
  auto reject = [&](Stage s, std::string reason, std::optional<Witness> wit = std::nullopt) {
    rep.rejection = Rejection{s, std::move(reason), std::move(wit)};
  };

  Stage at = Stage::Precondition;
  try {
    const RationalFn& w = rep.candidate;
    const BivarPoly& p1 = w.num();
    const BivarPoly& p2 = w.den();
    const bool symmetric = (p1.swapped() == p1 && p2.swapped() == p2) || w.swapped() == w;
    if (!symmetric) {
      reject(Stage::Precondition, "candidate is not symmetric");
    } else if (w.is_constant()) {
      reject(Stage::Precondition, "degenerate: constant candidate");
    } else if (!p1.is_homogeneous() || !p2.is_homogeneous()) {
      reject(Stage::Precondition, "candidate is not homogeneous");
    } else if (!detail::all_coefficients_nonnegative(p1) && !quadrant_sign(RationalFn(p1)).nonnegative()) {
      reject(Stage::NonNegativity, "p1 takes negative values",
             quadrant_sign(RationalFn(p1)).witness_with_sign(-1));
    } else if (!detail::all_coefficients_nonnegative(p2) && !quadrant_sign(RationalFn(p2)).nonnegative()) {
      reject(Stage::NonNegativity, "p2 takes negative values",
             quadrant_sign(RationalFn(p2)).witness_with_sign(-1));
    } else if (!p1.substitute(BivarPoly::variable(0), BivarPoly::variable(0)).is_zero()) {
      reject(Stage::UmbilicZero, "p1 does not vanish on l1 = l2",
             Witness{Rational(1), Rational(1), sgn(p1(1, 1))});
    } else if (p1.degree() >= p2.degree()) {
      reject(Stage::Degree, "deg p1 = " + std::to_string(p1.degree()) + " is not below deg p2 = " +
                                std::to_string(p2.degree()));
    } else {
      at = Stage::Derivative;
      const UnivarPoly n = p1.restrict_first(1);
      const UnivarPoly d = p2.restrict_first(1);
      const UnivarPoly dw = n.derivative() * d - n * d.derivative();
      const bool d_positive = detail::all_coefficients_nonnegative(p2) || d.degree() == 0 ||
                              sign_on_positive_axis(d).verdict != SignVerdict::Indefinite;
      if (!d_positive) {
        reject(Stage::Derivative, "p2 vanishes on the positive axis");
      } else if (!detail::strictly_of_sign(dw, 0, Rational(1), -1)) {
        reject(Stage::Derivative, "dw(1,t)/dt is not negative on 0 < t < 1", detail::derivative_witness(dw, 0, Rational(1), -1));
      } else if (!detail::strictly_of_sign(dw, 1, std::nullopt, 1)) {
        reject(Stage::Derivative, "dw(1,t)/dt is not positive on t > 1", detail::derivative_witness(dw, 1, std::nullopt, 1));
      }
    }

    if (!rep.rejection) {
      at = Stage::Randomized;
      QuantityDerivatives q(to_HA(w));
      auto rng = make_rng(space.seed, stream);
      constexpr int kRetries = 32;
      for (int k = 0; k < space.n_samples && !rep.rejection; ++k) {
        std::optional<std::pair<Rational, Rational>> val;
        Rational x, y;
        for (int tries = 0; tries < kRetries && !val; ++tries) {
          x = random_positive_rational(rng, 10);
          y = random_positive_rational(rng, 10);
          val = evaluate_at(vel, q, x, y);
        }
        if (!val) {
          reject(Stage::Randomized, "degenerate: formulas undefined at every sampled point");
        } else if (sgn(val->first) > 0) {
          reject(Stage::Randomized, "C_w > 0 at a sample", Witness{x, y, 1});
        } else if (sgn(val->second) > 0) {
          reject(Stage::Randomized, "G1 > 0 at a sample", Witness{x, y, 1});
        }
      }
    }

    if (!rep.rejection) {
      at = Stage::Exact;
      Verification v;
      v.evolution = evolve(vel.F, w);
      const bool exact = symmetry_and_homogeneity(v.evolution.Cw).homogeneous &&
                         symmetry_and_homogeneity(v.evolution.G1).homogeneous;
      if (!exact) {
        reject(Stage::Exact, "no exact certificate: C_w or G1 is not homogeneous");
      } else {
        v.cert_Cw = quadrant_sign(v.evolution.Cw);
        v.cert_G1 = quadrant_sign(v.evolution.G1);
        if (!v.cert_Cw.nonpositive()) {
          reject(Stage::Exact, "C_w is not nonpositive", v.cert_Cw.witness_with_sign(1));
        } else if (!v.cert_G1.nonpositive()) {
          reject(Stage::Exact, "G1 is not nonpositive", v.cert_G1.witness_with_sign(1));
        } else {
          rep.verification = std::move(v);
        }
      }
    }
  } catch (const AlgebraError& e) {
    rep.verification.reset();
    reject(at, std::string("degenerate: ") + e.what());
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

inline CandidateReport filter_candidate(const RationalFn& F, const RationalFn& w, const SearchSpace& space) {
  return filter_candidate(VelocityDerivatives(F), w, space, 0);
}

struct SearchSummary {
  std::size_t candidates = 0;
  std::size_t verified = 0;
  std::map<std::string, std::size_t> rejected_by_stage;
};

struct SearchResult {
  std::vector<CandidateReport> reports;
  SearchSummary summary;

  std::vector<const CandidateReport*> verified() const {
    std::vector<const CandidateReport*> out;
    for (const auto& r : reports)
      if (r.verified()) out.push_back(&r);
    return out;
  }
};

inline SearchSummary summarize(const std::vector<CandidateReport>& reports) {
  SearchSummary s;
  s.candidates = reports.size();
  for (const auto& r : reports) {
    if (r.verified())
      ++s.verified;
    else
      ++s.rejected_by_stage[stage_name(r.rejection->stage)];
  }
  return s;
}

/// filter_candidate over enumerate_candidates on `workers` threads (0 picks the hardware
/// concurrency). Report i always belongs to candidate i and uses random stream i.
inline SearchResult search(const SearchSpace& space, unsigned workers = 1) {
  space.validate();
  const VelocityDerivatives vel(space.velocity);
  if (!(space.velocity.swapped() == space.velocity)) throw AlgebraError("velocity is not symmetric in l1, l2");
  std::vector<RationalFn> cands = enumerate_candidates(space);
  SearchResult result;
  result.reports.resize(cands.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(cands.size(), 1)));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < cands.size(); i = next.fetch_add(1))
      result.reports[i] = filter_candidate(vel, cands[i], space, i);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned k = 0; k < workers; ++k) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  result.summary = summarize(result.reports);
  return result;
}

}  // namespace curvflow
