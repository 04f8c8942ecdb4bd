#pragma once

#include <optional>
#include <type_traits>
#include <string>
#include <utility>

#include "curvflow/positivity.hpp"
#include "curvflow/rational_fn.hpp"

namespace curvflow {

/// The quantity has no usable critical-point relation (dw/dl2 vanishes identically).
class DegenerateQuantity : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

/// Critical-point relation h22;1 = a1 h11;1 (and h11;2 = a2 h22;2) at a spatial critical
/// point of w. a2 is a1 with the curvatures swapped.
struct CriticalRatio {
  RationalFn a1;
  RationalFn a2;
};

/// Constant and gradient coefficients for the two basic quantities H and |A|^2, both in the
/// lambda basis.
struct BaseTerms {
  RationalFn C_H, G_H;
  RationalFn C_A2, G_A2;
};

/// At a critical point of w:
///   d/dt w - F^ij w_;ij = Cw + G1 * h11;1^2 + G2 * h22;2^2,
/// with G2(l1, l2) = G1(l2, l1). Everything is in the lambda basis except quantity_HA.
struct EvolutionResult {
  RationalFn Cw;
  RationalFn G1;
  RationalFn G2;
  RationalFn velocity;
  RationalFn quantity;     ///< w pulled back to (l1, l2)
  RationalFn quantity_HA;  ///< w as a function of (H, |A|^2)
  CriticalRatio ratio;
};

/// a1 = -(dw/dl1) / (dw/dl2) for w(l1 + l2, l1^2 + l2^2).
inline CriticalRatio compute_a1(const RationalFn& w) {
  RationalFn wl = as_lambda(w);
  RationalFn d1 = wl.partial(0);
  RationalFn d2 = wl.partial(1);
  if (d2.is_zero()) throw DegenerateQuantity("degenerate quantity: dw/dl2 vanishes identically");
  RationalFn a1 = -(d1 / d2);
  return {a1, a1.swapped()};
}

namespace detail {

template <class T>
T lit(long v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return Rational(v);
  } else if constexpr (std::is_arithmetic_v<T>) {
    return static_cast<T>(v);
  } else {
    return T::constant(v);
  }
}

}  // namespace detail

/// Inputs of the critical-point formulas. T is RationalFn for the symbolic pipeline and
/// Rational for pointwise evaluation; both go through the same formula code below.
template <class T>
struct FormulaInputs {
  T l1, l2;
  T F, F1, F2, F11, F12, F22;
  T dq;  ///< (F1 - F2) / (l1 - l2)
  T a1;
  T wH, wA, wHH, wAA, wHA;  ///< partials of w(H, A) at H = l1 + l2, A = l1^2 + l2^2
};

template <class T>
struct FormulaTerms {
  T C_H, G_H, C_A2, G_A2;
};

template <class T>
FormulaTerms<T> formula_base_terms(const FormulaInputs<T>& in) {
  using detail::lit;
  const T H = in.l1 + in.l2;
  const T A2 = in.l1 * in.l1 + in.l2 * in.l2;
  const T A3 = in.l1 * in.l1 * in.l1 + in.l2 * in.l2 * in.l2;
  const T a1sq = in.a1 * in.a1;
  const T weighted = in.F1 * in.l1 * in.l1 + in.F2 * in.l2 * in.l2;
  const T euler_defect = in.F - in.F1 * in.l1 - in.F2 * in.l2;
  const T hess_a = in.F11 + lit<T>(2) * in.F12 * in.a1 + in.F22 * a1sq;

  FormulaTerms<T> b;
  b.C_H = weighted * H + euler_defect * A2;
  b.G_H = hess_a + lit<T>(2) * in.dq * a1sq;
  b.C_A2 = lit<T>(2) * weighted * A2 + lit<T>(2) * euler_defect * A3;
  b.G_A2 = lit<T>(-2) * (in.F1 * (lit<T>(1) + a1sq) + lit<T>(2) * in.F2 * a1sq) + lit<T>(2) * hess_a * in.l1 +
           lit<T>(4) * in.dq * a1sq * in.l2;
  return b;
}

/// Returns (Cw, G1).
template <class T>
std::pair<T, T> formula_assemble(const FormulaInputs<T>& in, const FormulaTerms<T>& b) {
  using detail::lit;
  const T s = lit<T>(1) + in.a1;
  const T t = in.l1 + in.a1 * in.l2;
  T Cw = in.wH * b.C_H + in.wA * b.C_A2;
  T G1 = in.wH * b.G_H + in.wA * b.G_A2 - in.wHH * in.F1 * s * s - lit<T>(4) * in.wAA * in.F1 * t * t -
         lit<T>(4) * in.wHA * in.F1 * s * t;
  return {std::move(Cw), std::move(G1)};
}

/// Derivatives of the velocity that do not depend on w.
struct VelocityDerivatives {
  RationalFn F, F1, F2, F11, F12, F22, dq;

  explicit VelocityDerivatives(const RationalFn& f) : F(f) {
    if (F.basis() != Basis::Lambda) throw AlgebraError("velocity must be given in the lambda basis");
    F1 = F.partial(0);
    F2 = F.partial(1);
    F11 = F1.partial(0);
    F12 = F1.partial(1);
    F22 = F2.partial(1);
    dq = difference_quotient(F);
  }
};

/// Polynomial partials of the numerator and denominator of w(H, A) up to second order, for
/// pointwise evaluation of w and its partials by the quotient rule.
struct QuantityDerivatives {
  BivarPoly n, nH, nA, nHH, nAA, nHA;
  BivarPoly d, dH, dA, dHH, dAA, dHA;

  explicit QuantityDerivatives(const RationalFn& w_HA) : n(w_HA.num()), d(w_HA.den()) {
    if (w_HA.basis() != Basis::HA) throw AlgebraError("expected the quantity in the HA basis");
    nH = n.partial(0);
    nA = n.partial(1);
    nHH = nH.partial(0);
    nAA = nA.partial(1);
    nHA = nH.partial(1);
    dH = d.partial(0);
    dA = d.partial(1);
    dHH = dH.partial(0);
    dAA = dA.partial(1);
    dHA = dH.partial(1);
  }

  struct Values {
    Rational w, wH, wA, wHH, wAA, wHA;
  };

  std::optional<Values> at(const Rational& H, const Rational& A) const {
    Rational den = d(H, A);
    if (den == 0) return std::nullopt;
    Values v;
    Rational DH = dH(H, A), DA = dA(H, A);
    v.w = n(H, A) / den;
    v.wH = (nH(H, A) - v.w * DH) / den;
    v.wA = (nA(H, A) - v.w * DA) / den;
    v.wHH = (nHH(H, A) - 2 * v.wH * DH - v.w * dHH(H, A)) / den;
    v.wAA = (nAA(H, A) - 2 * v.wA * DA - v.w * dAA(H, A)) / den;
    v.wHA = (nHA(H, A) - v.wH * DA - v.wA * DH - v.w * dHA(H, A)) / den;
    return v;
  }
};

inline BaseTerms base_terms(const RationalFn& F, const CriticalRatio& a) {
  VelocityDerivatives v(F);
  FormulaInputs<RationalFn> in;
  in.l1 = RationalFn::variable(0);
  in.l2 = RationalFn::variable(1);
  in.F = v.F;
  in.F1 = v.F1;
  in.F2 = v.F2;
  in.F11 = v.F11;
  in.F12 = v.F12;
  in.F22 = v.F22;
  in.dq = v.dq;
  in.a1 = a.a1;
  FormulaTerms<RationalFn> t = formula_base_terms(in);
  return {t.C_H, t.G_H, t.C_A2, t.G_A2};
}

inline EvolutionResult assemble(const RationalFn& w_HA, const RationalFn& F, const CriticalRatio& a, const BaseTerms& base) {
  if (w_HA.basis() != Basis::HA) throw AlgebraError("assemble expects the quantity in the HA basis");
  const RationalFn wH = w_HA.partial(0);
  const RationalFn wA = w_HA.partial(1);
  FormulaInputs<RationalFn> in;
  in.l1 = RationalFn::variable(0);
  in.l2 = RationalFn::variable(1);
  in.F1 = F.partial(0);
  in.a1 = a.a1;
  in.wH = from_HA(wH);
  in.wA = from_HA(wA);
  in.wHH = from_HA(wH.partial(0));
  in.wAA = from_HA(wA.partial(1));
  in.wHA = from_HA(wH.partial(1));
  auto [Cw, G1] = formula_assemble(in, FormulaTerms<RationalFn>{base.C_H, base.G_H, base.C_A2, base.G_A2});

  EvolutionResult r;
  r.Cw = std::move(Cw);
  r.G1 = std::move(G1);
  r.G2 = r.G1.swapped();
  r.velocity = F;
  r.quantity = from_HA(w_HA);
  r.quantity_HA = w_HA;
  r.ratio = a;
  return r;
}

/// Pointwise (Cw, G1) at a rational point of the open quadrant, computed from the same
/// formulas without building the symbolic result. Returns nullopt where some ingredient is
/// undefined (a zero denominator, l1 = l2, or dw/dl2 = 0).
inline std::optional<std::pair<Rational, Rational>> evaluate_at(const VelocityDerivatives& v, const QuantityDerivatives& q,
                                                                const Rational& x, const Rational& y) {
  if (x == y) return std::nullopt;
  try {
    FormulaInputs<Rational> in;
    in.l1 = x;
    in.l2 = y;
    in.F = v.F(x, y);
    in.F1 = v.F1(x, y);
    in.F2 = v.F2(x, y);
    in.F11 = v.F11(x, y);
    in.F12 = v.F12(x, y);
    in.F22 = v.F22(x, y);
    in.dq = v.dq(x, y);
    auto qv = q.at(x + y, x * x + y * y);
    if (!qv) return std::nullopt;
    in.wH = qv->wH;
    in.wA = qv->wA;
    in.wHH = qv->wHH;
    in.wAA = qv->wAA;
    in.wHA = qv->wHA;
    Rational d2 = in.wH + 2 * y * in.wA;
    if (d2 == 0) return std::nullopt;
    in.a1 = -(in.wH + 2 * x * in.wA) / d2;
    return formula_assemble(in, formula_base_terms(in));
  } catch (const AlgebraError&) {
    return std::nullopt;
  }
}

/// Full pipeline for a symmetric velocity F (lambda basis) and symmetric quantity w (either
/// basis).
inline EvolutionResult evolve(const RationalFn& F, const RationalFn& w) {
  if (F.basis() != Basis::Lambda) throw AlgebraError("velocity must be given in the lambda basis");
  if (!(F.swapped() == F)) throw AlgebraError("velocity is not symmetric in l1, l2");
  RationalFn w_HA = w.basis() == Basis::HA ? w : to_HA(w);
  if (w_HA.is_constant()) throw DegenerateQuantity("degenerate quantity: w is constant");
  CriticalRatio a = compute_a1(w_HA);
  BaseTerms base = base_terms(F, a);
  return assemble(w_HA, F, a, base);
}

enum class MonotoneVerdict { Monotone, NotProven };

inline const char* verdict_name(MonotoneVerdict v) { return v == MonotoneVerdict::Monotone ? "MONOTONE" : "NOT-PROVEN"; }

struct VerifyOptions {
  int prefilter_samples = 200;
  std::uint64_t seed = 42;
};

struct MonotonicityReport {
  EvolutionResult evolution;
  MonotoneVerdict verdict = MonotoneVerdict::NotProven;
  SignCertificate cert_Cw;
  SignCertificate cert_G1;
  std::optional<Witness> witness;  ///< point where Cw or G1 is positive
  std::string failing;             ///< "C_w", "G1" or empty
};

namespace detail {

// Exact certificate for homogeneous input; a randomized-only certificate otherwise.
inline SignCertificate certify_nonpositive(const RationalFn& f, const VerifyOptions& opt, std::uint64_t stream) {
  SymmetryInfo info = symmetry_and_homogeneity(f);
  if (info.homogeneous) return quadrant_sign(f);
  SignCertificate cert;
  cert.method = CertMethod::RandomizedOnly;
  PrefilterResult pre = randomized_prefilter(f, opt.prefilter_samples, opt.seed, SignTarget::Nonpositive, 10, stream);
  if (pre.plausible) {
    cert.verdict = SignVerdict::NonpositiveOnQuadrant;
  } else {
    cert.verdict = SignVerdict::Indefinite;
    cert.witnesses.push_back(*pre.witness);
  }
  return cert;
}

}  // namespace detail

/// MONOTONE when Cw <= 0 and G1 <= 0 are certified exactly on the open quadrant (G2 is G1
/// mirrored, so its sign follows). Anything else is NOT-PROVEN, with a positive witness
/// when one was found.
inline MonotonicityReport verify_monotone(const RationalFn& F, const RationalFn& w, const VerifyOptions& opt = {}) {
  MonotonicityReport rep;
  rep.evolution = evolve(F, w);
  rep.cert_Cw = detail::certify_nonpositive(rep.evolution.Cw, opt, 1);
  rep.cert_G1 = detail::certify_nonpositive(rep.evolution.G1, opt, 2);
  auto exact_nonpositive = [](const SignCertificate& c) { return c.method == CertMethod::Sturm && c.nonpositive(); };
  if (exact_nonpositive(rep.cert_Cw) && exact_nonpositive(rep.cert_G1)) {
    rep.verdict = MonotoneVerdict::Monotone;
    return rep;
  }
  rep.verdict = MonotoneVerdict::NotProven;
  if (!rep.cert_Cw.nonpositive()) {
    rep.failing = "C_w";
    rep.witness = rep.cert_Cw.witness_with_sign(1);
  } else if (!rep.cert_G1.nonpositive()) {
    rep.failing = "G1";
    rep.witness = rep.cert_G1.witness_with_sign(1);
  }
  return rep;
}

}  // namespace curvflow
