#include <gtest/gtest.h>

#include <random>

#include "curvflow/expr_io.hpp"
#include "curvflow/poly_gcd.hpp"
#include "curvflow/rational_fn.hpp"

using namespace curvflow;

namespace {

BivarPoly poly(const char* text, Basis b = Basis::Lambda) {
  RationalFn f = parse(text, b);
  EXPECT_TRUE(f.is_polynomial()) << text;
  return f.num().scaled(1 / f.den().constant_term());
}

BivarPoly random_poly(std::mt19937_64& rng, int max_deg, int terms) {
  std::uniform_int_distribution<int> deg(0, max_deg), coef(-5, 5);
  BivarPoly p;
  for (int k = 0; k < terms; ++k) {
    int i = deg(rng), j = deg(rng);
    if (i + j > max_deg) continue;
    p += BivarPoly::term(coef(rng), static_cast<unsigned>(i), static_cast<unsigned>(j));
  }
  return p;
}

}  // namespace

TEST(Rational, ArithmeticIsExact) {
  Rational a(1, 3), b(1, 6);
  EXPECT_EQ(a + b, Rational(1, 2));
  EXPECT_EQ(pow(Rational(2, 3), 3), Rational(8, 27));
  EXPECT_EQ(lcm(Integer(4), Integer(6)), 12);
  EXPECT_EQ(gcd(Integer(12), Integer(18)), 6);
}

TEST(BivarPoly, RingOperations) {
  BivarPoly x = BivarPoly::variable(0), y = BivarPoly::variable(1);
  BivarPoly s = x + y, d = x - y;
  EXPECT_EQ(s * d, x * x - y * y);
  EXPECT_EQ(s.pow(2), x * x + BivarPoly::term(2, 1, 1) + y * y);
  EXPECT_EQ(exact_div(x * x - y * y, d), s);
  EXPECT_THROW(exact_div(x * x + y * y, d), AlgebraError);
  EXPECT_TRUE((s - s).is_zero());
  EXPECT_EQ(s.degree(), 1);
  EXPECT_TRUE((x * y + y * y).is_homogeneous());
  EXPECT_FALSE((x + y * y).is_homogeneous());
}

TEST(BivarPoly, DivisionIdentityOnRandomInputs) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    BivarPoly a = random_poly(rng, 6, 8), b = random_poly(rng, 3, 4);
    if (b.is_zero()) continue;
    auto [q, r] = divmod(a, b);
    EXPECT_EQ(q * b + r, a);
  }
}

TEST(BivarPoly, EvaluationAndSwap) {
  BivarPoly p = poly("l1^3 - 2*l1*l2 + 5");
  EXPECT_EQ(p(Rational(1, 2), 3), Rational(1, 8) - 3 + 5);
  EXPECT_EQ(p.swapped(), poly("l2^3 - 2*l1*l2 + 5"));
  EXPECT_DOUBLE_EQ(p.eval(0.5, 3.0), 2.125);
}

TEST(BivarPoly, PartialsMatchFiniteDifferences) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    BivarPoly p = random_poly(rng, 5, 6);
    const double x = 1.3, y = 0.7, h = 1e-6;
    double fd1 = (p.eval(x + h, y) - p.eval(x - h, y)) / (2 * h);
    double fd2 = (p.eval(x, y + h) - p.eval(x, y - h)) / (2 * h);
    EXPECT_NEAR(p.partial(0).eval(x, y), fd1, 1e-5 * (1 + std::abs(fd1)));
    EXPECT_NEAR(p.partial(1).eval(x, y), fd2, 1e-5 * (1 + std::abs(fd2)));
  }
}

TEST(BivarPoly, DehomogenizeAndHomogenizeRoundTrip) {
  BivarPoly p = poly("3*l1^4 - l1^2*l2^2 + 2*l2^4");
  UnivarPoly u = p.dehomogenize();
  EXPECT_EQ(u, UnivarPoly({2, 0, -1, 0, 3}));
  EXPECT_EQ(BivarPoly::homogenize(u, 4), p);
}

TEST(BivarPoly, BasisMismatchThrows) {
  BivarPoly a = BivarPoly::variable(0);
  BivarPoly b = BivarPoly::variable(0, Basis::HA);
  EXPECT_THROW(a + b, AlgebraError);
}

TEST(UnivarPoly, GcdAndSquarefree) {
  UnivarPoly a = UnivarPoly({-1, 0, 1});  // x^2 - 1
  UnivarPoly b = UnivarPoly({1, 2, 1});   // (x + 1)^2
  EXPECT_EQ(gcd(a, b), UnivarPoly({1, 1}));
  EXPECT_EQ(squarefree_part(b * a), UnivarPoly({-1, 0, 1}));
  SquarefreeDecomposition d = squarefree_decomposition(UnivarPoly({2}) * b * a);
  ASSERT_EQ(d.factors.size(), 2u);
  EXPECT_EQ(d.factors[0].first, UnivarPoly({-1, 1}));
  EXPECT_EQ(d.factors[0].second, 1u);
  EXPECT_EQ(d.factors[1].first, UnivarPoly({1, 1}));
  EXPECT_EQ(d.factors[1].second, 3u);
}

TEST(UnivarPoly, ModularCoprimalityAgreesWithEuclid) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> coef(-4, 4), deg(1, 6);
  int coprime = 0, shared = 0;
  for (int k = 0; k < 300; ++k) {
    auto make = [&] {
      std::vector<Rational> c(static_cast<std::size_t>(deg(rng)) + 1);
      for (auto& x : c) x = coef(rng);
      if (c.back() == 0) c.back() = 1;
      return UnivarPoly(c);
    };
    UnivarPoly a = make(), b = make();
    if (k % 3 == 0) {
      UnivarPoly f = make();
      a = a * f;
      b = b * f;
    }
    UnivarPoly x = a, y = b;
    while (!y.is_zero()) {
      UnivarPoly r = x % y;
      x = y;
      y = r;
    }
    const bool euclid_coprime = x.degree() == 0;
    if (detail::coprime_mod_prime(a, b)) EXPECT_TRUE(euclid_coprime);
    EXPECT_EQ(gcd(a, b).degree() == 0, euclid_coprime);
    (euclid_coprime ? coprime : shared)++;
  }
  EXPECT_GT(coprime, 0);
  EXPECT_GT(shared, 0);
}

TEST(PolyGcd, HomogeneousShortcutMatchesRecursive) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 40; ++k) {
    BivarPoly f = random_poly(rng, 3, 4), g = random_poly(rng, 3, 4), h = random_poly(rng, 2, 3);
    if (f.is_zero() || g.is_zero() || h.is_zero()) continue;
    BivarPoly a = f * h, b = g * h;
    BivarPoly g1 = gcd(a, b), g2 = gcd_recursive(a, b);
    EXPECT_EQ(g1, g2);
    EXPECT_TRUE(divmod(a, g1).second.is_zero());
    EXPECT_TRUE(divmod(b, g1).second.is_zero());
  }
  BivarPoly x = BivarPoly::variable(0), y = BivarPoly::variable(1);
  BivarPoly a = (x - y).pow(2) * (x + y), b = (x - y) * (x * x + y * y);
  EXPECT_EQ(gcd(a, b), x - y);
}

TEST(RationalFn, ReducedCanonicalForm) {
  RationalFn f = parse("(l1^2 - l2^2)/(2*l1 - 2*l2)");
  EXPECT_EQ(f.num(), poly("l1 + l2").scaled(Rational(1, 2)));
  EXPECT_EQ(f.den(), BivarPoly::constant(1));
  RationalFn g = parse("(3*l1)/(-6*l2 + 4*l1)");
  EXPECT_EQ(g.den(), poly("2*l1 - 3*l2"));
  EXPECT_EQ(g.num(), poly("l1").scaled(Rational(3, 2)));
  EXPECT_EQ(parse("1/l1 + 1/l2"), parse("(l1 + l2)/(l1*l2)"));
  EXPECT_THROW(parse("1/(l1 - l1)"), std::exception);
}

TEST(RationalFn, PartialsMatchFiniteDifferences) {
  RationalFn f = parse("(l1^2 + 3*l2)/(l1*l2^2 + 1)");
  const double x = 0.8, y = 1.7, h = 1e-6;
  double fd1 = (f.eval(x + h, y) - f.eval(x - h, y)) / (2 * h);
  double fd2 = (f.eval(x, y + h) - f.eval(x, y - h)) / (2 * h);
  EXPECT_NEAR(f.partial(0).eval(x, y), fd1, 1e-6);
  EXPECT_NEAR(f.partial(1).eval(x, y), fd2, 1e-6);
}

TEST(RationalFn, SymmetricBasisRoundTrip) {
  for (const char* text : {"l1*l2", "l1^3 + l2^3", "(l1 - l2)^2/(4*l1^2*l2^2)",
                           "(l1^2 + l2^2)*(l1 - l2)^2/((l1 + l2)*l1^3*l2^3)"}) {
    RationalFn f = parse(text);
    RationalFn g = to_HA(f);
    EXPECT_EQ(g.basis(), Basis::HA);
    EXPECT_EQ(from_HA(g), f) << text;
  }
  EXPECT_EQ(to_HA(parse("l1*l2")), parse("(H^2 - A)/2", Basis::HA));
  EXPECT_EQ(to_HA(parse("(l1-l2)^2/(4*l1^2*l2^2)")), parse("(2*A - H^2)/(H^2 - A)^2", Basis::HA));
  EXPECT_THROW(to_HA(parse("l1")), AlgebraError);
}

TEST(RationalFn, DifferenceQuotient) {
  EXPECT_EQ(difference_quotient(parse("-1/(l1*l2)")), parse("-1/(l1^2*l2^2)"));
  EXPECT_EQ(difference_quotient(parse("l1^2 + l2^2")), RationalFn::constant(2));
  EXPECT_THROW(difference_quotient(parse("l1")), AlgebraError);
}

TEST(RationalFn, SymmetryAndHomogeneity) {
  SymmetryInfo a = symmetry_and_homogeneity(parse("(l1 - l2)^2/(l1*l2*(l1 + l2))"));
  EXPECT_TRUE(a.symmetric);
  EXPECT_TRUE(a.homogeneous);
  EXPECT_EQ(a.degree, -1);
  SymmetryInfo b = symmetry_and_homogeneity(parse("l1 + l2^2"));
  EXPECT_FALSE(b.symmetric);
  EXPECT_FALSE(b.homogeneous);
}
