#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "curvflow/expr_io.hpp"
#include "curvflow/flowsim.hpp"

using namespace curvflow;

namespace {

Speed speed(const char* text) { return Speed(parse(text)); }

FlowState spheroid(int N, double eps = 0.05) {
  return FlowState::from_function(N, [eps](double th) {
    const double c = std::cos(th);
    return 1.0 + eps * (3.0 * c * c - 1.0);
  });
}

double max_abs_diff(const std::vector<double>& a, double v) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x - v));
  return m;
}

}  // namespace

TEST(Radii, SphereAndTranslatedSphere) {
  FlowState s = FlowState::from_function(64, [](double) { return 1.0; });
  Radii r = principal_radii(s);
  EXPECT_LT(max_abs_diff(r.rho1, 1.0), 1e-12);
  EXPECT_LT(max_abs_diff(r.rho2, 1.0), 1e-12);
  FlowState t = FlowState::from_function(64, [](double th) { return 1.0 + 0.1 * std::cos(th); });
  Radii q = principal_radii(t);
  EXPECT_LT(max_abs_diff(q.rho1, 1.0), 1e-3);
  EXPECT_LT(max_abs_diff(q.rho2, 1.0), 1e-3);
  EXPECT_TRUE(strictly_convex(q));
  EXPECT_THROW(FlowState::from_function(8, [](double) { return 1.0; }), std::invalid_argument);
}

TEST(Radii, SecondOrderAgainstSymbolicDerivatives) {
  // u = 1 + e(3c^2 - 1): u_tt = -6e cos(2t), u_t cot t = -6e c^2.
  const double e = 0.05;
  auto exact1 = [e](double th) { return 1.0 + e * (3 * std::cos(th) * std::cos(th) - 1) - 6 * e * std::cos(2 * th); };
  auto exact2 = [e](double th) { return 1.0 + e * (3 * std::cos(th) * std::cos(th) - 1) - 6 * e * std::cos(th) * std::cos(th); };
  double err[2];
  int Ns[2] = {32, 64};
  for (int i = 0; i < 2; ++i) {
    FlowState s = spheroid(Ns[i], e);
    Radii r = principal_radii(s);
    double m = 0.0;
    for (int k = 0; k <= s.N(); ++k) {
      const auto j = static_cast<std::size_t>(k);
      m = std::max({m, std::abs(r.rho1[j] - exact1(s.theta(k))), std::abs(r.rho2[j] - exact2(s.theta(k)))});
    }
    err[i] = m;
  }
  EXPECT_LT(err[1], 1e-3);
  EXPECT_NEAR(err[0] / err[1], 4.0, 0.5);
}

TEST(Step, SphereExamples) {
  FlowState unit = FlowState::from_function(32, [](double) { return 1.0; });
  FlowState a = step(unit, 1e-4, speed("1/(l1*l2)"));
  EXPECT_LT(max_abs_diff(a.u, 1.0 + 1e-4), 2e-8);
  EXPECT_DOUBLE_EQ(a.t, 1e-4);
  auto rate = [](const FlowState& s, const Speed& g) {
    return (step(s, 1e-7, g).u[5] - s.u[5]) / 1e-7;
  };
  EXPECT_NEAR(rate(unit, speed("(l1+l2)^2/(l1*l2)^2")), 4.0, 1e-5);
  FlowState two = FlowState::from_function(32, [](double) { return 2.0; });
  EXPECT_NEAR(rate(two, speed("1/(l1*l2)")), 4.0, 1e-5);
}

TEST(Speed, HomogeneityAndValidation) {
  Speed g = speed("(l1+l2)^3/(l1*l2)^3");
  ASSERT_TRUE(g.gamma.has_value());
  EXPECT_EQ(*g.gamma, 3);
  EXPECT_DOUBLE_EQ(g.g0, 8.0);
  EXPECT_NEAR(g.sphere_radius(1.0, 1.0 / 32), std::pow(16.0 * (1.0 / 16 - 1.0 / 32), -0.5), 1e-12);
  EXPECT_DOUBLE_EQ(g.sphere_lifetime(1.0), 1.0 / 16);
  EXPECT_TRUE(std::isinf(speed("1/(l1+l2)").sphere_lifetime(1.0)));
  EXPECT_THROW(speed("l1/l2"), AlgebraError);
  EXPECT_THROW(speed("-1/(l1*l2)"), AlgebraError);
  EXPECT_THROW(Speed(parse("1/(l1*l2) + 1")).require_gamma(), AlgebraError);
}

TEST(Observables, SphereValues) {
  FlowState s = FlowState::from_function(64, [](double) { return 1.0; });
  CompiledFn w(parse("(l1-l2)^2/(4*l1^2*l2^2)"));
  Observables o = observables(s, &w);
  EXPECT_NEAR(o.q_z, 0.0, 1e-12);
  EXPECT_NEAR(o.r_plus, 1.0, 1e-12);
  EXPECT_NEAR(o.r_minus, 1.0, 1e-12);
  EXPECT_NEAR(o.pinching, 1.0, 1e-12);
  EXPECT_NEAR(o.max_w, 0.0, 1e-20);
  EXPECT_NEAR(o.circumradius, 1.0, 1e-6);
  EXPECT_NEAR(o.inradius, 1.0, 1e-6);
  EXPECT_TRUE(std::isnan(observables(s).max_w));
}

TEST(Observables, TranslatedSphereHasShiftedCenter) {
  auto shifted = [](int N) {
    return observables(FlowState::from_function(N, [](double th) { return 1.0 + 0.1 * std::cos(th); }));
  };
  Observables o = shifted(64);
  EXPECT_NEAR(o.q_z, 0.1, 1e-4);
  EXPECT_NEAR(o.r_plus, 1.0, 1e-4);
  EXPECT_NEAR(o.r_minus, 1.0, 1e-4);
  EXPECT_NEAR(o.circumradius, 1.0, 1e-6);
  const double coarse = std::abs(o.q_z - 0.1), fine = std::abs(shifted(128).q_z - 0.1);
  EXPECT_GT(coarse / fine, 3.5);
}

TEST(Observables, SpheroidOrderingAndDecay) {
  Speed g = speed("1/(l1*l2)");
  RunOptions opt;
  opt.stop.max_u = 5.0;
  opt.samples = 40;
  RunResult r = run(spheroid(64), g, opt);
  const Observables& a = r.series.front();
  EXPECT_GT(a.r_plus - a.r_minus, 0.0);
  EXPECT_LE(a.inradius, a.circumradius);
  EXPECT_LE(a.r_minus, a.inradius + 1e-9);
  EXPECT_LE(a.circumradius, a.r_plus + 1e-9);
  const Observables& b = r.series.back();
  EXPECT_LT((b.r_plus - b.r_minus) / g.sphere_radius(1.0, b.t), (a.r_plus - a.r_minus));
}

TEST(Run, SphereFollowsTheOdeSolution) {
  Speed g = speed("1/(l1*l2)");
  RunResult r = run(FlowState::from_function(64, [](double) { return 1.0; }), g);
  ASSERT_TRUE(r.reached_max_u);
  for (const auto& o : r.series) EXPECT_NEAR(o.max_u * (1.0 - o.t), 1.0, 1e-6);
  EXPECT_NEAR(r.series.back().max_u, 10.0, 1e-9);
  for (std::size_t k = 1; k < r.series.size(); ++k) EXPECT_GT(r.series[k].t, r.series[k - 1].t);
}

TEST(Run, TranslationInvariance) {
  Speed g = speed("1/(l1*l2)");
  FlowState a = spheroid(64);
  FlowState b = a;
  for (int k = 0; k <= b.N(); ++k) b.u[static_cast<std::size_t>(k)] += 0.02 * std::cos(b.theta(k));
  const double dt = 0.5 * stable_dt(a, g);
  for (int n = 0; n < 400; ++n) {
    a = step(a, dt, g);
    b = step(b, dt, g);
  }
  Radii ra = principal_radii(a), rb = principal_radii(b);
  for (std::size_t k = 0; k < ra.rho1.size(); ++k) {
    EXPECT_NEAR(ra.rho1[k], rb.rho1[k], 1e-3 * ra.rho1[k]);
    EXPECT_NEAR(ra.rho2[k], rb.rho2[k], 1e-3 * ra.rho2[k]);
  }
  EXPECT_NEAR(observables(a).max_curvature, observables(b).max_curvature, 1e-3);
}

TEST(Run, RejectsNonConvexData) {
  Speed g = speed("1/(l1*l2)");
  FlowState bad = FlowState::from_function(64, [](double th) { return 1.0 + 0.9 * std::pow(std::cos(th), 2) - 1.5 * std::pow(std::cos(th), 4); });
  EXPECT_THROW(run(bad, g), NumericError);
  FlowState negative = FlowState::from_function(64, [](double th) { return std::cos(th); });
  EXPECT_THROW(run(negative, g), NumericError);
}

TEST(EstimateT, SphereLaws) {
  struct Case {
    const char* g;
    double T;
  };
  for (Case c : {Case{"1/(l1*l2)", 1.0}, Case{"(l1+l2)^2/(l1*l2)^2", 0.25}, Case{"(l1^2+l2^2)/(l1*l2)^2", 0.5},
                 Case{"(l1+l2)^3/(l1*l2)^3", 1.0 / 16}}) {
    Speed g = speed(c.g);
    RunResult r = run(FlowState::from_function(64, [](double) { return 1.0; }), g);
    TEstimate te = estimate_T(r.series, g);
    EXPECT_NEAR(te.T, c.T, 1e-3 * c.T) << c.g;
  }
  Speed h = speed("1/(l1+l2)");
  RunOptions opt;
  opt.stop.max_u = 3.0;
  RunResult r = run(FlowState::from_function(32, [](double) { return 1.0; }), h, opt);
  EXPECT_TRUE(std::isinf(estimate_T(r.series, h).T));
  std::vector<Observables> few(r.series.begin(), r.series.begin() + 10);
  EXPECT_THROW(estimate_T(few, speed("1/(l1*l2)")), NumericError);
}

TEST(Summary, ExploratorySlopesAreReported) {
  Speed g = speed("1/(l1*l2)");
  RunOptions opt;
  opt.stop.max_u = 20.0;
  RunResult r = run(spheroid(64), g, opt);
  RunSummary s = summarize_run(r.series, g);
  EXPECT_NEAR(s.T_hat, 1.0, 0.1);
  EXPECT_LT(s.pinch_excess_final, s.pinch_excess_initial / 10);
  EXPECT_LT(s.osc_final, s.osc_initial / 10);
  EXPECT_TRUE(std::isfinite(s.radius_slope.slope));
  EXPECT_TRUE(std::isfinite(s.diff_slope.slope));
  EXPECT_GT(s.radius_slope.points, 8u);
}

TEST(Csv, HeaderAndRows) {
  Speed g = speed("1/(l1*l2)");
  RunOptions opt;
  opt.samples = 4;
  RunResult r = run(FlowState::from_function(16, [](double) { return 1.0; }), g, opt);
  std::ostringstream os;
  write_csv(os, r.series);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,max_u,min_u,max_w,max_curv,pinch,r_plus,r_minus,q_z,est_T");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9);
  }
  EXPECT_EQ(rows, static_cast<int>(r.series.size()));
}

TEST(CosineSeries, ParsesPolynomialsInCosine) {
  CosineSeries a = parse_cosine_series("1 + 0.05*(3*cos(theta)^2 - 1)");
  ASSERT_EQ(a.coeffs.size(), 3u);
  EXPECT_NEAR(a.coeffs[0], 0.95, 1e-15);
  EXPECT_NEAR(a.coeffs[1], 0.0, 1e-15);
  EXPECT_NEAR(a.coeffs[2], 0.15, 1e-15);
  EXPECT_NEAR(a(0.3), 1 + 0.05 * (3 * std::cos(0.3) * std::cos(0.3) - 1), 1e-15);
  EXPECT_NEAR(parse_cosine_series("2")(1.0), 2.0, 0.0);
  EXPECT_NEAR(parse_cosine_series("(1 + cos(theta))/2")(0.0), 1.0, 1e-15);
  EXPECT_THROW(parse_cosine_series("1 + sin(theta)"), CosineSeriesError);
  EXPECT_THROW(parse_cosine_series("1 +"), CosineSeriesError);
  EXPECT_THROW(parse_cosine_series("1/cos(theta)"), CosineSeriesError);
}
