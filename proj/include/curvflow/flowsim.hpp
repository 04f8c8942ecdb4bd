#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "curvflow/rational_fn.hpp"

namespace curvflow {

/// Numerical failure of a simulation: loss of strict convexity, non-finite values, or
/// an unusable time series.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Floating-point evaluator of a lambda-basis rational function, built once per run.
class CompiledFn {
 public:
  CompiledFn() = default;
  explicit CompiledFn(const RationalFn& f) {
    RationalFn g = as_lambda(f);
    for (const auto& [m, c] : g.num().terms()) num_.push_back({c.get_d(), m.first, m.second});
    for (const auto& [m, c] : g.den().terms()) den_.push_back({c.get_d(), m.first, m.second});
    for (const auto& t : num_) max_pow_ = std::max({max_pow_, t.i, t.j});
    for (const auto& t : den_) max_pow_ = std::max({max_pow_, t.i, t.j});
  }

  double operator()(double x, double y) const {
    double px[kMaxPow + 1], py[kMaxPow + 1];
    if (max_pow_ > kMaxPow) return slow(x, y);
    px[0] = py[0] = 1.0;
    for (unsigned k = 1; k <= max_pow_; ++k) {
      px[k] = px[k - 1] * x;
      py[k] = py[k - 1] * y;
    }
    double n = 0.0, d = 0.0;
    for (const auto& t : num_) n += t.c * px[t.i] * py[t.j];
    for (const auto& t : den_) d += t.c * px[t.i] * py[t.j];
    return n / d;
  }

 private:
  static constexpr unsigned kMaxPow = 63;
  struct Term {
    double c;
    unsigned i, j;
  };
  double slow(double x, double y) const {
    double n = 0.0, d = 0.0;
    for (const auto& t : num_) n += t.c * std::pow(x, t.i) * std::pow(y, t.j);
    for (const auto& t : den_) d += t.c * std::pow(x, t.i) * std::pow(y, t.j);
    return n / d;
  }
  std::vector<Term> num_, den_;
  unsigned max_pow_ = 0;
};

/// Expansion speed G(l1, l2) > 0 with its first partials, plus the sphere law it induces:
/// a sphere of radius r moves with dr/dt = g0 * r^gamma where gamma = -deg G.
struct Speed {
  RationalFn symbolic;
  CompiledFn G, G1, G2;
  std::optional<int> gamma;  ///< set when G is homogeneous
  double g0 = 0.0;           ///< G(1, 1)

  explicit Speed(const RationalFn& g) : symbolic(as_lambda(g)) {
    G = CompiledFn(symbolic);
    G1 = CompiledFn(symbolic.partial(0));
    G2 = CompiledFn(symbolic.partial(1));
    SymmetryInfo info = symmetry_and_homogeneity(symbolic);
    if (!info.symmetric) throw AlgebraError("speed is not symmetric in l1, l2");
    if (info.homogeneous) gamma = -info.degree;
    g0 = G(1.0, 1.0);
    if (!(g0 > 0.0) || !std::isfinite(g0)) throw AlgebraError("speed must be positive at l1 = l2 = 1");
  }

  /// Radius at time t of the sphere with radius r0 at time 0 (requires gamma).
  double sphere_radius(double r0, double t) const {
    int gm = require_gamma();
    if (gm == 1) return r0 * std::exp(g0 * t);
    double base = std::pow(r0, 1.0 - gm) - (gm - 1) * g0 * t;
    return std::pow(base, 1.0 / (1.0 - gm));
  }

  /// Blow-up time of the sphere of radius r, measured from now; infinite when gamma <= 1.
  double sphere_lifetime(double r) const {
    int gm = require_gamma();
    if (gm <= 1) return std::numeric_limits<double>::infinity();
    return std::pow(r, 1.0 - gm) / ((gm - 1) * g0);
  }

  int require_gamma() const {
    if (!gamma) throw AlgebraError("the sphere law needs a homogeneous speed");
    return *gamma;
  }
};

/// Axisymmetric support function on N + 1 uniform nodes of [0, pi].
struct FlowState {
  std::vector<double> u;
  double t = 0.0;

  int N() const { return static_cast<int>(u.size()) - 1; }
  double dtheta() const { return std::numbers::pi / N(); }
  double theta(int k) const { return k * dtheta(); }

  static FlowState from_function(int N, const std::function<double(double)>& f) {
    if (N < 16) throw std::invalid_argument("the grid needs N >= 16");
    FlowState s;
    s.u.resize(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) s.u[static_cast<std::size_t>(k)] = f(k * std::numbers::pi / N);
    return s;
  }
};

struct Radii {
  std::vector<double> rho1;  ///< meridian radius u_tt + u
  std::vector<double> rho2;  ///< parallel radius u_t cot(theta) + u
};

/// Second-order central differences with even ghost nodes at the poles, where both radii
/// take the limit value u_tt + u.
inline Radii principal_radii(const FlowState& s) {
  const int N = s.N();
  if (N < 16) throw std::invalid_argument("the grid needs N >= 16");
  const double h = s.dtheta();
  Radii r;
  r.rho1.resize(s.u.size());
  r.rho2.resize(s.u.size());
  auto at = [&](int k) {
    if (k < 0) k = -k;
    if (k > N) k = 2 * N - k;
    return s.u[static_cast<std::size_t>(k)];
  };
  for (int k = 0; k <= N; ++k) {
    const double uk = at(k);
    const double utt = (at(k + 1) - 2.0 * uk + at(k - 1)) / (h * h);
    const double rho1 = utt + uk;
    double rho2 = rho1;
    if (k != 0 && k != N) {
      const double ut = (at(k + 1) - at(k - 1)) / (2.0 * h);
      rho2 = ut / std::tan(k * h) + uk;
    }
    r.rho1[static_cast<std::size_t>(k)] = rho1;
    r.rho2[static_cast<std::size_t>(k)] = rho2;
  }
  return r;
}

inline bool strictly_convex(const Radii& r) {
  for (std::size_t k = 0; k < r.rho1.size(); ++k)
    if (!(r.rho1[k] > 0.0) || !(r.rho2[k] > 0.0)) return false;
  return true;
}

namespace detail {

inline std::vector<double> speed_field(const FlowState& s, const Speed& g) {
  Radii r = principal_radii(s);
  if (!strictly_convex(r)) throw NumericError("surface lost strict convexity at t = " + std::to_string(s.t));
  std::vector<double> out(s.u.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = g.G(1.0 / r.rho1[k], 1.0 / r.rho2[k]);
    if (!std::isfinite(out[k])) throw NumericError("non-finite speed at t = " + std::to_string(s.t));
  }
  return out;
}

}  // namespace detail

/// One explicit fourth-order Runge-Kutta step of du/dt = G(1/rho1, 1/rho2).
inline FlowState step(const FlowState& s, double dt, const Speed& g) {
  auto axpy = [](const FlowState& base, const std::vector<double>& k, double a) {
    FlowState o = base;
    for (std::size_t i = 0; i < o.u.size(); ++i) o.u[i] += a * k[i];
    return o;
  };
  const auto k1 = detail::speed_field(s, g);
  const auto k2 = detail::speed_field(axpy(s, k1, dt / 2), g);
  const auto k3 = detail::speed_field(axpy(s, k2, dt / 2), g);
  const auto k4 = detail::speed_field(axpy(s, k3, dt), g);
  FlowState o = s;
  for (std::size_t i = 0; i < o.u.size(); ++i) {
    o.u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!std::isfinite(o.u[i]) || !(o.u[i] > 0.0)) throw NumericError("support function left (0, inf)");
  }
  o.t = s.t + dt;
  return o;
}

/// dt = safety * dtheta^2 / max_k (|G_1| l1^2 + |G_2| l2^2), the largest diffusion
/// coefficient of the linearized equation.
inline double stable_dt(const FlowState& s, const Speed& g, double safety = 0.2) {
  Radii r = principal_radii(s);
  if (!strictly_convex(r)) throw NumericError("surface lost strict convexity at t = " + std::to_string(s.t));
  double dmax = 0.0;
  for (std::size_t k = 0; k < s.u.size(); ++k) {
    const double l1 = 1.0 / r.rho1[k], l2 = 1.0 / r.rho2[k];
    const double d = std::abs(g.G1(l1, l2)) * l1 * l1 + std::abs(g.G2(l1, l2)) * l2 * l2;
    dmax = std::max(dmax, d);
  }
  if (!(dmax > 0.0) || !std::isfinite(dmax)) throw NumericError("degenerate diffusion coefficient");
  const double h = s.dtheta();
  return safety * h * h / dmax;
}

struct Observables {
  double t = 0.0;
  double max_u = 0.0, min_u = 0.0;
  double max_w = std::numeric_limits<double>::quiet_NaN();
  double max_curvature = 0.0;
  double pinching = 1.0;
  double r_plus = 0.0, r_minus = 0.0;
  double q_z = 0.0;
  double circumradius = 0.0, inradius = 0.0;
  double estimated_T = std::numeric_limits<double>::quiet_NaN();
  double max_diff = 0.0;  ///< max |l1 - l2|
  double K_at_max_diff = 0.0;
};

namespace detail {

inline std::vector<double> derivative_theta(const FlowState& s) {
  const int N = s.N();
  const double h = s.dtheta();
  std::vector<double> d(s.u.size(), 0.0);
  for (int k = 1; k < N; ++k)
    d[static_cast<std::size_t>(k)] = (s.u[static_cast<std::size_t>(k) + 1] - s.u[static_cast<std::size_t>(k) - 1]) / (2.0 * h);
  return d;
}

inline double simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size() - 1;
  if (n % 2 != 0) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += 0.5 * h * (f[k] + f[k + 1]);
    return acc;
  }
  double acc = f.front() + f.back();
  for (std::size_t k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * f[k];
  return acc * h / 3.0;
}

// Minimizes a convex function of one variable on [a, b] by golden-section search.
template <class Fn>
double golden_min(Fn&& f, double a, double b, int iters = 120) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return f(0.5 * (a + b));
}

}  // namespace detail

/// Geometric observables of the state. The pseudocenter is the Gauss-map average of the
/// embedding X = u z + grad u, which lies on the axis.
inline Observables observables(const FlowState& s, const CompiledFn* w = nullptr, const Speed* speed = nullptr) {
  Observables o;
  o.t = s.t;
  const int N = s.N();
  const double h = s.dtheta();
  o.max_u = *std::max_element(s.u.begin(), s.u.end());
  o.min_u = *std::min_element(s.u.begin(), s.u.end());

  const auto ut = detail::derivative_theta(s);
  std::vector<double> integrand(s.u.size());
  for (int k = 0; k <= N; ++k) {
    const double th = k * h;
    const auto i = static_cast<std::size_t>(k);
    integrand[i] = (s.u[i] * std::cos(th) - ut[i] * std::sin(th)) * std::sin(th);
  }
  o.q_z = 0.5 * detail::simpson(integrand, h);

  o.r_plus = -std::numeric_limits<double>::infinity();
  o.r_minus = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= N; ++k) {
    const double v = s.u[static_cast<std::size_t>(k)] - o.q_z * std::cos(k * h);
    o.r_plus = std::max(o.r_plus, v);
    o.r_minus = std::min(o.r_minus, v);
  }
  auto max_about = [&](double c) {
    double m = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= N; ++k) m = std::max(m, s.u[static_cast<std::size_t>(k)] - c * std::cos(k * h));
    return m;
  };
  auto neg_min_about = [&](double c) {
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= N; ++k) m = std::min(m, s.u[static_cast<std::size_t>(k)] - c * std::cos(k * h));
    return -m;
  };
  const double span = o.max_u - o.min_u + std::abs(o.q_z) + 1e-12;
  o.circumradius = detail::golden_min(max_about, o.q_z - span, o.q_z + span);
  o.inradius = -detail::golden_min(neg_min_about, o.q_z - span, o.q_z + span);

  Radii r = principal_radii(s);
  o.max_w = w ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < s.u.size(); ++k) {
    const double l1 = 1.0 / r.rho1[k], l2 = 1.0 / r.rho2[k];
    o.max_curvature = std::max({o.max_curvature, l1, l2});
    o.pinching = std::max({o.pinching, l1 / l2, l2 / l1});
    const double diff = std::abs(l1 - l2);
    if (diff >= o.max_diff) {
      o.max_diff = diff;
      o.K_at_max_diff = l1 * l2;
    }
    if (w) {
      const double v = (*w)(l1, l2);
      if (std::isfinite(v)) o.max_w = std::max(o.max_w, v);
    }
  }
  if (speed && speed->gamma) o.estimated_T = s.t + speed->sphere_lifetime(o.max_u);
  return o;
}

struct StopRule {
  double max_u = 10.0;  ///< stop once max u reaches this value
  long max_steps = 10'000'000;
};

struct RunOptions {
  StopRule stop;
  double safety = 0.2;
  int samples = 200;  ///< observables recorded at this many equal steps of log(max u)
};

struct RunResult {
  std::vector<Observables> series;
  FlowState final_state;
  long steps = 0;
  bool reached_max_u = false;
};

/// Integrates until max u reaches stop.max_u or stop.max_steps steps were taken. The last
/// step is shortened so that max u lands on the target up to the sphere-law prediction.
inline RunResult run(const FlowState& initial, const Speed& g, const RunOptions& opt = {}, const CompiledFn* w = nullptr) {
  if (!strictly_convex(principal_radii(initial))) throw NumericError("initial surface not strictly convex");
  RunResult res;
  FlowState s = initial;
  const double u0 = *std::max_element(s.u.begin(), s.u.end());
  if (opt.stop.max_u <= u0) throw std::invalid_argument("stop.max_u must exceed the initial max u");
  const double log_step = std::log(opt.stop.max_u / u0) / std::max(1, opt.samples);
  double next_sample = std::log(u0);
  auto record = [&](const FlowState& st) { res.series.push_back(observables(st, w, &g)); };
  record(s);
  next_sample += log_step;

  while (res.steps < opt.stop.max_steps) {
    double dt = stable_dt(s, g, opt.safety);
    double mu = *std::max_element(s.u.begin(), s.u.end());
    const double growth = g.G(1.0 / mu, 1.0 / mu);
    bool last = false;
    if (mu + growth * dt >= opt.stop.max_u) {
      // Predict the remaining time from the sphere law through the current max.
      double remaining = dt;
      if (g.gamma && *g.gamma != 1) {
        const int gm = *g.gamma;
        const double a = std::pow(mu, 1.0 - gm), b = std::pow(opt.stop.max_u, 1.0 - gm);
        remaining = (a - b) / ((gm - 1) * g.g0);
      } else if (g.gamma) {
        remaining = std::log(opt.stop.max_u / mu) / g.g0;
      } else {
        remaining = (opt.stop.max_u - mu) / growth;
      }
      if (remaining <= dt) {
        dt = std::max(remaining, 0.0);
        last = true;
      }
    }
    if (dt > 0.0) s = step(s, dt, g);
    ++res.steps;
    mu = *std::max_element(s.u.begin(), s.u.end());
    if (last || mu >= opt.stop.max_u) {
      record(s);
      res.reached_max_u = true;
      break;
    }
    if (std::log(mu) >= next_sample) {
      record(s);
      while (std::log(mu) >= next_sample) next_sample += log_step;
    }
  }
  res.final_state = s;
  return res;
}

struct LinearFit {
  double slope = 0.0, intercept = 0.0, residual = 0.0;
  std::size_t points = 0;
};

inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  f.points = x.size();
  if (x.size() < 2) return f;
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.slope * x[i] + f.intercept);
    rss += e * e;
  }
  f.residual = std::sqrt(rss / n);
  return f;
}

struct TEstimate {
  double T = std::numeric_limits<double>::infinity();
  double residual = 0.0;
};

/// Fits max(u)^(1 - gamma) linearly in t over the final quarter of the series; T is the
/// zero crossing. gamma = 2 is used when the speed is not homogeneous.
inline TEstimate estimate_T(const std::vector<Observables>& series, const Speed& g) {
  const int gm = g.gamma.value_or(2);
  if (gm <= 1) return {};
  const std::size_t n = series.size();
  const std::size_t window = n / 4;
  if (window < 8) throw NumericError("estimate_T needs at least 8 samples in the fit window");
  std::vector<double> x, y;
  for (std::size_t i = n - window; i < n; ++i) {
    if (i > n - window && series[i].max_u < series[i - 1].max_u)
      throw NumericError("max u is not monotone along the series");
    x.push_back(series[i].t);
    y.push_back(std::pow(series[i].max_u, 1.0 - gm));
  }
  LinearFit f = least_squares(x, y);
  if (!(f.slope < 0.0)) throw NumericError("estimate_T: fitted slope is not negative");
  return {-f.intercept / f.slope, f.residual};
}

/// Ratios of late-time to initial roundness measures, and the exploratory convergence slopes.
struct RunSummary {
  double T_hat = std::numeric_limits<double>::infinity();
  double pinch_excess_initial = 0.0, pinch_excess_final = 0.0;  ///< pinching - 1
  double osc_initial = 0.0, osc_final = 0.0;                    ///< (r+ - r-) / R(t)
  LinearFit radius_slope;  ///< log |r+ / R(t) - 1| against log(T - t), or against -t when gamma = 1
  LinearFit diff_slope;    ///< log(max|l1 - l2| / K^(5/4)) against the same abscissa
};

/// R(t) is the sphere-law radius normalized by the fitted T (gamma > 1) or the exponential
/// rate (gamma = 1); constant factors cancel in every ratio reported here.
inline RunSummary summarize_run(const std::vector<Observables>& series, const Speed& g) {
  RunSummary s;
  if (series.size() < 2) throw NumericError("summary needs at least two samples");
  const int gm = g.require_gamma();
  TEstimate te = estimate_T(series, g);
  s.T_hat = te.T;
  auto sphere_scale = [&](double t) {
    if (gm == 1) return std::exp(g.g0 * t);
    return std::pow((gm - 1) * g.g0 * (s.T_hat - t), -1.0 / (gm - 1));
  };
  auto abscissa = [&](double t) { return gm == 1 ? -t : std::log(s.T_hat - t); };
  const Observables& a = series.front();
  const Observables& b = series.back();
  s.pinch_excess_initial = a.pinching - 1.0;
  s.pinch_excess_final = b.pinching - 1.0;
  s.osc_initial = (a.r_plus - a.r_minus) / sphere_scale(a.t);
  s.osc_final = (b.r_plus - b.r_minus) / sphere_scale(b.t);

  std::vector<double> x1, y1, x2, y2;
  for (const auto& o : series) {
    if (gm > 1 && !(o.t < s.T_hat)) continue;
    const double dev = std::abs(o.r_plus / sphere_scale(o.t) - 1.0);
    if (dev > 0.0 && std::isfinite(dev)) {
      x1.push_back(abscissa(o.t));
      y1.push_back(std::log(dev));
    }
    if (o.max_diff > 0.0 && o.K_at_max_diff > 0.0) {
      x2.push_back(abscissa(o.t));
      y2.push_back(std::log(o.max_diff / std::pow(o.K_at_max_diff, 1.25)));
    }
  }
  s.radius_slope = least_squares(x1, y1);
  s.diff_slope = least_squares(x2, y2);
  return s;
}

inline const char* csv_header() { return "t,max_u,min_u,max_w,max_curv,pinch,r_plus,r_minus,q_z,est_T"; }

inline void write_csv(std::ostream& os, const std::vector<Observables>& series) {
  os << csv_header() << '\n';
  char buf[512];
  for (const auto& o : series) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", o.t, o.max_u,
                  o.min_u, o.max_w, o.max_curvature, o.pinching, o.r_plus, o.r_minus, o.q_z, o.estimated_T);
    os << buf;
  }
}

/// Polynomial in c = cos(theta) with double coefficients, lowest degree first.
struct CosineSeries {
  std::vector<double> coeffs;

  double operator()(double theta) const {
    const double c = std::cos(theta);
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * c + *it;
    return acc;
  }
};

class CosineSeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Grammar: sum of products of decimal numbers, cos(theta), parenthesized sums and integer
// powers of these; evaluated as a polynomial in cos(theta).
class CosineParser {
 public:
  explicit CosineParser(std::string_view s) : s_(s) {}

  std::vector<double> parse() {
    auto p = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  using Poly = std::vector<double>;

  static Poly add(const Poly& a, const Poly& b, double sign) {
    Poly r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += sign * b[i];
    return r;
  }
  static Poly mul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw CosineSeriesError(msg + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool eat_word(std::string_view w) {
    skip();
    if (s_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }

  Poly sum() {
    Poly acc = product();
    for (;;) {
      if (eat('+'))
        acc = add(acc, product(), 1.0);
      else if (eat('-'))
        acc = add(acc, product(), -1.0);
      else
        return acc;
    }
  }
  Poly product() {
    Poly acc = unary();
    for (;;) {
      if (eat('*')) {
        acc = mul(acc, unary());
      } else if (eat('/')) {
        Poly d = unary();
        if (d.size() != 1 || d[0] == 0.0) fail("division only by nonzero numbers");
        for (auto& c : acc) c /= d[0];
      } else {
        return acc;
      }
    }
  }
  Poly unary() {
    if (eat('-')) {
      Poly p = unary();
      for (auto& c : p) c = -c;
      return p;
    }
    if (eat('+')) return unary();
    return power();
  }
  Poly power() {
    Poly base = atom();
    if (!eat('^')) return base;
    skip();
    std::size_t end = pos_;
    while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) ++end;
    if (end == pos_) fail("expected a nonnegative integer exponent");
    int e = std::stoi(std::string(s_.substr(pos_, end - pos_)));
    pos_ = end;
    if (e > 64) fail("exponent too large");
    Poly r{1.0};
    for (int i = 0; i < e; ++i) r = mul(r, base);
    return r;
  }
  Poly atom() {
    if (eat('(')) {
      Poly p = sum();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (eat_word("cos")) {
      if (!eat('(') || !eat_word("theta") || !eat(')')) fail("expected cos(theta)");
      return {0.0, 1.0};
    }
    skip();
    const char* begin = s_.data() + pos_;
    char* end = nullptr;
    if (pos_ >= s_.size() || !(std::isdigit(static_cast<unsigned char>(*begin)) || *begin == '.')) fail("expected a number");
    std::string tmp(s_.substr(pos_));
    double v = std::strtod(tmp.c_str(), &end);
    std::size_t used = static_cast<std::size_t>(end - tmp.c_str());
    if (used == 0) fail("expected a number");
    pos_ += used;
    return {v};
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses u0 written as a polynomial in cos(theta), e.g. "1 + 0.05*(3*cos(theta)^2 - 1)".
inline CosineSeries parse_cosine_series(std::string_view text) {
  CosineSeries cs;
  cs.coeffs = detail::CosineParser(text).parse();
  while (cs.coeffs.size() > 1 && cs.coeffs.back() == 0.0) cs.coeffs.pop_back();
  return cs;
}

}  // namespace curvflow
