#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "curvflow/evolution.hpp"
#include "curvflow/expr_io.hpp"
#include "curvflow/flowsim.hpp"
#include "curvflow/report.hpp"
#include "curvflow/sieve.hpp"

namespace {

using namespace curvflow;

enum ExitCode { kOk = 0, kNotProven = 1, kUsage = 2, kNumeric = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VelocityFlags {
  std::optional<std::string> velocity;  // signed F
  std::optional<std::string> speed;     // G = -F

  void attach(CLI::App* cmd) {
    auto* f = cmd->add_option("-F,--velocity", velocity, "signed velocity F(l1, l2); expanding flows have F < 0");
    auto* g = cmd->add_option("-G,--speed", speed, "expansion speed G(l1, l2) > 0, taken as F = -G");
    f->excludes(g);
  }

  RationalFn F(const char* fallback_speed = nullptr) const {
    if (velocity) return parse(*velocity);
    if (speed) return -parse(*speed);
    if (fallback_speed) return -parse(fallback_speed);
    throw UsageError("one of --velocity or --speed is required");
  }
};

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw UsageError("cannot open output file '" + path + "'");
  return file;
}

void print_evolution_text(std::ostream& os, const EvolutionResult& r) {
  os << "F   = " << print_factored(r.velocity) << '\n'
     << "w   = " << print_factored(r.quantity) << '\n'
     << "a1  = " << print_factored(r.ratio.a1) << '\n'
     << "C_w = " << print_factored(r.Cw) << '\n'
     << "G1  = " << print_factored(r.G1) << '\n'
     << "G2  = " << print_factored(r.G2) << '\n';
}

std::string witness_text(const Witness& w) {
  return "(l1, l2) = (" + to_string(w.l1) + ", " + to_string(w.l2) + ")";
}

int cmd_evolve(const VelocityFlags& vf, const std::string& quantity, const std::string& format) {
  EvolutionResult r = evolve(vf.F(), parse(quantity));
  if (format != "json") print_evolution_text(std::cout, r);
  if (format != "text") std::cout << evolution_json(r).dump() << '\n';
  return kOk;
}

int cmd_verify(const VelocityFlags& vf, const std::string& quantity, const std::string& format, const VerifyOptions& opt) {
  MonotonicityReport rep = verify_monotone(vf.F(), parse(quantity), opt);
  if (format != "json") {
    print_evolution_text(std::cout, rep.evolution);
    std::cout << "sign C_w: " << verdict_name(rep.cert_Cw.verdict) << " (" << method_name(rep.cert_Cw.method) << ")\n"
              << "sign G1 : " << verdict_name(rep.cert_G1.verdict) << " (" << method_name(rep.cert_G1.method) << ")\n"
              << "verdict : " << verdict_name(rep.verdict) << '\n';
    if (rep.witness) std::cout << "witness : " << rep.failing << " > 0 at " << witness_text(*rep.witness) << '\n';
  }
  if (format != "text") std::cout << to_json(rep).dump() << '\n';
  return rep.verdict == MonotoneVerdict::Monotone ? kOk : kNotProven;
}

struct SearchFlags {
  int max_degree = 6;
  long coeff_min = 1;
  long coeff_max = 4;
  bool no_diagonal_factor = false;
  std::uint64_t seed = 42;
  int samples = 32;
  unsigned workers = 1;
  std::string output = "search_report.jsonl";
  bool verified_only = false;
  bool timing = false;
};

int cmd_search(const VelocityFlags& vf, const SearchFlags& sf) {
  SearchSpace space;
  space.velocity = vf.F("1/(l1*l2)");
  space.max_degree = sf.max_degree;
  space.coeff_lo = sf.coeff_min;
  space.coeff_hi = sf.coeff_max;
  space.require_diagonal_factor = !sf.no_diagonal_factor;
  space.seed = sf.seed;
  space.n_samples = sf.samples;
  try {
    space.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  SearchResult res = search(space, sf.workers);

  std::ofstream file;
  std::ostream& os = open_output(sf.output, file);
  for (const auto& r : res.reports) {
    if (sf.verified_only && !r.verified()) continue;
    os << to_json(r, space.velocity, sf.timing).dump() << '\n';
  }
  os.flush();

  std::ostream& out = (&os == &std::cout) ? std::cerr : std::cout;
  out << "velocity   : " << print(space.velocity) << '\n'
      << "candidates : " << res.summary.candidates << '\n'
      << "verified   : " << res.summary.verified << '\n';
  for (const auto& [stage, n] : res.summary.rejected_by_stage)
    out << "rejected at stage " << std::left << std::setw(13) << stage << ": " << n << '\n';
  for (const auto* r : res.verified()) out << "  verified w = " << print_factored(r->candidate) << '\n';
  return kOk;
}

struct SimulateFlags {
  std::string u0 = "1";
  int N = 64;
  double stop_factor = 10.0;
  std::optional<double> max_u;
  long max_steps = 10'000'000;
  int samples = 200;
  double safety = 0.2;
  std::optional<std::string> track_w;
  std::string output = "-";
  bool report = false;
};

int cmd_simulate(const VelocityFlags& vf, const SimulateFlags& sf) {
  Speed speed(-vf.F("1/(l1*l2)"));
  CosineSeries u0;
  try {
    u0 = parse_cosine_series(sf.u0);
  } catch (const CosineSeriesError& e) {
    throw UsageError(e.what());
  }
  if (sf.N < 16) throw UsageError("-N must be at least 16");
  FlowState s = FlowState::from_function(sf.N, u0);
  for (double v : s.u)
    if (!(v > 0.0)) throw NumericError("initial surface not strictly convex");
  if (!strictly_convex(principal_radii(s))) throw NumericError("initial surface not strictly convex");

  std::optional<CompiledFn> w;
  if (sf.track_w) w.emplace(parse(*sf.track_w));
  RunOptions opt;
  const double u_max0 = *std::max_element(s.u.begin(), s.u.end());
  opt.stop.max_u = sf.max_u ? *sf.max_u : sf.stop_factor * u_max0;
  opt.stop.max_steps = sf.max_steps;
  opt.samples = sf.samples;
  opt.safety = sf.safety;
  if (!(opt.stop.max_u > u_max0)) throw UsageError("the stop value must exceed the initial max u");

  RunResult res = run(s, speed, opt, w ? &*w : nullptr);
  std::ofstream file;
  std::ostream& os = open_output(sf.output, file);
  write_csv(os, res.series);
  os.flush();

  if (sf.report) {
    std::ostream& out = (&os == &std::cout) ? std::cerr : std::cout;
    out << std::setprecision(6);
    out << "steps                 : " << res.steps << '\n';
    if (speed.gamma) {
      RunSummary sum = summarize_run(res.series, speed);
      out << "estimated T           : " << sum.T_hat << '\n'
          << "pinching - 1          : " << sum.pinch_excess_initial << " -> " << sum.pinch_excess_final << '\n'
          << "rescaled oscillation  : " << sum.osc_initial << " -> " << sum.osc_final << '\n'
          << "exploratory slope, log|r+/R - 1|       : " << sum.radius_slope.slope << " (" << sum.radius_slope.points
          << " points)\n"
          << "exploratory slope, log max|l1-l2|/K^1.25: " << sum.diff_slope.slope << " (" << sum.diff_slope.points
          << " points)\n"
          << "abscissa              : " << (*speed.gamma == 1 ? "-t" : "log(T - t)") << '\n';
    }
  }
  return res.reached_max_u ? kOk : kNumeric;
}

unsigned default_workers() {
  if (const char* env = std::getenv("CURVFLOW_WORKERS")) {
    try {
      int v = std::stoi(env);
      if (v >= 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolution equations, monotone quantities and flow simulation for curvature flows of surfaces"};
  app.set_config("--config", "", "TOML or INI file with option values; command-line flags take precedence");
  app.require_subcommand(1);

  VelocityFlags vf_evolve, vf_verify, vf_search, vf_sim;
  std::string quantity_evolve, quantity_verify;
  std::string format_evolve = "both", format_verify = "text";
  VerifyOptions verify_opt;

  auto* evolve_cmd = app.add_subcommand("evolve", "print C_w, G1 and G2 at a critical point of w");
  vf_evolve.attach(evolve_cmd);
  evolve_cmd->add_option("-w,--quantity", quantity_evolve, "quantity w in l1, l2 (H, A, K allowed)")->required();
  evolve_cmd->add_option("--format", format_evolve, "text, json or both")->check(CLI::IsMember({"text", "json", "both"}));

  auto* verify_cmd = app.add_subcommand("verify", "certify C_w <= 0 and G1 <= 0 on the open quadrant");
  vf_verify.attach(verify_cmd);
  verify_cmd->add_option("-w,--quantity", quantity_verify, "quantity w in l1, l2 (H, A, K allowed)")->required();
  verify_cmd->add_option("--format", format_verify, "text, json or both")->check(CLI::IsMember({"text", "json", "both"}));
  verify_cmd->add_option("--samples", verify_opt.prefilter_samples, "random samples for non-homogeneous input");
  verify_cmd->add_option("--seed", verify_opt.seed, "seed for the random samples");

  SearchFlags sf;
  sf.workers = default_workers();
  auto* search_cmd = app.add_subcommand("search", "enumerate candidate quantities and keep the verified ones");
  vf_search.attach(search_cmd);
  search_cmd->add_option("--max-degree", sf.max_degree, "bound on the degree of the denominator p2");
  search_cmd->add_option("--coeff-min", sf.coeff_min, "smallest nonzero monomial coefficient");
  search_cmd->add_option("--coeff-max", sf.coeff_max, "largest monomial coefficient");
  search_cmd->add_flag("--no-diagonal-factor", sf.no_diagonal_factor, "do not force (l1 - l2)^2 to divide p1");
  search_cmd->add_option("--seed", sf.seed, "seed of the randomized stage");
  search_cmd->add_option("--samples", sf.samples, "random points per candidate in the randomized stage");
  search_cmd->add_option("-j,--workers", sf.workers, "worker threads (0: all cores); default from CURVFLOW_WORKERS");
  search_cmd->add_option("-o,--output", sf.output, "JSON-lines report file ('-' for standard output)");
  search_cmd->add_flag("--verified-only", sf.verified_only, "write only verified candidates");
  search_cmd->add_flag("--timing", sf.timing, "include per-candidate seconds in the report");

  SimulateFlags simf;
  auto* sim_cmd = app.add_subcommand("simulate", "evolve an axisymmetric convex surface and write a CSV series");
  vf_sim.attach(sim_cmd);
  sim_cmd->add_option("--u0", simf.u0, "initial support function as a polynomial in cos(theta)");
  sim_cmd->add_option("-N,--nodes", simf.N, "grid intervals on [0, pi]");
  sim_cmd->add_option("--stop-factor", simf.stop_factor, "stop once max u reaches this multiple of its initial value");
  sim_cmd->add_option("--max-u", simf.max_u, "stop once max u reaches this value (overrides --stop-factor)");
  sim_cmd->add_option("--max-steps", simf.max_steps, "step limit");
  sim_cmd->add_option("--samples", simf.samples, "number of recorded samples");
  sim_cmd->add_option("--safety", simf.safety, "time step safety factor");
  sim_cmd->add_option("--track-w", simf.track_w, "quantity whose spatial maximum fills the max_w column");
  sim_cmd->add_option("-o,--output", simf.output, "CSV file ('-' for standard output)");
  sim_cmd->add_flag("--report", simf.report, "print the estimated T, decay ratios and exploratory slopes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*evolve_cmd) return cmd_evolve(vf_evolve, quantity_evolve, format_evolve);
    if (*verify_cmd) return cmd_verify(vf_verify, quantity_verify, format_verify, verify_opt);
    if (*search_cmd) return cmd_search(vf_search, sf);
    if (*sim_cmd) return cmd_simulate(vf_sim, simf);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const AlgebraError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
