#include "slepian/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <json.hpp>
#include <optional>
#include <ostream>

#include "slepian/changepoint.hpp"
#include "slepian/errors.hpp"
#include "slepian/fpt.hpp"
#include "slepian/validation.hpp"

namespace slepian {

namespace {

using nlohmann::json;

// Values are reported at 10 significant digits; inputs are echoed exactly.
double sig10(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return std::strtod(buf, nullptr);
}

double default_tol() {
  if (const char* env = std::getenv("SLEPIAN_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) throw DomainError("SLEPIAN_TOL must be a positive number");
    return v;
  }
  return kDefaultProbabilityTol;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Time rescaled by the window length l and heights by 1 / sqrt(l).
BarrierSpec rescale(const BarrierSpec& b, double l) {
  const double root = std::sqrt(l);
  std::vector<Segment> segs;
  for (const Segment& s : b.segments()) segs.push_back({s.slope * root, s.duration / l});
  return BarrierSpec(b.intercept() / root, std::move(segs));
}

struct FptArgs {
  std::string barrier;
  double x = 0.0;
  bool unconditional = false;
  std::string method = "auto";
  double tol = 0.0;
  std::size_t paths = 1'000'000;
  double dt = 1.0 / 2048.0;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  double window = 1.0;
};

int cmd_fpt(const FptArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!(a.window > 0.0)) throw DomainError("--window must be positive");
  const BarrierSpec input = parse_barrier(a.barrier);
  FptRequest req{a.window == 1.0 ? input : rescale(input, a.window), a.x / std::sqrt(a.window), a.unconditional,
                 parse_method(a.method), a.tol, {}};
  req.mc = {a.paths, a.dt, a.seed, a.threads};
  const FptResult r = fpt(req);

  json j;
  j["value"] = sig10(r.value);
  j["route"] = std::string(to_string(r.route));
  j["err"] = sig10(r.error_estimate);
  j["converged"] = r.converged;
  j["dims"] = r.dims;
  j["evaluations"] = r.evaluations;
  j["wall_time_s"] = sig10(seconds_since(t0));
  json in;
  in["barrier"] = json::parse(to_json(input));
  in["x"] = a.x;
  in["unconditional"] = a.unconditional;
  in["method"] = a.method;
  in["tol"] = a.tol;
  in["window"] = a.window;
  if (r.route == Route::MonteCarlo) {
    in["paths"] = a.paths;
    in["dt"] = a.dt;
    in["seed"] = a.seed;
  }
  j["inputs"] = in;
  out << j.dump(2) << '\n';
  return r.converged ? kExitOk : kExitAccuracy;
}

int cmd_tables(int which, double tol, std::ostream& out) {
  out << power_table_csv(power_table(which, tol));
  return kExitOk;
}

int cmd_arl(const std::optional<double>& h, const std::optional<double>& target, double tol, std::ostream& out,
            std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  json j;
  json in;
  in["tol"] = tol;
  double threshold = 0.0;
  if (h) {
    threshold = *h;
    in["h"] = *h;
  } else {
    threshold = threshold_for_arl(*target, tol);
    in["target"] = *target;
    j["h"] = sig10(threshold);
  }
  if (!arl_in_validated_range(threshold)) {
    err << "warning: h = " << threshold << " is below 3, where the run-length approximation is not validated\n";
    j["warning"] = "h below validated range (h >= 3)";
  }
  j["arl"] = sig10(arl(threshold, tol));
  j["lambda"] = sig10(lambda_h(threshold, tol));
  j["wall_time_s"] = sig10(seconds_since(t0));
  j["inputs"] = in;
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_validate(const std::string& suite, const std::string& budget, int which, double tol, std::ostream& out) {
  auto line = [&](const CaseReport& c) {
    char buf[320];
    std::snprintf(buf, sizeof buf, "%s  %-52s computed=%.6f reference=%.6f dev=%.2e allowed=%.2e margin=%.2e",
                  c.passed() ? "PASS" : (c.converged ? "FAIL" : "BUDGET"), c.name.c_str(), c.computed, c.reference,
                  c.deviation(), c.allowed, c.margin());
    out << buf;
    if (!c.note.empty()) out << "  " << c.note;
    out << '\n' << std::flush;
  };
  SuiteReport report;
  if (suite == "seams") {
    report = run_seams_suite(tol, line);
  } else if (suite == "tables") {
    report = run_tables_suite(which, tol, line);
  } else if (suite == "mc") {
    report = run_mc_suite(parse_budget(budget), 1.0 / 2048.0, tol, line);
  } else {
    throw DomainError("unknown suite '" + suite + "' (seams|mc|tables)");
  }
  std::size_t failed = 0;
  for (const CaseReport& c : report.cases) failed += c.passed() ? 0 : 1;
  char buf[160];
  std::snprintf(buf, sizeof buf, "suite %s: %zu cases, %zu failed, max deviation %.3e\n", report.suite.c_str(),
                report.cases.size(), failed, report.max_deviation());
  out << buf;
  if (report.all_passed()) return kExitOk;
  return report.budget_exhausted() ? kExitAccuracy : kExitViolation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"First-passage probabilities of the Slepian process S(t) = W(t) - W(t+1)"};
  app.require_subcommand(1);

  FptArgs fa;
  auto* fpt_cmd = app.add_subcommand("fpt", "Probability that S stays below a barrier");
  fpt_cmd->add_option("--barrier", fa.barrier, "JSON {\"intercept\":a,\"segments\":[[slope,duration],...]} or a,b,T | a,b,b',T,T' | a,b,b',b'' | a,b,b',b'',T,T'")
      ->required();
  fpt_cmd->add_option("--x", fa.x, "Start value S(0)");
  fpt_cmd->add_flag("--unconditional", fa.unconditional, "Draw S(0) from N(0,1) instead of fixing it");
  fpt_cmd->add_option("--method", fa.method, "auto|closed|det|mc")->check(CLI::IsMember({"auto", "closed", "det", "mc"}));
  auto* fpt_tol = fpt_cmd->add_option("--tol", fa.tol, "Absolute tolerance (default 1e-7 or $SLEPIAN_TOL)");
  fpt_cmd->add_option("--paths", fa.paths, "Monte Carlo paths");
  fpt_cmd->add_option("--dt", fa.dt, "Monte Carlo grid step");
  fpt_cmd->add_option("--seed", fa.seed, "Monte Carlo seed");
  fpt_cmd->add_option("--threads", fa.threads, "Monte Carlo threads (0: all cores)");
  fpt_cmd->add_option("--window", fa.window, "Moving-sum window length l; time is divided by l, heights by sqrt(l)");

  int which = 0;
  double tables_tol = 0.0;
  auto* tables_cmd = app.add_subcommand("tables", "Regenerate a power table as CSV");
  tables_cmd->add_option("--which", which, "1: gamma, 2: gamma1, 3: gamma2, 4: gamma3")->required()->check(CLI::Range(1, 4));
  auto* tables_tol_opt = tables_cmd->add_option("--tol", tables_tol, "Absolute tolerance");

  std::optional<double> arl_h;
  std::optional<double> arl_target;
  double arl_tol = 0.0;
  auto* arl_cmd = app.add_subcommand("arl", "Average run length for h, or the threshold h for a target");
  arl_cmd->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
  auto* h_opt = arl_cmd->add_option("--h", arl_h, "Threshold");
  auto* target_opt = arl_cmd->add_option("--target", arl_target, "Target average run length C");
  h_opt->excludes(target_opt);
  auto* arl_tol_opt = arl_cmd->add_option("--tol", arl_tol, "Absolute tolerance");

  std::string suite;
  std::string budget = "10^6";
  int suite_which = 0;
  double validate_tol = 0.0;
  auto* validate_cmd = app.add_subcommand("validate", "Run a validation suite");
  validate_cmd->add_option("--suite", suite, "seams|mc|tables")->required()->check(CLI::IsMember({"seams", "mc", "tables"}));
  validate_cmd->add_option("--budget", budget, "Monte Carlo paths per configuration, e.g. 10^6");
  validate_cmd->add_option("--which", suite_which, "Tables suite: 0 (all) or 1..4")->check(CLI::Range(0, 4));
  auto* validate_tol_opt = validate_cmd->add_option("--tol", validate_tol, "Absolute tolerance");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }

  try {
    const double env_tol = default_tol();
    if (fpt_cmd->parsed()) {
      if (fpt_tol->count() == 0) fa.tol = env_tol;
      return cmd_fpt(fa, out);
    }
    if (tables_cmd->parsed()) return cmd_tables(which, tables_tol_opt->count() ? tables_tol : env_tol, out);
    if (arl_cmd->parsed()) {
      if (!arl_h && !arl_target) throw DomainError("arl: give exactly one of --h or --target");
      return cmd_arl(arl_h, arl_target, arl_tol_opt->count() ? arl_tol : env_tol, out, err);
    }
    if (validate_cmd->parsed()) {
      return cmd_validate(suite, budget, suite_which, validate_tol_opt->count() ? validate_tol : env_tol, out);
    }
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const CapabilityError& e) {
    err << "capability error: " << e.what() << '\n';
    return kExitCapability;
  } catch (const AccuracyError& e) {
    err << "accuracy error: " << e.what() << '\n';
    return kExitAccuracy;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << '\n';
    return kExitAccuracy;
  }
  return kExitDomain;
}

}  // namespace slepian
