// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>

#include "slepian/changepoint.hpp"
#include "slepian/fpt.hpp"
#include "slepian/quadrature.hpp"
#include "slepian/reference_values.hpp"
#include "slepian/validation.hpp"

using namespace slepian;

namespace {

constexpr double kTol = kDefaultProbabilityTol;

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s  %d  %-46s %s (%.1fs)\n", o.ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome suite_outcome(const SuiteReport& r) {
  std::size_t failed = 0;
  for (const CaseReport& c : r.cases) {
    if (!c.passed()) {
      ++failed;
      std::printf("      failed case %s: computed=%.6f reference=%.6f allowed=%.2e%s\n", c.name.c_str(), c.computed,
                  c.reference, c.allowed, c.converged ? "" : " (budget exhausted)");
    }
  }
  return {r.all_passed() && !r.cases.empty(),
          std::to_string(r.cases.size()) + " cases, " + std::to_string(failed) + " failed, max dev " +
              fmt("%.2e", r.max_deviation())};
}

Outcome arl_targets() {
  const double targets[] = {100, 500, 1000};
  const double expected[] = {3.11, 3.63, 3.83};
  double worst_h = 0.0, worst_rel = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double h = threshold_for_arl(targets[i], kTol);
    worst_h = std::max(worst_h, std::abs(h - expected[i]));
    worst_rel = std::max(worst_rel, std::abs(arl(h, kTol) / targets[i] - 1.0));
  }
  return {worst_h <= 0.01 && worst_rel <= 1e-3, fmt("max |h - ref| %.4f, max ARL rel err %.1e", worst_h, worst_rel)};
}

Outcome flatness() {
  const double g0 = power_gamma(0.0, 3.0, 3.0, kTol);
  double worst = 0.0;
  for (int i = 0; i <= 13; ++i) {
    const double x = -4.0 + 0.5 * i;
    worst = std::max(worst, std::abs(power_gamma(x, 3.0, 3.0, kTol) / g0 - 1.0));
  }
  return {worst <= 1e-3, fmt("max |gamma(x)/gamma(0) - 1| = %.2e", worst)};
}

Outcome invariants() {
  const double slack = 2 * kTol;
  int broken = 0;
  // Range and monotonicity in the intercept and the horizon.
  for (double b : {-0.5, 0.0, 0.5}) {
    for (double x : {-1.0, 0.0}) {
      double prev = 0.0;
      for (double a = 0.25; a <= 3.5; a += 0.25) {
        const double v = fpt_linear_integer(a, b, 2, x).value;
        if (v < 0.0 || v > 1.0 || v < prev - slack) ++broken;
        prev = v;
      }
      double shorter = 1.0;
      for (double T : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0}) {
        const double v = fpt(FptRequest{BarrierSpec::linear(2.0, b, T), x, false, Method::Determinant, kTol, {}}).value;
        if (v < 0.0 || v > 1.0 || v > shorter + slack) ++broken;
        shorter = v;
      }
    }
  }
  // Power ordering over the table grid.
  for (double h : kTableThresholds) {
    for (double mu = 2.0; mu <= 5.0; mu += 0.5) {
      const double g = power_gamma(0, h, mu, kTol), g1 = power_gamma1(0, h, mu, kTol), g3 = power_gamma3(0, h, mu, kTol);
      if (g3 > g1 + slack || g1 > g + slack) ++broken;
    }
  }
  // Stationary density normalisation.
  double worst_mass = 0.0;
  for (double h : kTableThresholds) {
    Region region{{Axis{LowerLimit::unbounded(), h, 0.0, 1.0}}};
    const double mass =
        integrate([h](std::span<const double> v) { return stationary_density_p(v[0], h); }, region, 1e-12).value;
    worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
  }
  return {broken == 0 && worst_mass <= 1e-8,
          std::to_string(broken) + " violations, max |mass - 1| " + fmt("%.1e", worst_mass)};
}

}  // namespace

int main() {
  criterion(1, "power table gamma within 0.002", [] { return suite_outcome(run_tables_suite(1, kTol)); });
  criterion(2, "power table gamma1 within 0.001", [] { return suite_outcome(run_tables_suite(2, kTol)); });
  criterion(3, "power table gamma2 within 0.002", [] { return suite_outcome(run_tables_suite(3, kTol)); });
  criterion(4, "power table gamma3 within 0.002", [] { return suite_outcome(run_tables_suite(4, kTol)); });
  criterion(5, "thresholds for ARL 100/500/1000", arl_targets);
  criterion(6, "route agreement at seams", [] { return suite_outcome(run_seams_suite(kTol)); });
  criterion(7, "analytic vs Monte Carlo, 10^6 paths, dt 2^-11",
            [] { return suite_outcome(run_mc_suite(1'000'000, 1.0 / 2048.0, kTol)); });
  criterion(8, "power flat in start value", flatness);
  criterion(9, "range, monotonicity, ordering, density mass", invariants);
  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
