#include "slepian/validation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "slepian/changepoint.hpp"
#include "slepian/errors.hpp"
#include "slepian/mc_oracle.hpp"
#include "slepian/reference_values.hpp"

namespace slepian {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

void add(SuiteReport& report, CaseReport c, const CaseCallback& on_case) {
  if (on_case) on_case(c);
  report.cases.push_back(std::move(c));
}

CaseReport compare(std::string name, const FptResult& computed, const FptResult& reference, double allowed) {
  CaseReport c;
  c.name = std::move(name);
  c.computed = computed.value;
  c.reference = reference.value;
  c.allowed = allowed;
  c.converged = computed.converged && reference.converged;
  return c;
}

FptResult exact(double value) {
  FptResult r;
  r.value = value;
  r.route = Route::ClosedForm;
  return r;
}

}  // namespace

bool SuiteReport::all_passed() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseReport& c) { return c.passed(); });
}

bool SuiteReport::budget_exhausted() const {
  return std::any_of(cases.begin(), cases.end(), [](const CaseReport& c) { return !c.converged; });
}

double SuiteReport::max_deviation() const {
  double worst = 0.0;
  for (const CaseReport& c : cases) worst = std::max(worst, c.deviation());
  return worst;
}

SuiteReport run_seams_suite(double tol, const CaseCallback& on_case) {
  SuiteReport report{"seams", {}};
  FptOptions o;
  o.tol = tol;

  // Horizon 1: determinant with one unit step vs the closed form, raw and reduced.
  FptOptions raw = o;
  raw.reduced = false;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double a = 0.5 + 0.75 * i;
      const double b = -1.0 + 0.5 * j;
      const double x = a - 0.25 - 0.6 * ((i + j) % 5);
      const FptResult closed = exact(fpt_closed_T_le_1(a, b, 1.0, x));
      add(report, compare(fmt("n=1 vs closed a=%g b=%g x=%g", a, b, x), fpt_linear_integer(a, b, 1, x, raw), closed,
                          1e-6),
          on_case);
    }
  }

  // Horizon 0.5 through the non-integer-horizon determinant.
  const double half_cases[5][3] = {{1.0, 0.0, 0.0}, {2.0, 0.5, -0.5}, {0.5, -1.0, 0.2}, {3.0, 1.0, 1.5}, {1.5, 2.0, -2.0}};
  for (const auto& c : half_cases) {
    const FptResult closed = exact(fpt_closed_T_le_1(c[0], c[1], 0.5, c[2]));
    add(report, compare(fmt("T=0.5 vs closed a=%g b=%g x=%g", c[0], c[1], c[2]), fpt_linear_real(c[0], c[1], 0.5, c[2], o),
                        closed, 1e-6),
        on_case);
  }

  // One change with b' = b reduces to a single slope.
  const double same_slope[4][3] = {{3.0, 0.0, 0.0}, {2.0, 0.5, -0.5}, {1.5, -0.3, 0.4}, {2.5, 1.0, 1.0}};
  const int splits[3][2] = {{1, 1}, {1, 2}, {2, 1}};
  for (const auto& c : same_slope) {
    for (const auto& s : splits) {
      const FptResult one = fpt_one_change(c[0], c[1], c[1], s[0], s[1], c[2], o);
      const FptResult lin = fpt_linear_integer(c[0], c[1], s[0] + s[1], c[2], o);
      CaseReport r = compare(fmt("one change b'=b a=%g b=%g x=%g", c[0], c[1], c[2]), one, lin, 2e-6);
      r.name += " T=" + std::to_string(s[0]) + " T'=" + std::to_string(s[1]);
      add(report, std::move(r), on_case);
    }
  }

  // Two changes with b'' = b' reduce to one change over (1, 2).
  const double two[4][4] = {{3.0, 0.0, -2.0, 0.0}, {2.0, 0.5, -1.0, 0.3}, {3.11, -1.0, 1.0, -0.5}, {2.5, 0.0, 0.5, 1.0}};
  for (const auto& c : two) {
    const FptResult lhs = fpt_two_changes(c[0], c[1], c[2], c[2], c[3], o);
    const FptResult rhs = fpt_one_change(c[0], c[1], c[2], 1, 2, c[3], o);
    add(report, compare(fmt("two changes b''=b' a=%g b=%g b'=%g", c[0], c[1], c[2]), lhs, rhs, 2e-6), on_case);
  }

  // Continuity in the horizon next to an integer.
  add(report, compare("horizon 1.999 vs 2 a=3 b=0 x=0", fpt_linear_real(3.0, 0.0, 1.999, 0.0, o),
                      fpt_linear_integer(3.0, 0.0, 2, 0.0, o), 0.002),
      on_case);
  return report;
}

SuiteReport run_tables_suite(int which, double tol, const CaseCallback& on_case) {
  SuiteReport report{"tables", {}};
  const int first = which == 0 ? 1 : which;
  const int last = which == 0 ? 4 : which;
  if (first < 1 || last > 4) throw DomainError("tables suite: table must be 0 (all) or 1..4");
  for (int t = first; t <= last; ++t) {
    for (const PowerTableEntry& e : published_table(t)) {
      CaseReport c;
      c.reference = e.value;
      c.allowed = published_table_tolerance(t);
      try {
        switch (t) {
          case 1: c.computed = power_gamma(0.0, e.h, e.mu, tol); break;
          case 2: c.computed = power_gamma1(0.0, e.h, e.mu, tol); break;
          case 3: c.computed = power_gamma2(e.h, e.mu, tol); break;
          case 4: c.computed = power_gamma3(0.0, e.h, e.mu, tol); break;
        }
      } catch (const AccuracyError& err) {
        c.converged = false;
        c.note = err.what();
      }
      c.name = "table " + std::to_string(t) + fmt(" h=%.2f mu=%.2f", e.h, e.mu);
      add(report, std::move(c), on_case);
    }
  }
  return report;
}

std::vector<McCase> mc_suite_cases() {
  return {
      {"closed a=1 b=0 T=1 x=0", BarrierSpec::linear(1.0, 0.0, 1.0), 0.0, false, 101},
      {"closed a=2 b=0.5 T=0.5 x=0.5", BarrierSpec::linear(2.0, 0.5, 0.5), 0.5, false, 102},
      {"closed a=3 b=0 T=1 unconditional", BarrierSpec::linear(3.0, 0.0, 1.0), 0.0, true, 103},
      {"integer a=3 b=0 n=2 x=0", BarrierSpec::linear(3.0, 0.0, 2.0), 0.0, false, 104},
      {"integer a=2 b=0.5 n=2 x=-0.5", BarrierSpec::linear(2.0, 0.5, 2.0), -0.5, false, 105},
      {"integer a=2.5 b=-0.25 n=3 x=0", BarrierSpec::linear(2.5, -0.25, 3.0), 0.0, false, 106},
      {"real a=3 b=0 T=1.5 x=0", BarrierSpec::linear(3.0, 0.0, 1.5), 0.0, false, 107},
      {"real a=2 b=0.5 T=1.25 x=0", BarrierSpec::linear(2.0, 0.5, 1.25), 0.0, false, 108},
      {"one change a=3 b=-2 b'=2 x=0", BarrierSpec::one_change(3.0, -2.0, 2.0, 1.0, 1.0), 0.0, false, 109},
      {"one change a=3 b=0 b'=-2 x=0", BarrierSpec::one_change(3.0, 0.0, -2.0, 1.0, 1.0), 0.0, false, 110},
      {"two changes a=3 b=0 b'=-2 b''=2 x=0", BarrierSpec::two_changes(3.0, 0.0, -2.0, 2.0), 0.0, false, 111},
      {"two changes a=2.5 b=0.5 b'=-1 b''=1 x=-0.5", BarrierSpec::two_changes(2.5, 0.5, -1.0, 1.0), -0.5, false, 112},
  };
}

SuiteReport run_mc_suite(std::size_t paths, double grid_step, double tol, const CaseCallback& on_case) {
  SuiteReport report{"mc", {}};
  for (const McCase& mc : mc_suite_cases()) {
    FptRequest request{mc.barrier, mc.x, mc.unconditional, Method::Auto, tol, {}};
    const FptResult analytic = fpt(request);

    PathConfig cfg;
    cfg.paths = paths;
    cfg.grid_step = grid_step;
    cfg.seed = mc.seed;
    cfg.horizon = mc.barrier.horizon();
    cfg.start_mode = mc.unconditional ? StartMode::StandardNormal : StartMode::Conditioned;
    cfg.x = mc.x;
    const McEstimate est = simulate_survival(mc.barrier, cfg);

    CaseReport c;
    c.name = mc.name;
    c.computed = analytic.value;
    c.reference = est.probability;
    c.allowed = 3.0 * est.std_error + bias_bound(cfg);
    c.converged = analytic.converged;
    c.note = std::string("route ") + std::string(to_string(analytic.route)) + fmt(" se=%.2e", est.std_error);
    add(report, std::move(c), on_case);
  }
  return report;
}

std::size_t parse_budget(std::string_view text) {
  double value = 0.0;
  const std::size_t caret = text.find('^');
  if (caret != std::string_view::npos) {
    double base = 0.0;
    double exponent = 0.0;
    const auto b = std::from_chars(text.data(), text.data() + caret, base);
    const auto e = std::from_chars(text.data() + caret + 1, text.data() + text.size(), exponent);
    if (b.ec != std::errc() || e.ec != std::errc() || e.ptr != text.data() + text.size() ||
        b.ptr != text.data() + caret) {
      throw DomainError("budget: cannot parse '" + std::string(text) + "'");
    }
    value = std::pow(base, exponent);
  } else {
    const auto r = std::from_chars(text.data(), text.data() + text.size(), value);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
      throw DomainError("budget: cannot parse '" + std::string(text) + "'");
    }
  }
  if (!(value >= 1.0) || value > 1e12) throw DomainError("budget: must lie in [1, 1e12]");
  return static_cast<std::size_t>(std::llround(value));
}

}  // namespace slepian
