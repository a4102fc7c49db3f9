#ifndef SLEPIAN_VALIDATION_HPP
#define SLEPIAN_VALIDATION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "slepian/barrier.hpp"
#include "slepian/fpt.hpp"

namespace slepian {

struct CaseReport {
  std::string name;
  double computed = 0.0;
  double reference = 0.0;
  double allowed = 0.0;  // permitted |computed - reference|
  bool converged = true; // false: an evaluation ran out of budget
  std::string note;

  double deviation() const { return std::abs(computed - reference); }
  double margin() const { return allowed - deviation(); }
  bool passed() const { return converged && deviation() <= allowed; }
};

struct SuiteReport {
  std::string suite;
  std::vector<CaseReport> cases;

  bool all_passed() const;
  bool budget_exhausted() const;
  double max_deviation() const;
};

using CaseCallback = std::function<void(const CaseReport&)>;

/// Agreement between routes at their seams: integer horizon 1 vs the closed
/// form, horizon 0.5 vs the closed form, one change with equal slopes vs a
/// single slope, two changes with equal last slopes vs one change, and
/// horizon 1.999 vs horizon 2.
SuiteReport run_seams_suite(double tol = kDefaultProbabilityTol, const CaseCallback& on_case = {});

/// Published power tables; `which` = 0 runs all four.
SuiteReport run_tables_suite(int which = 0, double tol = kDefaultProbabilityTol, const CaseCallback& on_case = {});

struct McCase {
  std::string name;
  BarrierSpec barrier;
  double x;
  bool unconditional;
  std::uint64_t seed;
};

/// Configurations covering every analytic route.
std::vector<McCase> mc_suite_cases();

/// Analytic value vs Monte Carlo within 3 standard errors plus bias_bound.
SuiteReport run_mc_suite(std::size_t paths = 1'000'000, double grid_step = 1.0 / 2048.0,
                         double tol = kDefaultProbabilityTol, const CaseCallback& on_case = {});

/// "10^6", "1e6" or "1000000".
std::size_t parse_budget(std::string_view text);

}  // namespace slepian

#endif  // SLEPIAN_VALIDATION_HPP
