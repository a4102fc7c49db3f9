#ifndef SLEPIAN_FPT_HPP
#define SLEPIAN_FPT_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>

#include "slepian/barrier.hpp"
#include "slepian/mc_oracle.hpp"
#include "slepian/quadrature.hpp"

namespace slepian {

// All probabilities are P(S(t) < B(t) for all t in [0, T] | S(0) = x) for the
// Slepian process S(t) = W(t) - W(t + 1), unless stated otherwise.

enum class Method { Auto, ClosedForm, Determinant, MonteCarlo };

enum class Route { ClosedForm, LinearInteger, LinearReal, OneChange, TwoChanges, MonteCarlo, Trivial };

std::string_view to_string(Method m);
std::string_view to_string(Route r);
Method parse_method(std::string_view text);

struct FptOptions {
  double tol = kDefaultProbabilityTol;
  // Integrate the innermost variable analytically (one dimension fewer).
  bool reduced = true;
  std::size_t max_evaluations = 400'000'000;
};

struct FptResult {
  double value = 0.0;
  double error_estimate = 0.0;  // quadrature estimate, or the MC standard error
  std::size_t evaluations = 0;
  bool converged = true;
  Route route = Route::Trivial;
  int dims = 0;
};

/// Optional start-value mixing: integrates the conditional probability
/// against density(x) over [lower, upper]. `density_over_pdf` returns
/// density(x) / normal_pdf(x), so the standard normal case is the constant 1.
struct MixingWeight {
  double lower;
  double upper;
  std::function<double(double)> density_over_pdf;
};

struct McSettings {
  std::size_t paths = 1'000'000;
  double grid_step = 1.0 / 2048.0;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct FptRequest {
  BarrierSpec barrier;
  double start_value = 0.0;
  bool unconditional = false;  // S(0) ~ N(0, 1) instead of S(0) = start_value
  Method method = Method::Auto;
  double tol = kDefaultProbabilityTol;
  McSettings mc;
};

/// Closed form for a linear barrier a + b t on a horizon T in (0, 1].
double fpt_closed_T_le_1(double a, double b, double T, double x);

/// Linear barrier on an integer horizon n <= 6.
FptResult fpt_linear_integer(double a, double b, int n, double x, const FptOptions& options = {});

/// Linear barrier on a non-integer horizon T = m + theta with m <= 2.
FptResult fpt_linear_real(double a, double b, double T, double x, const FptOptions& options = {});

/// Slope b on [0, T], slope b' on [T, T + T'], integer T, T' with T + T' <= 6.
FptResult fpt_one_change(double a, double b, double b_prime, int t1, int t2, double x,
                         const FptOptions& options = {});

/// Slopes b, b', b'' on three consecutive unit intervals.
FptResult fpt_two_changes(double a, double b, double b_prime, double b_double_prime, double x,
                          const FptOptions& options = {});

/// Probability with S(0) drawn from the standard normal law.
FptResult fpt_unconditional(const BarrierSpec& barrier, const FptOptions& options = {});
FptResult fpt_unconditional(double a, double b, double T, const FptOptions& options = {});

/// Probability with S(0) drawn from a general density, fused into one quadrature.
FptResult fpt_mixed(const BarrierSpec& barrier, const MixingWeight& weight, const FptOptions& options = {});

/// Conditional probability for any supported barrier via the determinant formulas.
FptResult fpt_determinant(const BarrierSpec& barrier, double x, const FptOptions& options = {});

/// Routed entry point. Auto tries the closed form, then the determinant
/// formulas (at most 6 integration dimensions), then Monte Carlo.
FptResult fpt(const FptRequest& request);

}  // namespace slepian

#endif  // SLEPIAN_FPT_HPP
