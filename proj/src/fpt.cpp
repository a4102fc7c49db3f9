#include "slepian/fpt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "slepian/errors.hpp"
#include "slepian/gaussian.hpp"
#include "slepian/km.hpp"

namespace slepian {

namespace {

constexpr int kMaxUnitSegments = 6;
constexpr int kMaxRealHorizonM = 2;

// Conditioning on S(0): a fixed value, or a density mixed in as an extra axis.
struct Start {
  double x = 0.0;
  const MixingWeight* weight = nullptr;

  bool mixed() const { return weight != nullptr; }
};

void check_tol(double tol) {
  if (!(tol >= 1e-12 && tol < 1.0)) throw DomainError("tol must lie in [1e-12, 1)");
}

FptResult zero_result() {
  FptResult r;
  r.route = Route::Trivial;
  return r;
}

// Accept tiny excursions outside [0, 1]; anything larger is an integration failure.
FptResult finish(double value, double error, std::size_t evaluations, bool converged, Route route, int dims,
                 double tol) {
  const double slack = 10.0 * tol;
  if (!std::isfinite(value) || value < -slack || value > 1.0 + slack) {
    throw AccuracyError("probability " + std::to_string(value) + " outside [0,1] beyond 10*tol (error estimate " +
                        std::to_string(error) + ")");
  }
  FptResult r;
  r.value = std::clamp(value, 0.0, 1.0);
  r.error_estimate = error;
  r.evaluations = evaluations;
  r.converged = converged;
  r.route = route;
  r.dims = dims;
  return r;
}

// Log of the start-value factor: -log phi(x) for a fixed start, or the
// density ratio when mixing (the phi(x) in the density cancels).
double log_start_factor(const Start& start, double x) {
  if (!start.mixed()) return -log_transition_density(1.0, x);
  const double w = start.weight->density_over_pdf(x);
  return w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity();
}

// Axis 0 over the mixing range when mixing; returns false for an empty range.
bool add_mixing_axis(const Start& start, double a, Region& region) {
  if (!start.mixed()) return true;
  const double lo = start.weight->lower;
  const double hi = std::min(start.weight->upper, a);
  if (!(lo < hi)) return false;
  region.axes.push_back({LowerLimit::fixed(lo), hi, 0.0, 1.0});
  return true;
}

FptResult run(const Integrand& f, const Region& region, const FptOptions& options, Route route) {
  if (region.dims() == 0) {
    const double value = f(std::span<const double>());
    return finish(value, 0.0, 1, true, route, 0, options.tol);
  }
  QuadOptions q;
  q.max_evaluations = options.max_evaluations;
  const QuadResult r = integrate(f, region, options.tol, q);
  return finish(r.value, r.error_estimate, r.evaluations, r.converged, route, region.dims(), options.tol);
}

using UnitBuilder = std::function<KmBlock<double>(double x, std::span<const double> vars)>;

// Barriers made of unit-length pieces, integrated over S(1), ..., S(n) with
// S(k) < B(k); the Brownian values follow from x_{k+1} = x_k - S(k).
FptResult unit_segments(const UnitBuilder& build, const std::vector<double>& knots, double a, const Start& start,
                        const FptOptions& options, Route route) {
  check_tol(options.tol);
  if (!start.mixed() && start.x >= a) return zero_result();
  const int n = static_cast<int>(knots.size());
  const int free = options.reduced ? n - 1 : n;

  Region region;
  if (!add_mixing_axis(start, a, region)) return zero_result();
  const int offset = region.dims();
  for (int k = 0; k < free; ++k) region.axes.push_back({LowerLimit::unbounded(), knots[k], 0.0, 1.0});

  const bool reduced = options.reduced;
  auto f = [&, n, free, offset, reduced](std::span<const double> p) -> double {
    const double x = start.mixed() ? p[0] : start.x;
    std::array<double, kMaxKmDim> vars{};
    double prev = -x;
    for (int k = 0; k < free; ++k) {
      vars[k] = prev - p[offset + k];
      prev = vars[k];
    }
    SignedLog<double> v;
    if (reduced) {
      vars[n - 1] = 0.0;
      v = km_log_tail_integrand(build(x, std::span<const double>(vars.data(), n)), prev - knots[n - 1]);
    } else {
      v = km_log_integrand(build(x, std::span<const double>(vars.data(), n)));
    }
    return v.scaled(log_start_factor(start, x)).value();
  };
  return run(f, region, options, route);
}

FptResult linear_integer(double a, double b, int n, const Start& start, const FptOptions& options) {
  if (n < 1) throw DomainError("linear barrier: n must be >= 1");
  if (n > kMaxUnitSegments) {
    throw CapabilityError("linear barrier: horizon " + std::to_string(n) +
                          " exceeds the determinant route (n <= 6); use --method mc");
  }
  std::vector<double> knots(n);
  for (int k = 1; k <= n; ++k) knots[k - 1] = a + b * k;
  auto build = [=](double x, std::span<const double> vars) { return build_linear_integer_block(a, b, n, x, vars); };
  return unit_segments(build, knots, a, start, options, Route::LinearInteger);
}

FptResult one_change(double a, double b, double bp, int t1, int t2, const Start& start, const FptOptions& options) {
  if (t1 < 1 || t2 < 1) throw DomainError("one-change barrier: T and T' must be >= 1");
  if (t1 + t2 > kMaxUnitSegments) {
    throw CapabilityError("one-change barrier: T + T' exceeds the determinant route (<= 6); use --method mc");
  }
  std::vector<double> knots(t1 + t2);
  for (int k = 1; k <= t1 + t2; ++k) knots[k - 1] = k <= t1 ? a + b * k : a + b * t1 + bp * (k - t1);
  auto build = [=](double x, std::span<const double> vars) {
    return build_one_change_block(a, b, bp, t1, t2, x, vars);
  };
  return unit_segments(build, knots, a, start, options, Route::OneChange);
}

FptResult two_changes(double a, double b, double bp, double bpp, const Start& start, const FptOptions& options) {
  const std::vector<double> knots{a + b, a + b + bp, a + b + bp + bpp};
  auto build = [=](double x, std::span<const double> vars) { return build_two_change_block(a, b, bp, bpp, x, vars); };
  return unit_segments(build, knots, a, start, options, Route::TwoChanges);
}

// Horizon m + theta. Axes: S(k) < B(k) at integer times, then the values
// v_i = W(i + theta), each standardised around its Brownian-bridge mean given
// the integer-time values. The constraints v_i - v_{i+1} < B(i + theta) become
// lower limits that are affine in the earlier axes.
class RealHorizonMap {
 public:
  RealHorizonMap(double a, double b, int m, double theta, bool mixed, double x, int r_count)
      : a_(a), b_(b), m_(m), theta_(theta), mixed_(mixed), x_(x), r_count_(r_count),
        sigma_(std::sqrt(theta * (1.0 - theta))) {}

  int offset() const { return mixed_ ? 1 : 0; }
  int dims() const { return offset() + m_ + 1 + r_count_; }
  int v_axis(int i) const { return offset() + m_ + i; }

  double x(std::span<const double> p) const { return mixed_ ? p[0] : x_; }

  // Values W(k), k = 2..m+1, into u; W(i + theta), i = 0..r_count, into v.
  // Returns the log Jacobian of the standardisation.
  double fill(std::span<const double> p, int v_count, double* u, double* v) const {
    const double xv = x(p);
    double prev = -xv;
    for (int k = 0; k < m_; ++k) {
      u[k] = prev - p[offset() + k];
      prev = u[k];
    }
    double log_jac = 0.0;
    for (int i = 0; i < v_count; ++i) {
      const double sd = scale(i);
      v[i] = mean(i, xv, u) + sd * p[v_axis(i)];
      log_jac += std::log(sd);
    }
    return log_jac;
  }

  // Lower limit of standardised v_{i+1} from v_i - v_{i+1} < B(i + theta).
  double v_lower(std::span<const double> p, int i) const {
    std::array<double, kMaxKmDim> u{};
    std::array<double, kMaxKmDim> v{};
    fill(p, i + 1, u.data(), v.data());
    return (v[i] - barrier(i + theta_) - mean(i + 1, x(p), u.data())) / scale(i + 1);
  }

  double barrier(double t) const { return a_ + b_ * t; }

 private:
  // W(i + theta) given W(i), W(i + 1); beyond W(m + 1) it is a free increment.
  double mean(int i, double xv, const double* u) const {
    const double left = w_int(i, xv, u);
    if (i + 1 > m_ + 1) return left;
    return (1.0 - theta_) * left + theta_ * w_int(i + 1, xv, u);
  }
  double scale(int i) const { return i + 1 > m_ + 1 ? std::sqrt(theta_) : sigma_; }
  double w_int(int k, double xv, const double* u) const { return k == 0 ? 0.0 : (k == 1 ? -xv : u[k - 2]); }

  double a_, b_;
  int m_;
  double theta_;
  bool mixed_;
  double x_;
  int r_count_;
  double sigma_;
};

// Coefficients of an affine function of the first k axes, by probing unit vectors.
LowerLimit affine_lower(const std::function<double(std::span<const double>)>& g, int k, int dims) {
  std::vector<double> p(dims, 0.0);
  const double constant = g(p);
  std::vector<double> chain(k, 0.0);
  for (int j = 0; j < k; ++j) {
    p[j] = 1.0;
    chain[j] = g(p) - constant;
    p[j] = 0.0;
  }
  return LowerLimit::chain_shift(std::move(chain), constant);
}

FptResult linear_real(double a, double b, double T, const Start& start, const FptOptions& options) {
  check_tol(options.tol);
  if (!(T > 0.0)) throw DomainError("linear barrier: horizon must be positive");
  const int m = static_cast<int>(std::floor(T));
  const double theta = T - m;
  if (theta <= kIntegralityTolerance || theta >= 1.0 - kIntegralityTolerance) {
    throw DomainError("non-integer horizon route: T is an integer; use the integer-horizon route");
  }
  if (m > kMaxRealHorizonM) {
    throw CapabilityError("non-integer horizon route: floor(T) = " + std::to_string(m) +
                          " exceeds 2; use --method mc");
  }
  if (!start.mixed() && start.x >= a) return zero_result();
  const bool reduced = options.reduced;
  const int r_count = reduced ? m : m + 1;
  const RealHorizonMap map(a, b, m, theta, start.mixed(), start.x, r_count);

  Region region;
  if (!add_mixing_axis(start, a, region)) return zero_result();
  for (int k = 1; k <= m; ++k) region.axes.push_back({LowerLimit::unbounded(), map.barrier(k), 0.0, 1.0});
  if (map.dims() > kMaxQuadratureDims) {
    throw CapabilityError("non-integer horizon route: more than 6 integration dimensions; use --method mc");
  }
  const double half_width = truncation_bounds(1.0, options.tol, map.dims());
  region.axes.push_back({LowerLimit::fixed(-half_width), half_width, 0.0, 1.0});
  for (int i = 0; i < r_count; ++i) {
    auto g = [&map, i](std::span<const double> p) { return map.v_lower(p, i); };
    region.axes.push_back({affine_lower(g, map.v_axis(i + 1), map.dims()),
                           std::numeric_limits<double>::infinity(), 0.0, 1.0});
  }

  auto f = [&, m, theta, reduced, r_count](std::span<const double> p) -> double {
    const double x = map.x(p);
    std::array<double, kMaxKmDim> u{};
    std::array<double, kMaxKmDim> v{};
    const double log_jac = map.fill(p, r_count + 1, u.data(), v.data());
    if (reduced) v[m + 1] = 0.0;
    const LinearRealBlocks<double> blocks = build_linear_real_blocks(
        a, b, m, theta, x, std::span<const double>(u.data(), m), std::span<const double>(v.data(), m + 2));
    const SignedLog<double> first = reduced ? km_log_tail_integrand(blocks.first, v[m] - map.barrier(m + theta))
                                            : km_log_integrand(blocks.first);
    return (first * km_log_integrand(blocks.second)).scaled(log_jac + log_start_factor(start, x)).value();
  };
  return run(f, region, options, Route::LinearReal);
}

FptResult closed_mixed(double a, double b, double T, const MixingWeight& weight, const FptOptions& options) {
  check_tol(options.tol);
  Region region;
  const Start start{0.0, &weight};
  if (!add_mixing_axis(start, a, region)) return zero_result();
  auto f = [&](std::span<const double> p) -> double {
    const double x = p[0];
    const double w = weight.density_over_pdf(x);
    return w > 0.0 ? fpt_closed_T_le_1(a, b, T, x) * w * normal_pdf(x) : 0.0;
  };
  return run(f, region, options, Route::ClosedForm);
}

// Determinant route for any supported barrier; the T <= 1 closed form is used
// only when allow_closed is set.
FptResult analytic(const BarrierSpec& barrier, const Start& start, const FptOptions& options, bool allow_closed) {
  const auto& segs = barrier.segments();
  const double a = barrier.intercept();
  switch (classify(barrier)) {
    case BarrierClass::ClosedFormShort: {
      const double b = segs[0].slope;
      const double T = segs[0].duration;
      if (allow_closed) {
        if (start.mixed()) return closed_mixed(a, b, T, *start.weight, options);
        return finish(fpt_closed_T_le_1(a, b, T, start.x), 0.0, 1, true, Route::ClosedForm, 0, options.tol);
      }
      if (is_integral(T)) return linear_integer(a, b, 1, start, options);
      return linear_real(a, b, T, start, options);
    }
    case BarrierClass::LinearIntegerHorizon:
      return linear_integer(a, segs[0].slope, rounded(segs[0].duration), start, options);
    case BarrierClass::LinearRealHorizon:
      return linear_real(a, segs[0].slope, segs[0].duration, start, options);
    case BarrierClass::OneChangeIntegerSegments:
      return one_change(a, segs[0].slope, segs[1].slope, rounded(segs[0].duration), rounded(segs[1].duration), start,
                        options);
    case BarrierClass::TwoChangeUnitSegments:
      return two_changes(a, segs[0].slope, segs[1].slope, segs[2].slope, start, options);
    case BarrierClass::Unsupported: break;
  }
  throw CapabilityError("barrier has no determinant formula (supported: one linear segment, two integer-length "
                        "segments, three unit segments); use --method mc");
}

MixingWeight standard_normal_weight(double tol) {
  const double l = truncation_bounds(1.0, tol);
  return {-l, l, [](double) { return 1.0; }};
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::ClosedForm: return "closed";
    case Method::Determinant: return "det";
    case Method::MonteCarlo: return "mc";
  }
  return "auto";
}

std::string_view to_string(Route r) {
  switch (r) {
    case Route::ClosedForm: return "closed_form";
    case Route::LinearInteger: return "determinant_linear_integer";
    case Route::LinearReal: return "determinant_linear_real";
    case Route::OneChange: return "determinant_one_change";
    case Route::TwoChanges: return "determinant_two_changes";
    case Route::MonteCarlo: return "monte_carlo";
    case Route::Trivial: return "trivial_zero";
  }
  return "trivial_zero";
}

Method parse_method(std::string_view text) {
  if (text == "auto") return Method::Auto;
  if (text == "closed") return Method::ClosedForm;
  if (text == "det") return Method::Determinant;
  if (text == "mc") return Method::MonteCarlo;
  throw DomainError("unknown method '" + std::string(text) + "' (auto|closed|det|mc)");
}

double fpt_closed_T_le_1(double a, double b, double T, double x) {
  if (!(T > 0.0 && T <= 1.0 + kIntegralityTolerance)) throw DomainError("closed form: T must lie in (0, 1]");
  if (!std::isfinite(a) || !std::isfinite(b) || std::isnan(x)) throw DomainError("closed form: non-finite input");
  if (x >= a) return 0.0;
  const double z = std::min(T, 1.0) / (2.0 - std::min(T, 1.0));
  const double root_z = std::sqrt(z);
  const double b1 = (a + x) / 2.0 + b;
  const double a1 = (a - x) / 2.0;
  const double first = normal_cdf((b1 * z + a1) / root_z);
  const double second = std::exp(-2.0 * a1 * b1 + log_normal_cdf((b1 * z - a1) / root_z));
  return std::clamp(first - second, 0.0, 1.0);
}

FptResult fpt_linear_integer(double a, double b, int n, double x, const FptOptions& options) {
  return linear_integer(a, b, n, Start{x, nullptr}, options);
}

FptResult fpt_linear_real(double a, double b, double T, double x, const FptOptions& options) {
  return linear_real(a, b, T, Start{x, nullptr}, options);
}

FptResult fpt_one_change(double a, double b, double b_prime, int t1, int t2, double x, const FptOptions& options) {
  return one_change(a, b, b_prime, t1, t2, Start{x, nullptr}, options);
}

FptResult fpt_two_changes(double a, double b, double b_prime, double b_double_prime, double x,
                          const FptOptions& options) {
  return two_changes(a, b, b_prime, b_double_prime, Start{x, nullptr}, options);
}

FptResult fpt_mixed(const BarrierSpec& barrier, const MixingWeight& weight, const FptOptions& options) {
  check_tol(options.tol);
  if (!(weight.lower < weight.upper) || !weight.density_over_pdf) throw DomainError("mixing weight: invalid range");
  return analytic(barrier, Start{0.0, &weight}, options, true);
}

FptResult fpt_unconditional(const BarrierSpec& barrier, const FptOptions& options) {
  check_tol(options.tol);
  const MixingWeight w = standard_normal_weight(options.tol);
  return analytic(barrier, Start{0.0, &w}, options, true);
}

FptResult fpt_unconditional(double a, double b, double T, const FptOptions& options) {
  return fpt_unconditional(BarrierSpec::linear(a, b, T), options);
}

FptResult fpt_determinant(const BarrierSpec& barrier, double x, const FptOptions& options) {
  return analytic(barrier, Start{x, nullptr}, options, false);
}

FptResult fpt(const FptRequest& request) {
  check_tol(request.tol);
  FptOptions options;
  options.tol = request.tol;
  const MixingWeight normal_weight = standard_normal_weight(request.tol);
  const Start start{request.start_value, request.unconditional ? &normal_weight : nullptr};
  if (!request.unconditional && !std::isfinite(request.start_value)) throw DomainError("x must be finite");

  auto monte_carlo = [&]() {
    PathConfig cfg;
    cfg.paths = request.mc.paths;
    cfg.grid_step = request.mc.grid_step;
    cfg.seed = request.mc.seed;
    cfg.threads = request.mc.threads;
    cfg.horizon = request.barrier.horizon();
    cfg.start_mode = request.unconditional ? StartMode::StandardNormal : StartMode::Conditioned;
    cfg.x = request.start_value;
    const McEstimate est = simulate_survival(request.barrier, cfg);
    FptResult r;
    r.value = est.probability;
    r.error_estimate = est.std_error;
    r.evaluations = est.paths;
    r.route = Route::MonteCarlo;
    return r;
  };

  switch (request.method) {
    case Method::MonteCarlo: return monte_carlo();
    case Method::ClosedForm:
      if (classify(request.barrier) != BarrierClass::ClosedFormShort) {
        throw CapabilityError("closed form needs a single linear segment with horizon <= 1");
      }
      return analytic(request.barrier, start, options, true);
    case Method::Determinant: return analytic(request.barrier, start, options, false);
    case Method::Auto:
      try {
        return analytic(request.barrier, start, options, true);
      } catch (const CapabilityError&) {
        return monte_carlo();
      }
  }
  throw DomainError("unknown method");
}

}  // namespace slepian
