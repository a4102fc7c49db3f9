#ifndef SLEPIAN_QUADRATURE_HPP
#define SLEPIAN_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace slepian {

inline constexpr int kMaxQuadratureDims = 6;
inline constexpr double kDefaultProbabilityTol = 1e-7;

/// Lower limit constant + sum_j chain[j] * x_j over earlier axes j < k.
/// constant = -inf makes the axis unbounded below (chain must then be empty).
struct LowerLimit {
  double constant = -std::numeric_limits<double>::infinity();
  std::vector<double> chain;

  static LowerLimit unbounded() { return {}; }
  static LowerLimit fixed(double value) { return {value, {}}; }
  static LowerLimit chain_shift(std::vector<double> coefficients, double constant) {
    return {constant, std::move(coefficients)};
  }
};

struct Axis {
  LowerLimit lower;
  double upper = std::numeric_limits<double>::infinity();
  // Location and width hints for mapping unbounded ends onto a finite interval.
  double center = 0.0;
  double scale = 1.0;
};

struct Region {
  std::vector<Axis> axes;

  int dims() const { return static_cast<int>(axes.size()); }
  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;  // false: tolerance not met within the budget
};

struct QuadOptions {
  double rel_tol = 0.0;
  std::size_t max_evaluations = 400'000'000;
  int max_intervals = 300;  // per one-dimensional sweep
};

using Integrand = std::function<double(std::span<const double>)>;

/// Nested adaptive Gauss-Kronrod (7-15) over `region`; axis 0 is outermost.
/// Finite limits are integrated directly; unbounded ends are mapped to a
/// finite interval with t / (1 - t) (one end) or t / (1 - t^2) (both ends).
/// Converged when error_estimate <= max(tol, rel_tol * |value|).
QuadResult integrate(const Integrand& f, const Region& region, double tol, const QuadOptions& options = {});

/// Half-width L * scale with Gaussian two-sided tail mass beyond L below tol / dims,
/// plus a fixed safety margin of 3 standard widths.
double truncation_bounds(double axis_scale, double tol, int dims = 1);

}  // namespace slepian

#endif  // SLEPIAN_QUADRATURE_HPP
