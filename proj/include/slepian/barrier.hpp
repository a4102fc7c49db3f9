#ifndef SLEPIAN_BARRIER_HPP
#define SLEPIAN_BARRIER_HPP

#include <string>
#include <string_view>
#include <vector>

namespace slepian {

struct Segment {
  double slope;
  double duration;
};

/// Continuous piecewise-linear barrier on [0, horizon], starting at `intercept`
/// and following each (slope, duration) segment in turn. Immutable.
class BarrierSpec {
 public:
  BarrierSpec(double intercept, std::vector<Segment> segments);

  /// Single linear segment a + b t on [0, T].
  static BarrierSpec linear(double a, double b, double horizon);
  /// Slope b on [0, T], then b' on [T, T + T'].
  static BarrierSpec one_change(double a, double b, double b_prime, double t1, double t2);
  /// Slopes b, b', b'' on three consecutive unit intervals.
  static BarrierSpec two_changes(double a, double b, double b_prime, double b_double_prime);

  double intercept() const { return intercept_; }
  const std::vector<Segment>& segments() const { return segments_; }
  double horizon() const { return knot_times_.back(); }

  /// Barrier height at t in [0, horizon].
  double evaluate(double t) const;

  /// Copy with consecutive equal-slope segments merged.
  BarrierSpec merged() const;

 private:
  double intercept_;
  std::vector<Segment> segments_;
  std::vector<double> knot_times_;   // 0, t1, t1 + t2, ...
  std::vector<double> knot_values_;  // barrier height at each knot
};

enum class BarrierClass {
  ClosedFormShort,           // one segment, horizon <= 1
  LinearIntegerHorizon,      // one segment, integer horizon
  LinearRealHorizon,         // one segment, non-integer horizon
  OneChangeIntegerSegments,  // two segments, integer durations
  TwoChangeUnitSegments,     // three unit segments
  Unsupported,
};

/// Tolerance for treating a stored duration as an integer.
inline constexpr double kIntegralityTolerance = 1e-9;

bool is_integral(double value);
int rounded(double value);

/// Most specific analytic route for the barrier.
BarrierClass classify(const BarrierSpec& spec);
std::string_view to_string(BarrierClass c);

/// {"intercept": a, "segments": [[slope, duration], ...]}
std::string to_json(const BarrierSpec& spec);
BarrierSpec barrier_from_json(std::string_view text);

/// Parses either a JSON object or one of the comma-separated shorthands
/// "a,b,T", "a,b,b',T,T'", "a,b,b',b''" and "a,b,b',b'',T,T'" (last segment of length 1).
BarrierSpec parse_barrier(std::string_view text);

}  // namespace slepian

#endif  // SLEPIAN_BARRIER_HPP
