#include "slepian/barrier.hpp"

#include <charconv>
#include <cmath>
#include <json.hpp>

#include "slepian/errors.hpp"

namespace slepian {

namespace {

constexpr double kMinDuration = 1e-9;

std::vector<double> split_numbers(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    std::string_view token = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || end != token.data() + token.size() || token.empty()) {
      throw DomainError("barrier shorthand: cannot parse '" + std::string(token) + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

BarrierSpec::BarrierSpec(double intercept, std::vector<Segment> segments)
    : intercept_(intercept), segments_(std::move(segments)) {
  if (!std::isfinite(intercept_)) throw DomainError("barrier: intercept must be finite");
  if (segments_.empty()) throw DomainError("barrier: at least one segment required");
  knot_times_.reserve(segments_.size() + 1);
  knot_values_.reserve(segments_.size() + 1);
  knot_times_.push_back(0.0);
  knot_values_.push_back(intercept_);
  for (const Segment& s : segments_) {
    if (!std::isfinite(s.slope) || !std::isfinite(s.duration)) {
      throw DomainError("barrier: segment values must be finite");
    }
    if (s.duration < kMinDuration) throw DomainError("barrier: segment duration below 1e-9");
    knot_times_.push_back(knot_times_.back() + s.duration);
    knot_values_.push_back(knot_values_.back() + s.slope * s.duration);
  }
}

BarrierSpec BarrierSpec::linear(double a, double b, double horizon) {
  return BarrierSpec(a, {{b, horizon}});
}

BarrierSpec BarrierSpec::one_change(double a, double b, double b_prime, double t1, double t2) {
  return BarrierSpec(a, {{b, t1}, {b_prime, t2}});
}

BarrierSpec BarrierSpec::two_changes(double a, double b, double b_prime, double b_double_prime) {
  return BarrierSpec(a, {{b, 1.0}, {b_prime, 1.0}, {b_double_prime, 1.0}});
}

double BarrierSpec::evaluate(double t) const {
  const double end = horizon();
  const double slack = 1e-12 * std::max(1.0, end);
  if (!(t >= -slack && t <= end + slack)) throw DomainError("barrier: t outside [0, horizon]");
  if (t <= 0.0) return intercept_;
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    if (t == knot_times_[k + 1]) return knot_values_[k + 1];
    if (t < knot_times_[k + 1]) return knot_values_[k] + segments_[k].slope * (t - knot_times_[k]);
  }
  return knot_values_.back() + segments_.back().slope * (t - end);
}

BarrierSpec BarrierSpec::merged() const {
  std::vector<Segment> out;
  for (const Segment& s : segments_) {
    if (!out.empty() && out.back().slope == s.slope) {
      out.back().duration += s.duration;
    } else {
      out.push_back(s);
    }
  }
  return BarrierSpec(intercept_, std::move(out));
}

bool is_integral(double value) { return std::abs(value - std::round(value)) <= kIntegralityTolerance; }

int rounded(double value) { return static_cast<int>(std::lround(value)); }

BarrierClass classify(const BarrierSpec& spec) {
  const auto& segs = spec.segments();
  if (segs.size() == 1) {
    const double horizon = segs.front().duration;
    if (horizon <= 1.0 + kIntegralityTolerance) return BarrierClass::ClosedFormShort;
    return is_integral(horizon) ? BarrierClass::LinearIntegerHorizon : BarrierClass::LinearRealHorizon;
  }
  if (segs.size() == 2 && is_integral(segs[0].duration) && is_integral(segs[1].duration)) {
    return BarrierClass::OneChangeIntegerSegments;
  }
  if (segs.size() == 3) {
    bool unit = true;
    for (const Segment& s : segs) unit = unit && std::abs(s.duration - 1.0) <= kIntegralityTolerance;
    if (unit) return BarrierClass::TwoChangeUnitSegments;
  }
  return BarrierClass::Unsupported;
}

std::string_view to_string(BarrierClass c) {
  switch (c) {
    case BarrierClass::ClosedFormShort: return "closed_form_short";
    case BarrierClass::LinearIntegerHorizon: return "linear_integer";
    case BarrierClass::LinearRealHorizon: return "linear_real";
    case BarrierClass::OneChangeIntegerSegments: return "one_change";
    case BarrierClass::TwoChangeUnitSegments: return "two_changes";
    case BarrierClass::Unsupported: return "unsupported";
  }
  return "unsupported";
}

std::string to_json(const BarrierSpec& spec) {
  nlohmann::json j;
  j["intercept"] = spec.intercept();
  j["segments"] = nlohmann::json::array();
  for (const Segment& s : spec.segments()) j["segments"].push_back({s.slope, s.duration});
  return j.dump();
}

BarrierSpec barrier_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("barrier JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("intercept") || !j.contains("segments") || !j["segments"].is_array()) {
    throw DomainError("barrier JSON: expected {\"intercept\": a, \"segments\": [[slope, duration], ...]}");
  }
  std::vector<Segment> segments;
  for (const auto& item : j["segments"]) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
      throw DomainError("barrier JSON: each segment must be [slope, duration]");
    }
    segments.push_back({item[0].get<double>(), item[1].get<double>()});
  }
  if (!j["intercept"].is_number()) throw DomainError("barrier JSON: intercept must be a number");
  return BarrierSpec(j["intercept"].get<double>(), std::move(segments));
}

BarrierSpec parse_barrier(std::string_view text) {
  std::size_t first = text.find_first_not_of(' ');
  if (first != std::string_view::npos && text[first] == '{') return barrier_from_json(text);
  const std::vector<double> v = split_numbers(text);
  switch (v.size()) {
    case 3: return BarrierSpec::linear(v[0], v[1], v[2]);
    case 4: return BarrierSpec::two_changes(v[0], v[1], v[2], v[3]);
    case 5: return BarrierSpec::one_change(v[0], v[1], v[2], v[3], v[4]);
    // Slopes b, b', b'' for durations T, T', 1.
    case 6: return BarrierSpec(v[0], {{v[1], v[4]}, {v[2], v[5]}, {v[3], 1.0}});
    default:
      throw DomainError("barrier shorthand: expected a,b,T | a,b,b',T,T' | a,b,b',b'' | a,b,b',b'',T,T'");
  }
}

}  // namespace slepian
