#ifndef SLEPIAN_CHANGEPOINT_HPP
#define SLEPIAN_CHANGEPOINT_HPP

// Moving-sum change-point detection: run length under no change and power
// against a unit-length epidemic drift mu, for the stopping rule that
// alarms when the standardised moving sum S first exceeds h.

#include <optional>
#include <string>
#include <vector>

#include "slepian/quadrature.hpp"

namespace slepian {

struct DetectionConfig {
  double threshold;  // h
  double drift;      // mu
  double target_arl; // C
};

/// Run lengths are only validated for h >= 3.
inline constexpr double kArlValidatedThreshold = 3.0;

/// F(2) / F(1), both with S(0) ~ N(0, 1) and a flat barrier at h.
double lambda_h(double h, double tol = kDefaultProbabilityTol);

/// Average run length -F(2) / (lambda^2 ln lambda).
double arl(double h, double tol = kDefaultProbabilityTol);
bool arl_in_validated_range(double h);

/// Threshold h in [2.5, 6] with arl(h) = C, to a relative 1e-5.
double threshold_for_arl(double C, double tol = kDefaultProbabilityTol);

/// 1 - F(3 | x) / F(1 | x), barrier flat at h on [0, 1], down by mu on [1, 2], up by mu on [2, 3].
double power_gamma(double x, double h, double mu, double tol = kDefaultProbabilityTol);

/// 1 - F(2 | x) for the barrier down by mu on [0, 1] and back up on [1, 2].
double power_gamma1(double x, double h, double mu, double tol = kDefaultProbabilityTol);

/// Start density of S conditioned on no alarm; normalised on (-inf, h].
double stationary_density_p(double x, double h);

/// power_gamma1 averaged over stationary_density_p.
double power_gamma2(double h, double mu, double tol = kDefaultProbabilityTol);

/// 1 - F(2 | x) / F(1 | x), barrier flat at h on [0, 1], down by mu on [1, 2].
double power_gamma3(double x, double h, double mu, double tol = kDefaultProbabilityTol);

struct PowerTableRow {
  double h;
  double target_arl;
  double mu;
  std::optional<double> gamma;
  std::optional<double> gamma1;
  std::optional<double> gamma2;
  std::optional<double> gamma3;
};

/// Rows for which = 1 (gamma, 13 drifts per threshold) or 2..4 (gamma1, gamma2,
/// gamma3; 7 drifts). Only the column of the requested table is filled.
std::vector<PowerTableRow> power_table(int which, double tol = kDefaultProbabilityTol);

/// CSV "h,C,mu,gamma,gamma1,gamma2,gamma3" at 4 decimals; empty cells for unfilled columns.
std::string power_table_csv(const std::vector<PowerTableRow>& rows);

}  // namespace slepian

#endif  // SLEPIAN_CHANGEPOINT_HPP
