#ifndef SLEPIAN_GAUSSIAN_HPP
#define SLEPIAN_GAUSSIAN_HPP

#include <cmath>
#include <numbers>

#include "slepian/errors.hpp"

namespace slepian {

/// Standard normal density (2*pi)^(-1/2) exp(-z^2/2). Underflows silently to 0.
template <typename Scalar>
Scalar normal_pdf(Scalar z) {
  if (!std::isfinite(z)) throw DomainError("normal_pdf: non-finite argument");
  const Scalar inv_sqrt_2pi = std::numbers::inv_sqrtpi_v<Scalar> / std::numbers::sqrt2_v<Scalar>;
  return inv_sqrt_2pi * std::exp(-z * z / Scalar(2));
}

/// Standard normal distribution function, evaluated through erfc so that the
/// lower tail keeps full relative accuracy.
template <typename Scalar>
Scalar normal_cdf(Scalar z) {
  if (std::isnan(z)) throw DomainError("normal_cdf: NaN argument");
  return Scalar(0.5) * std::erfc(-z / std::numbers::sqrt2_v<Scalar>);
}

/// log of the standard normal distribution function. Finite for every finite z;
/// below z = -37 (where erfc underflows) an asymptotic Mills-ratio series is used.
template <typename Scalar>
Scalar log_normal_cdf(Scalar z) {
  if (std::isnan(z)) throw DomainError("log_normal_cdf: NaN argument");
  if (z > Scalar(0)) return std::log1p(-normal_cdf(-z));
  if (z > Scalar(-37)) return std::log(normal_cdf(z));
  const Scalar r = Scalar(1) / (z * z);
  // 1 - 1/z^2 + 3/z^4 - 15/z^6 + 105/z^8 - 945/z^10
  const Scalar series =
      Scalar(1) + r * (Scalar(-1) + r * (Scalar(3) + r * (Scalar(-15) + r * (Scalar(105) + r * Scalar(-945)))));
  const Scalar log_sqrt_2pi = Scalar(0.5) * std::log(Scalar(2) * std::numbers::pi_v<Scalar>);
  return -z * z / Scalar(2) - log_sqrt_2pi - std::log(-z) + std::log(series);
}

/// Brownian transition density over a time step s: (2*pi*s)^(-1/2) exp(-z^2/(2s)).
template <typename Scalar>
Scalar transition_density(Scalar s, Scalar z) {
  if (!(s > Scalar(0))) throw DomainError("transition_density: step must be positive");
  const Scalar root = std::sqrt(s);
  return normal_pdf(z / root) / root;
}

template <typename Scalar>
Scalar log_transition_density(Scalar s, Scalar z) {
  if (!(s > Scalar(0))) throw DomainError("log_transition_density: step must be positive");
  const Scalar log_2pi = std::log(Scalar(2) * std::numbers::pi_v<Scalar>);
  return -z * z / (Scalar(2) * s) - Scalar(0.5) * (log_2pi + std::log(s));
}

}  // namespace slepian

#endif  // SLEPIAN_GAUSSIAN_HPP
