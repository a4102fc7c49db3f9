#ifndef SLEPIAN_KM_HPP
#define SLEPIAN_KM_HPP

// Karlin-McGregor determinant integrands for drifted Brownian motions, and
// the vector constructions that turn first-passage problems for S(t) into
// non-collision problems for a family of shifted Brownian paths.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "slepian/errors.hpp"
#include "slepian/gaussian.hpp"

namespace slepian {

/// Largest determinant handled without heap allocation.
inline constexpr int kMaxKmDim = 16;

/// Smallest admissible time step.
inline constexpr double kMinKmStep = 1e-12;

template <typename Scalar>
using KmVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxKmDim, 1>;

template <typename Scalar>
using KmMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxKmDim, kMaxKmDim>;

/// A value stored as sign * exp(log_abs); sign is 0 for an exact zero.
template <typename Scalar>
struct SignedLog {
  Scalar log_abs = -std::numeric_limits<Scalar>::infinity();
  int sign = 0;

  Scalar value() const { return sign == 0 ? Scalar(0) : Scalar(sign) * std::exp(log_abs); }

  SignedLog& operator*=(const SignedLog& other) {
    sign *= other.sign;
    log_abs += other.log_abs;
    if (sign == 0) log_abs = -std::numeric_limits<Scalar>::infinity();
    return *this;
  }
  friend SignedLog operator*(SignedLog lhs, const SignedLog& rhs) { return lhs *= rhs; }

  /// Multiplies by exp(log_factor).
  SignedLog scaled(Scalar log_factor) const {
    SignedLog out = *this;
    if (out.sign != 0) out.log_abs += log_factor;
    return out;
  }
};

/// One factor exp(-step |drift|^2 / 2 + drift . (end - start)) det[phi_step(start_i - end_j)].
/// Components are indexed from 0.
template <typename Scalar>
struct KmBlock {
  Scalar step = Scalar(1);
  KmVector<Scalar> drift;
  KmVector<Scalar> start;
  KmVector<Scalar> end;

  Eigen::Index size() const { return drift.size(); }

  void validate() const {
    if (drift.size() < 1 || drift.size() != start.size() || drift.size() != end.size()) {
      throw DomainError("KmBlock: drift, start and end must have equal length >= 1");
    }
    if (!(step > Scalar(kMinKmStep))) throw DomainError("KmBlock: step must exceed 1e-12");
  }

  Scalar log_prefactor() const {
    return -step / Scalar(2) * drift.squaredNorm() + drift.dot(end - start);
  }
};

/// Determinant of a matrix with strictly positive entries given by their logs.
/// Each row is scaled by its largest entry before an LU with partial pivoting;
/// the row factors are reapplied in log space.
template <typename Scalar>
SignedLog<Scalar> log_det_positive(const KmMatrix<Scalar>& log_entries) {
  const Eigen::Index n = log_entries.rows();
  KmMatrix<Scalar> scaled(n, n);
  Scalar log_scale = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar row_max = log_entries.row(i).maxCoeff();
    log_scale += row_max;
    scaled.row(i) = (log_entries.row(i).array() - row_max).exp().matrix();
  }
  const Scalar det = n == 1 ? scaled(0, 0) : scaled.partialPivLu().determinant();
  SignedLog<Scalar> out;
  if (det == Scalar(0) || !std::isfinite(det)) return out;
  out.sign = det > 0 ? 1 : -1;
  out.log_abs = std::log(std::abs(det)) + log_scale;
  return out;
}

/// Karlin-McGregor integrand for one block, in signed-log form.
template <typename Scalar>
SignedLog<Scalar> km_log_integrand(const KmBlock<Scalar>& block) {
  block.validate();
  const Eigen::Index n = block.size();
  KmMatrix<Scalar> log_entries(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      log_entries(i, j) = log_transition_density(block.step, block.start(i) - block.end(j));
    }
  }
  return log_det_positive(log_entries).scaled(block.log_prefactor());
}

/// Karlin-McGregor integrand; negative when start/end orderings disagree.
template <typename Scalar>
Scalar km_integrand(const KmBlock<Scalar>& block) {
  return km_log_integrand(block).value();
}

/// The block integrand integrated analytically over its last end component.
/// The last entry of `block.end` is read as the offset K in end_n = y + K, and
/// y runs over [lower, +inf). The last determinant column becomes
///   exp(m A_i + s m^2 / 2) Phi((A_i + s m - lower) / sqrt(s)),  A_i = start_i - K,
/// with m the last drift and s the step.
template <typename Scalar>
SignedLog<Scalar> km_log_tail_integrand(const KmBlock<Scalar>& block, Scalar lower) {
  block.validate();
  const Eigen::Index n = block.size();
  const Eigen::Index last = n - 1;
  const Scalar s = block.step;
  const Scalar m = block.drift(last);
  const Scalar root_s = std::sqrt(s);
  KmMatrix<Scalar> log_entries(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < last; ++j) {
      log_entries(i, j) = log_transition_density(s, block.start(i) - block.end(j));
    }
    const Scalar shift = block.start(i) - block.end(last);
    log_entries(i, last) =
        m * shift + s * m * m / Scalar(2) + log_normal_cdf((shift + s * m - lower) / root_s);
  }
  return log_det_positive(log_entries).scaled(block.log_prefactor());
}

template <typename Scalar>
Scalar km_tail_integrand(const KmBlock<Scalar>& block, Scalar lower) {
  return km_log_tail_integrand(block, lower).value();
}

// ---------------------------------------------------------------------------
// Vector constructions. `x` is the conditioning value S(0); internally the
// Brownian values are x_0 = W(0) = 0 and x_1 = W(1) = -x.

/// Linear barrier a + b t on [0, n]. `vars` holds x_2, ..., x_{n+1}.
template <typename Scalar>
KmBlock<Scalar> build_linear_integer_block(Scalar a, Scalar b, int n, Scalar x, std::span<const Scalar> vars) {
  if (n < 1) throw DomainError("linear integer block: n must be >= 1");
  if (n + 1 > kMaxKmDim) throw CapabilityError("linear integer block: dimension exceeds kMaxKmDim");
  if (static_cast<int>(vars.size()) != n) throw DomainError("linear integer block: expected n integration variables");
  auto w = [&](int i) -> Scalar { return i == 0 ? Scalar(0) : (i == 1 ? -x : vars[i - 2]); };
  KmBlock<Scalar> block;
  block.step = 1;
  block.drift.resize(n + 1);
  block.start.resize(n + 1);
  block.end.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const Scalar tri = Scalar((i - 1) * i) / Scalar(2) * b;
    block.drift(i) = Scalar(i) * b;
    block.start(i) = w(i) + Scalar(i) * a + tri;
    block.end(i) = w(i + 1) + (a + b) * Scalar(i) + tri;
  }
  return block;
}

template <typename Scalar>
struct LinearRealBlocks {
  KmBlock<Scalar> first;   // step theta, m + 2 paths
  KmBlock<Scalar> second;  // step 1 - theta, m + 1 paths
};

/// Linear barrier on a non-integer horizon m + theta. `u` holds u_2, ..., u_{m+1}
/// (values of W at integer times) and `v` holds v_0, ..., v_{m+1} (values at
/// times i + theta).
template <typename Scalar>
LinearRealBlocks<Scalar> build_linear_real_blocks(Scalar a, Scalar b, int m, Scalar theta, Scalar x,
                                             std::span<const Scalar> u, std::span<const Scalar> v) {
  if (m < 0) throw DomainError("linear real blocks: m must be >= 0");
  if (!(theta > Scalar(0) && theta < Scalar(1))) throw DomainError("linear real blocks: theta must lie in (0,1)");
  if (static_cast<int>(u.size()) != m || static_cast<int>(v.size()) != m + 2) {
    throw DomainError("linear real blocks: expected m values u and m + 2 values v");
  }
  if (m + 2 > kMaxKmDim) throw CapabilityError("linear real blocks: dimension exceeds kMaxKmDim");
  const int n = m + 1;
  auto uu = [&](int i) -> Scalar { return i == 0 ? Scalar(0) : (i == 1 ? -x : u[i - 2]); };
  auto tri = [&](int i) { return Scalar((i - 1) * i) / Scalar(2) * b; };

  LinearRealBlocks<Scalar> out;
  KmBlock<Scalar>& first = out.first;
  first.step = theta;
  first.drift.resize(n + 1);
  first.start.resize(n + 1);
  first.end.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    first.drift(i) = Scalar(i) * b;
    first.start(i) = uu(i) + Scalar(i) * a + tri(i);
    first.end(i) = v[i] + Scalar(i) * (a + b * theta) + tri(i);
  }
  KmBlock<Scalar>& second = out.second;
  second.step = Scalar(1) - theta;
  second.drift.resize(m + 1);
  second.start.resize(m + 1);
  second.end.resize(m + 1);
  for (int j = 0; j <= m; ++j) {
    second.drift(j) = Scalar(j) * b;
    second.start(j) = v[j] + Scalar(j) * (a + b * theta) + tri(j);
    second.end(j) = uu(j + 1) + Scalar(j) * (a + b) + tri(j);
  }
  return out;
}

/// Barrier with slope b on [0, T] and b' on [T, T + T'], integer T, T'.
/// `vars` holds x_2, ..., x_{T+T'+1}.
template <typename Scalar>
KmBlock<Scalar> build_one_change_block(Scalar a, Scalar b, Scalar b_prime, int t1, int t2, Scalar x,
                                     std::span<const Scalar> vars) {
  if (t1 < 1 || t2 < 1) throw DomainError("one-change block: T and T' must be >= 1");
  const int n = t1 + t2;
  if (n + 1 > kMaxKmDim) throw CapabilityError("one-change block: dimension exceeds kMaxKmDim");
  if (static_cast<int>(vars.size()) != n) throw DomainError("one-change block: expected T + T' integration variables");
  auto w = [&](int i) -> Scalar { return i == 0 ? Scalar(0) : (i == 1 ? -x : vars[i - 2]); };
  const Scalar first_leg = Scalar((t1 - 1) * t1) / Scalar(2) * b;
  KmBlock<Scalar> block;
  block.step = 1;
  block.drift.resize(n + 1);
  block.start.resize(n + 1);
  block.end.resize(n + 1);
  for (int i = 0; i <= t1; ++i) {
    const Scalar tri = Scalar((i - 1) * i) / Scalar(2) * b;
    block.drift(i) = Scalar(i) * b;
    block.start(i) = w(i) + Scalar(i) * a + tri;
    block.end(i) = w(i + 1) + Scalar(i) * (a + b) + tri;
  }
  for (int j = 1; j <= t2; ++j) {
    const int i = t1 + j;
    const Scalar offset =
        Scalar(i) * a + b * Scalar(t1 * j) + Scalar((j - 1) * j) / Scalar(2) * b_prime + first_leg;
    block.drift(i) = Scalar(j) * b_prime + Scalar(t1) * b;
    block.start(i) = w(i) + offset;
    block.end(i) = w(i + 1) + offset + Scalar(j) * b_prime + Scalar(t1) * b;
  }
  return block;
}

/// Barrier with slopes b, b', b'' on three unit intervals. `vars` holds x_2, x_3, x_4.
template <typename Scalar>
KmBlock<Scalar> build_two_change_block(Scalar a, Scalar b, Scalar b_prime, Scalar b_double_prime, Scalar x,
                                  std::span<const Scalar> vars) {
  if (vars.size() != 3) throw DomainError("two-change block: expected 3 integration variables");
  const Scalar x1 = -x;
  KmBlock<Scalar> block;
  block.step = 1;
  block.drift.resize(4);
  block.start.resize(4);
  block.end.resize(4);
  block.drift << Scalar(0), b, b + b_prime, b + b_prime + b_double_prime;
  block.start << Scalar(0), x1 + a, vars[0] + Scalar(2) * a + b, vars[1] + Scalar(3) * a + Scalar(2) * b + b_prime;
  block.end << x1, vars[0] + a + b, vars[1] + Scalar(2) * a + Scalar(2) * b + b_prime,
      vars[2] + Scalar(3) * a + Scalar(3) * b + Scalar(2) * b_prime + b_double_prime;
  return block;
}

}  // namespace slepian

#endif  // SLEPIAN_KM_HPP
