#include "slepian/quadrature.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>

#include "slepian/errors.hpp"

namespace slepian {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod nodes on [0, 1) (symmetric), with index 0 the centre; Gauss nodes
// sit at even indices.
struct Gk15 {
  std::array<double, 8> node{};
  std::array<double, 8> kronrod{};
  std::array<double, 8> gauss{};  // zero at odd indices

  Gk15() {
    using K = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    for (int i = 0; i < 8; ++i) {
      node[i] = K::abscissa()[i];
      kronrod[i] = K::weights()[i];
    }
    for (int i = 0; i < 4; ++i) gauss[2 * i] = G::weights()[i];
  }
};

const Gk15& rule() {
  static const Gk15 r;
  return r;
}

enum class Map { Finite, UpperInfinite, LowerInfinite, BothInfinite };

struct Piece {
  Map map = Map::Finite;
  double anchor = 0.0;
  double t0 = 0.0;
  double t1 = 1.0;
};

struct Interval {
  int piece;
  double left;
  double right;
  double value;
  double error;
};

struct Sweep {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

class NestedIntegrator {
 public:
  NestedIntegrator(const Integrand& f, const Region& region, const QuadOptions& options)
      : f_(f), region_(region), options_(options), point_(region.axes.size(), 0.0) {}

  Sweep level(int k, double abs_tol, double rel_tol) {
    const Axis& axis = region_.axes[k];
    double lo = axis.lower.constant;
    for (std::size_t j = 0; j < axis.lower.chain.size(); ++j) lo += axis.lower.chain[j] * point_[j];
    const double hi = axis.upper;
    if (!(lo < hi)) return {};

    // An unbounded end is split at the centre hint (when it lies inside) into a
    // finite piece plus a mapped tail anchored at the centre.
    std::array<Piece, 2> pieces{};
    int piece_count = 1;
    const double c = axis.center;
    if (std::isinf(lo) && std::isinf(hi)) {
      pieces[0] = {Map::BothInfinite, c, -1.0, 1.0};
    } else if (std::isinf(hi)) {
      if (lo < c) {
        pieces[0] = {Map::Finite, 0.0, lo, c};
        pieces[1] = {Map::UpperInfinite, c, 0.0, 1.0};
        piece_count = 2;
      } else {
        pieces[0] = {Map::UpperInfinite, lo, 0.0, 1.0};
      }
    } else if (std::isinf(lo)) {
      if (c < hi) {
        pieces[0] = {Map::LowerInfinite, c, 0.0, 1.0};
        pieces[1] = {Map::Finite, 0.0, c, hi};
        piece_count = 2;
      } else {
        pieces[0] = {Map::LowerInfinite, hi, 0.0, 1.0};
      }
    } else {
      pieces[0] = {Map::Finite, 0.0, lo, hi};
    }

    auto eval = [&](const Piece& piece, double t, double& inner_error) -> double {
      double x = t;
      double jac = 1.0;
      const double s = axis.scale;
      switch (piece.map) {
        case Map::Finite: break;
        case Map::UpperInfinite:
          x = piece.anchor + s * t / (1.0 - t);
          jac = s / ((1.0 - t) * (1.0 - t));
          break;
        case Map::LowerInfinite:
          x = piece.anchor - s * t / (1.0 - t);
          jac = s / ((1.0 - t) * (1.0 - t));
          break;
        case Map::BothInfinite: {
          const double d = 1.0 - t * t;
          x = piece.anchor + s * t / d;
          jac = s * (1.0 + t * t) / (d * d);
          break;
        }
      }
      if (!std::isfinite(x) || !std::isfinite(jac)) {
        inner_error = 0.0;
        return 0.0;
      }
      point_[k] = x;
      if (k + 1 == region_.dims()) {
        ++evaluations_;
        inner_error = 0.0;
        const double y = f_(std::span<const double>(point_));
        return std::isfinite(y) ? jac * y : 0.0;
      }
      const Sweep inner = level(k + 1, 1e-3 * abs_tol, std::max(1e-13, 0.1 * std::max(abs_tol, rel_tol)));
      if (!inner.converged) inner_converged_ = false;
      inner_error = jac * inner.error;
      return jac * inner.value;
    };

    std::vector<Interval> parts;
    parts.reserve(64);
    for (int i = 0; i < piece_count; ++i) parts.push_back(gk15(pieces[i], i, pieces[i].t0, pieces[i].t1, eval));
    double total = 0.0;
    double total_err = 0.0;
    for (const Interval& part : parts) {
      total += part.value;
      total_err += part.error;
    }
    bool converged = true;
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
      if (evaluations_ >= options_.max_evaluations || static_cast<int>(parts.size()) >= options_.max_intervals) {
        converged = false;
        break;
      }
      const auto worst = std::max_element(parts.begin(), parts.end(),
                                          [](const Interval& l, const Interval& r) { return l.error < r.error; });
      const double mid = 0.5 * (worst->left + worst->right);
      if (!(mid > worst->left && mid < worst->right)) {
        converged = false;
        break;
      }
      const Piece& piece = pieces[worst->piece];
      const Interval left = gk15(piece, worst->piece, worst->left, mid, eval);
      const Interval right = gk15(piece, worst->piece, mid, worst->right, eval);
      *worst = left;
      parts.push_back(right);
      total = 0.0;
      total_err = 0.0;
      for (const Interval& part : parts) {
        total += part.value;
        total_err += part.error;
      }
    }
    return {total, total_err, converged};
  }

  std::size_t evaluations() const { return evaluations_; }
  bool inner_converged() const { return inner_converged_; }

 private:
  template <typename Eval>
  Interval gk15(const Piece& piece, int index, double left, double right, Eval& eval) {
    const Gk15& r = rule();
    const double centre = 0.5 * (left + right);
    const double half = 0.5 * (right - left);
    std::array<double, 15> values{};
    std::array<double, 15> inner{};
    values[0] = eval(piece, centre, inner[0]);
    for (int i = 1; i < 8; ++i) {
      values[2 * i - 1] = eval(piece, centre - half * r.node[i], inner[2 * i - 1]);
      values[2 * i] = eval(piece, centre + half * r.node[i], inner[2 * i]);
    }
    double kron = r.kronrod[0] * values[0];
    double gauss = r.gauss[0] * values[0];
    double abs_sum = r.kronrod[0] * std::abs(values[0]);
    double inner_err = r.kronrod[0] * inner[0];
    for (int i = 1; i < 8; ++i) {
      const double pair = values[2 * i - 1] + values[2 * i];
      kron += r.kronrod[i] * pair;
      gauss += r.gauss[i] * pair;
      abs_sum += r.kronrod[i] * (std::abs(values[2 * i - 1]) + std::abs(values[2 * i]));
      inner_err += r.kronrod[i] * (inner[2 * i - 1] + inner[2 * i]);
    }
    const double mean = 0.5 * kron;
    double asc = r.kronrod[0] * std::abs(values[0] - mean);
    for (int i = 1; i < 8; ++i) {
      asc += r.kronrod[i] * (std::abs(values[2 * i - 1] - mean) + std::abs(values[2 * i] - mean));
    }
    // QUADPACK error heuristic.
    const double h = std::abs(half);
    double err = std::abs((kron - gauss) * half);
    const double resasc = asc * h;
    const double resabs = abs_sum * h;
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(err, 50.0 * kEps * resabs);
    return {index, left, right, kron * half, err + inner_err * h};
  }

  const Integrand& f_;
  const Region& region_;
  const QuadOptions& options_;
  std::vector<double> point_;
  std::size_t evaluations_ = 0;
  bool inner_converged_ = true;
};

}  // namespace

void Region::validate() const {
  if (axes.empty()) throw DomainError("region: at least one axis required");
  if (dims() > kMaxQuadratureDims) {
    throw CapabilityError("region: more than 6 integration dimensions; use the Monte Carlo route");
  }
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const Axis& a = axes[k];
    if (a.lower.chain.size() > k) throw DomainError("region: chain shift may only reference earlier axes");
    if (std::isinf(a.lower.constant) && (a.lower.constant > 0 || !a.lower.chain.empty())) {
      throw DomainError("region: unbounded lower limit cannot carry a chain shift");
    }
    if (std::isnan(a.upper) || a.upper == -kInf) throw DomainError("region: invalid upper limit");
    if (!(a.scale > 0.0) || !std::isfinite(a.center)) throw DomainError("region: invalid axis mapping hint");
  }
}

QuadResult integrate(const Integrand& f, const Region& region, double tol, const QuadOptions& options) {
  region.validate();
  if (!(tol >= 1e-12)) throw DomainError("integrate: tol must be >= 1e-12");
  NestedIntegrator engine(f, region, options);
  const Sweep top = engine.level(0, tol, options.rel_tol);
  QuadResult out;
  out.value = top.value;
  out.error_estimate = top.error;
  out.evaluations = std::max<std::size_t>(engine.evaluations(), 1);
  out.converged = top.converged && engine.inner_converged() &&
                  top.error <= std::max(tol, options.rel_tol * std::abs(top.value));
  return out;
}

double truncation_bounds(double axis_scale, double tol, int dims) {
  if (!(axis_scale > 0.0)) throw DomainError("truncation_bounds: scale must be positive");
  if (!(tol > 0.0 && tol < 1.0)) throw DomainError("truncation_bounds: tol must lie in (0,1)");
  // Smallest L with 2 Phi(-L) = erfc(L / sqrt 2) <= tol / dims.
  const double target = tol / std::max(1, dims);
  const double l_min = std::sqrt(2.0) * boost::math::erfc_inv(target);
  return axis_scale * (l_min + 3.0);
}

}  // namespace slepian
