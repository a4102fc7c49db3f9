#include "slepian/changepoint.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "slepian/errors.hpp"
#include "slepian/fpt.hpp"
#include "slepian/gaussian.hpp"
#include "slepian/reference_values.hpp"

namespace slepian {

namespace {

double checked(const FptResult& r, const char* what) {
  if (!r.converged) {
    throw AccuracyError(std::string(what) + ": quadrature did not reach tolerance (error estimate " +
                        std::to_string(r.error_estimate) + ")");
  }
  return r.value;
}

void check_positive_drift(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("drift mu must be positive");
}

// Survival over one unit with a flat barrier at h; the common denominator of gamma and gamma3.
double flat_unit_survival(double x, double h) {
  if (!(x < h)) throw DomainError("start value x must lie below the threshold h");
  const double den = fpt_closed_T_le_1(h, 0.0, 1.0, x);
  if (den < 1e-12) throw AccuracyError("survival over [0,1] below 1e-12; ratio is ill-conditioned");
  return den;
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

}  // namespace

double lambda_h(double h, double tol) {
  if (!(h > 0.0)) throw DomainError("lambda_h: h must be positive");
  FptOptions o;
  o.tol = tol;
  const double f1 = checked(fpt_unconditional(h, 0.0, 1.0, o), "F(1)");
  const double f2 = checked(fpt_unconditional(h, 0.0, 2.0, o), "F(2)");
  return f2 / f1;
}

double arl(double h, double tol) {
  if (!(h > 0.0)) throw DomainError("arl: h must be positive");
  FptOptions o;
  o.tol = tol;
  const double f1 = checked(fpt_unconditional(h, 0.0, 1.0, o), "F(1)");
  const double f2 = checked(fpt_unconditional(h, 0.0, 2.0, o), "F(2)");
  const double lambda = f2 / f1;
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw AccuracyError("arl: lambda = " + std::to_string(lambda) + " is not inside (0, 1)");
  }
  return -f2 / (lambda * lambda * std::log(lambda));
}

bool arl_in_validated_range(double h) { return h >= kArlValidatedThreshold; }

double threshold_for_arl(double C, double tol) {
  if (!(C >= 20.0) || !std::isfinite(C)) throw DomainError("threshold_for_arl: target must be >= 20");
  const double lo = 2.5;
  const double hi = 6.0;
  auto g = [&](double h) { return std::log(arl(h, tol)) - std::log(C); };
  const double g_lo = g(lo);
  const double g_hi = g(hi);
  if (g_lo > 0.0 || g_hi < 0.0) {
    throw DomainError("threshold_for_arl: target run length not bracketed by h in [2.5, 6]");
  }
  std::uintmax_t iterations = 60;
  auto done = [](double a, double b) { return std::abs(b - a) <= 1e-7; };
  const auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi, done, iterations);
  return 0.5 * (a + b);
}

double power_gamma(double x, double h, double mu, double tol) {
  check_positive_drift(mu);
  const double den = flat_unit_survival(x, h);
  FptOptions o;
  o.tol = tol;
  const double num = checked(fpt_two_changes(h, 0.0, -mu, mu, x, o), "gamma numerator");
  return 1.0 - num / den;
}

double power_gamma1(double x, double h, double mu, double tol) {
  check_positive_drift(mu);
  FptOptions o;
  o.tol = tol;
  return 1.0 - checked(fpt_one_change(h, -mu, mu, 1, 1, x, o), "gamma1");
}

double stationary_density_p(double x, double h) {
  if (std::isnan(x) || x > h) throw DomainError("stationary density: x must be <= h");
  const double big_phi_h = normal_cdf(h);
  const double phi_h = normal_pdf(h);
  const double norm = big_phi_h * big_phi_h - phi_h * (h * big_phi_h + phi_h);
  const double p = (big_phi_h * normal_pdf(x) - normal_cdf(x) * phi_h) / norm;
  return std::max(0.0, p);
}

double power_gamma2(double h, double mu, double tol) {
  check_positive_drift(mu);
  const double big_phi_h = normal_cdf(h);
  const double phi_h = normal_pdf(h);
  const double norm = big_phi_h * big_phi_h - phi_h * (h * big_phi_h + phi_h);
  // p(x) / phi(x), with Phi(x) / phi(x) taken in log space for the far left tail.
  auto ratio = [=](double x) {
    const double mills = std::exp(log_normal_cdf(x) - log_transition_density(1.0, x));
    return std::max(0.0, (big_phi_h - mills * phi_h) / norm);
  };
  const double cut = truncation_bounds(1.0, tol);
  const MixingWeight weight{-cut, h, ratio};
  FptOptions o;
  o.tol = tol;
  return 1.0 - checked(fpt_mixed(BarrierSpec::one_change(h, -mu, mu, 1, 1), weight, o), "gamma2");
}

double power_gamma3(double x, double h, double mu, double tol) {
  check_positive_drift(mu);
  const double den = flat_unit_survival(x, h);
  FptOptions o;
  o.tol = tol;
  const double num = checked(fpt_one_change(h, 0.0, -mu, 1, 1, x, o), "gamma3 numerator");
  return 1.0 - num / den;
}

std::vector<PowerTableRow> power_table(int which, double tol) {
  const auto entries = published_table(which);
  if (entries.empty()) throw DomainError("power_table: table must be 1, 2, 3 or 4");
  std::vector<PowerTableRow> rows;
  rows.reserve(entries.size());
  for (const PowerTableEntry& e : entries) {
    PowerTableRow row{e.h, 0.0, e.mu, {}, {}, {}, {}};
    for (std::size_t i = 0; i < kTableThresholds.size(); ++i) {
      if (kTableThresholds[i] == e.h) row.target_arl = kTableTargetArl[i];
    }
    switch (which) {
      case 1: row.gamma = power_gamma(0.0, e.h, e.mu, tol); break;
      case 2: row.gamma1 = power_gamma1(0.0, e.h, e.mu, tol); break;
      case 3: row.gamma2 = power_gamma2(e.h, e.mu, tol); break;
      case 4: row.gamma3 = power_gamma3(0.0, e.h, e.mu, tol); break;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string power_table_csv(const std::vector<PowerTableRow>& rows) {
  std::ostringstream out;
  out << "h,C,mu,gamma,gamma1,gamma2,gamma3\n";
  char head[64];
  for (const PowerTableRow& r : rows) {
    std::snprintf(head, sizeof head, "%.2f,%.0f,%.2f", r.h, r.target_arl, r.mu);
    out << head << ',' << cell(r.gamma) << ',' << cell(r.gamma1) << ',' << cell(r.gamma2) << ',' << cell(r.gamma3)
        << '\n';
  }
  return out.str();
}

}  // namespace slepian
