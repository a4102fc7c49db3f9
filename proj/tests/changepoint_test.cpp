#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "slepian/changepoint.hpp"
#include "slepian/errors.hpp"
#include "slepian/gaussian.hpp"
#include "slepian/quadrature.hpp"
#include "slepian/reference_values.hpp"

using namespace slepian;

namespace {
constexpr double kTol = 1e-7;
}

TEST(Lambda, RangeAndMonotonicity) {
  const double l363 = lambda_h(3.63);
  EXPECT_GT(l363, 0.99);
  EXPECT_LT(l363, 1.0);
  EXPECT_LT(lambda_h(3.11), lambda_h(3.83));
  EXPECT_GT(lambda_h(5.5), lambda_h(3.83));
  EXPECT_LT(lambda_h(5.5), 1.0);
}

TEST(Arl, PublishedThresholds) {
  EXPECT_NEAR(arl(3.11), 100.0, 5.0);
  EXPECT_NEAR(arl(3.63), 500.0, 25.0);
  EXPECT_NEAR(arl(3.83), 1000.0, 50.0);
  EXPECT_LT(arl(3.11), arl(3.63));
}

TEST(Arl, ValidatedRangeFlag) {
  EXPECT_TRUE(arl_in_validated_range(3.0));
  EXPECT_FALSE(arl_in_validated_range(2.0));
}

TEST(Arl, DegenerateRatioIsAnAccuracyError) {
  // Far out the survival ratio rounds to 1 and the run-length formula is undefined.
  EXPECT_THROW(arl(40.0), AccuracyError);
}

TEST(Threshold, PublishedTargetsAndRoundTrip) {
  const struct {
    double target, h;
  } cases[] = {{100, 3.11}, {500, 3.63}, {1000, 3.83}};
  for (const auto& c : cases) {
    const double h = threshold_for_arl(c.target);
    EXPECT_NEAR(h, c.h, 0.01) << c.target;
    EXPECT_NEAR(arl(h), c.target, 1e-3 * c.target) << c.target;
  }
}

TEST(Threshold, Errors) {
  EXPECT_THROW(threshold_for_arl(10.0), DomainError);
  EXPECT_THROW(threshold_for_arl(1e12), DomainError);
}

TEST(StationaryDensity, Normalised) {
  for (double h : {3.0, 3.11, 3.63, 3.83}) {
    Region region{{Axis{LowerLimit::unbounded(), h, 0.0, 1.0}}};
    const QuadResult r = integrate([h](std::span<const double> v) { return stationary_density_p(v[0], h); }, region, 1e-12);
    EXPECT_NEAR(r.value, 1.0, 1e-8) << h;
  }
}

TEST(StationaryDensity, PointValues) {
  const double h = 3.0;
  EXPECT_NEAR(stationary_density_p(0.0, h), 0.40262794441613226, 1e-14);
  // Term by term at x = 0, where Phi(0) = 1/2.
  const double Ph = normal_cdf(h), ph = normal_pdf(h);
  const double den = Ph * Ph - ph * (h * Ph + ph);
  EXPECT_NEAR(stationary_density_p(0.0, h), (Ph * normal_pdf(0.0) - 0.5 * ph) / den, 1e-14);
  EXPECT_GE(stationary_density_p(h, h), 0.0);
  EXPECT_NEAR(stationary_density_p(h, h), 0.0, 1e-15);
  // Deep tail: the Phi(x) phi(h) correction is below 1e-3 relative.
  EXPECT_NEAR(stationary_density_p(-10.0, h) / (normal_pdf(-10.0) * Ph / den), 1.0, 1e-3);
  EXPECT_NEAR(stationary_density_p(-10.0, h), (Ph * normal_pdf(-10.0) - normal_cdf(-10.0) * ph) / den, 1e-30);
  EXPECT_THROW(stationary_density_p(3.5, h), DomainError);
}

TEST(Power, PublishedSpotValues) {
  EXPECT_NEAR(power_gamma(0, 3.11, 2), 0.3052, 0.002);
  EXPECT_NEAR(power_gamma(0, 3.63, 3), 0.4338, 0.002);
  EXPECT_NEAR(power_gamma(0, 3.83, 5), 0.9370, 0.002);
  EXPECT_NEAR(power_gamma1(0, 3.11, 2), 0.2918, 0.001);
  EXPECT_NEAR(power_gamma1(0, 3.63, 4), 0.7783, 0.001);
  EXPECT_NEAR(power_gamma1(0, 3.83, 5), 0.9358, 0.001);
  EXPECT_NEAR(power_gamma2(3.11, 2), 0.3047, 0.002);
  EXPECT_NEAR(power_gamma2(3.63, 3.5), 0.6196, 0.002);
  EXPECT_NEAR(power_gamma2(3.83, 5), 0.9370, 0.002);
  EXPECT_NEAR(power_gamma3(0, 3.11, 2), 0.2389, 0.002);
  EXPECT_NEAR(power_gamma3(0, 3.63, 3), 0.3731, 0.002);
  EXPECT_NEAR(power_gamma3(0, 3.83, 5), 0.9192, 0.002);
}

TEST(Power, MatchesOracleAtThree) {
  // 1 - F(3 | 0) / F(1 | 0) with both factors from the independent oracle.
  EXPECT_NEAR(power_gamma(0, 3, 3), 1.0 - 0.29842027284990985 / 0.99309560369924875, 2 * kTol);
}

TEST(Power, Errors) {
  EXPECT_THROW(power_gamma(3.2, 3.11, 2), DomainError);
  EXPECT_THROW(power_gamma3(3.11, 3.11, 2), DomainError);
}

TEST(Power, OrderingAndMonotonicityOnTableGrid) {
  for (double h : kTableThresholds) {
    double prev[4] = {0, 0, 0, 0};
    for (double mu = 2.0; mu <= 5.0; mu += 0.5) {
      const double g = power_gamma(0, h, mu);
      const double g1 = power_gamma1(0, h, mu);
      const double g2 = power_gamma2(h, mu);
      const double g3 = power_gamma3(0, h, mu);
      EXPECT_LE(g3, g1 + 2 * kTol) << h << ' ' << mu;
      EXPECT_LE(g1, g + 2 * kTol) << h << ' ' << mu;
      EXPECT_LE(std::abs(g2 - g), 0.001) << h << ' ' << mu;
      const double now[4] = {g, g1, g2, g3};
      for (int k = 0; k < 4; ++k) {
        EXPECT_GE(now[k], prev[k] - 2 * kTol) << k << ' ' << h << ' ' << mu;
        prev[k] = now[k];
      }
    }
  }
}

TEST(Power, FlatInStartValue) {
  const double g0 = power_gamma(0, 3, 3);
  for (double x = -4.0; x <= 2.5; x += 0.5) {
    EXPECT_LE(std::abs(power_gamma(x, 3, 3) / g0 - 1.0), 1e-3) << x;
  }
}

TEST(Tables, FillOnlyRequestedColumn) {
  const auto rows = power_table(2);
  ASSERT_EQ(rows.size(), 21u);
  EXPECT_TRUE(rows[0].gamma1.has_value());
  EXPECT_FALSE(rows[0].gamma.has_value());
  EXPECT_EQ(power_table(1).size(), 39u);
  EXPECT_THROW(power_table(5), DomainError);
}

TEST(Tables, ReproducePublishedValues) {
  for (int which = 1; which <= 4; ++which) {
    const auto rows = power_table(which);
    const auto published = published_table(which);
    ASSERT_EQ(rows.size(), published.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      const double v = which == 1 ? *r.gamma : which == 2 ? *r.gamma1 : which == 3 ? *r.gamma2 : *r.gamma3;
      EXPECT_EQ(r.h, published[i].h);
      EXPECT_EQ(r.mu, published[i].mu);
      EXPECT_NEAR(v, published[i].value, published_table_tolerance(which)) << which << ' ' << r.h << ' ' << r.mu;
    }
  }
}

TEST(Tables, CsvLayout) {
  const std::string csv = power_table_csv(power_table(2));
  std::istringstream in(csv);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "h,C,mu,gamma,gamma1,gamma2,gamma3");
  EXPECT_EQ(first, "3.11,100,2.00,,0.2918,,");
}
