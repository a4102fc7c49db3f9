#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "slepian/errors.hpp"
#include "slepian/gaussian.hpp"
#include "slepian/quadrature.hpp"

using namespace slepian;

TEST(NormalPdf, ReferenceValues) {
  EXPECT_NEAR(normal_pdf(0.0), 0.39894228040143268, 1e-16);
  EXPECT_EQ(normal_pdf(1.7), normal_pdf(-1.7));
  EXPECT_EQ(normal_pdf(40.0), 0.0);
  EXPECT_GT(normal_pdf(8.0), 0.0);
}

TEST(NormalPdf, RejectsNonFinite) {
  EXPECT_THROW(normal_pdf(std::numeric_limits<double>::infinity()), DomainError);
  EXPECT_THROW(normal_pdf(std::nan("")), DomainError);
}

TEST(NormalCdf, ReferenceValues) {
  EXPECT_EQ(normal_cdf(0.0), 0.5);
  EXPECT_EQ(normal_cdf(std::numeric_limits<double>::infinity()), 1.0);
  EXPECT_EQ(normal_cdf(-std::numeric_limits<double>::infinity()), 0.0);
  EXPECT_NEAR(normal_cdf(1.0), 0.84134474606854295, 1e-15);
  EXPECT_THROW(normal_cdf(std::nan("")), DomainError);
}

TEST(NormalCdf, SymmetryAndDerivative) {
  for (double z = -8.0; z <= 8.0; z += 0.125) {
    EXPECT_LE(std::abs(normal_cdf(z) + normal_cdf(-z) - 1.0), 1e-14) << z;
    const double h = 1e-5;
    const double slope = (normal_cdf(z + h) - normal_cdf(z - h)) / (2 * h);
    EXPECT_NEAR(slope, normal_pdf(z), 1e-6) << z;
  }
}

TEST(NormalCdf, Monotone) {
  double prev = 0.0;
  for (double z = -10.0; z <= 10.0; z += 0.01) {
    const double v = normal_cdf(z);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(LogNormalCdf, MatchesLogOfCdfAndStaysFiniteInTail) {
  for (double z = -30.0; z <= 6.0; z += 0.5) {
    EXPECT_NEAR(log_normal_cdf(z), std::log(normal_cdf(z)), 1e-12 * std::max(1.0, std::abs(std::log(normal_cdf(z)))));
  }
  // Continuity across the asymptotic switch.
  EXPECT_NEAR(log_normal_cdf(-37.0 - 1e-9), log_normal_cdf(-37.0), 1e-6);
  EXPECT_TRUE(std::isfinite(log_normal_cdf(-200.0)));
  EXPECT_LT(log_normal_cdf(-200.0), -19000.0);
}

TEST(TransitionDensity, ReferenceValues) {
  EXPECT_NEAR(transition_density(1.0, 0.0), 0.39894228040143268, 1e-16);
  EXPECT_NEAR(transition_density(0.25, 1.0), 0.1079819330263761, 1e-15);
  EXPECT_THROW(transition_density(0.0, 1.0), DomainError);
  EXPECT_THROW(transition_density(-1.0, 1.0), DomainError);
}

TEST(TransitionDensity, ScalingIdentityAndLogForm) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> s_dist(0.01, 4.0);
  std::uniform_real_distribution<double> z_dist(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double s = s_dist(rng);
    const double z = z_dist(rng);
    const double scaled = transition_density(1.0, z / std::sqrt(s)) / std::sqrt(s);
    EXPECT_NEAR(transition_density(s, z), scaled, 1e-14 * scaled + 1e-300);
    EXPECT_NEAR(std::exp(log_transition_density(s, z)), transition_density(s, z), 1e-13 * scaled + 1e-300);
  }
}

TEST(TransitionDensity, IntegratesToOne) {
  for (double s : {0.05, 0.5, 1.0, 3.0}) {
    const double half = 12.0 * std::sqrt(s);
    Region region{{Axis{LowerLimit::fixed(-half), half, 0.0, std::sqrt(s)}}};
    const QuadResult r = integrate([s](std::span<const double> v) { return transition_density(s, v[0]); }, region, 1e-12);
    EXPECT_NEAR(r.value, 1.0, 1e-10) << s;
  }
}

TEST(Gaussian, LongDoubleInstantiation) {
  EXPECT_NEAR(static_cast<double>(normal_cdf(1.0L)), 0.84134474606854295, 1e-16);
}
