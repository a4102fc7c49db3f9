#include <gtest/gtest.h>

#include <cmath>

#include "slepian/errors.hpp"
#include "slepian/fpt.hpp"
#include "slepian/mc_oracle.hpp"

using namespace slepian;

namespace {

PathConfig small_config(double horizon = 1.0) {
  PathConfig cfg;
  cfg.paths = 20'000;
  cfg.grid_step = 1.0 / 256.0;
  cfg.seed = 7;
  cfg.horizon = horizon;
  cfg.x = 0.0;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST(PathConfig, Validation) {
  PathConfig cfg = small_config();
  EXPECT_NO_THROW(cfg.validate());
  cfg.paths = 9'999;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = small_config();
  cfg.grid_step = 1.0 / 128.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg.grid_step = 1.0 / 300.5;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = small_config(1.3);
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = small_config();
  cfg.x = std::nan("");
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(Simulate, HorizonMustMatchBarrier) {
  EXPECT_THROW(simulate_survival(BarrierSpec::linear(1, 0, 2), small_config(1.0)), DomainError);
}

TEST(Simulate, RefusesOversizedRuns) {
  PathConfig cfg = small_config();
  cfg.paths = 100'000'000;
  cfg.grid_step = 1.0 / 2048.0;
  EXPECT_THROW(simulate_survival(BarrierSpec::linear(1, 0, 1), cfg), ResourceError);
}

TEST(Simulate, StartAboveBarrierNeverSurvives) {
  PathConfig cfg = small_config();
  cfg.x = 1.0;
  const McEstimate est = simulate_survival(BarrierSpec::linear(1, 0, 1), cfg);
  EXPECT_EQ(est.probability, 0.0);
  EXPECT_EQ(est.survivors, 0u);
  EXPECT_EQ(est.std_error, 0.0);
}

TEST(Simulate, DeterministicAcrossRunsAndThreads) {
  const BarrierSpec barrier = BarrierSpec::one_change(2, 0.5, -0.5, 1, 1);
  PathConfig cfg = small_config(2.0);
  const McEstimate a = simulate_survival(barrier, cfg);
  const McEstimate b = simulate_survival(barrier, cfg);
  cfg.threads = 3;
  const McEstimate c = simulate_survival(barrier, cfg);
  EXPECT_EQ(a.survivors, b.survivors);
  EXPECT_EQ(a.probability, b.probability);
  EXPECT_EQ(a.survivors, c.survivors);
  EXPECT_EQ(a.std_error, std::sqrt(a.probability * (1 - a.probability) / a.paths));
  cfg.seed = 8;
  EXPECT_NE(simulate_survival(barrier, cfg).survivors, a.survivors);
}

TEST(Sampler, ConditionedStartIsExact) {
  PathConfig cfg = small_config();
  cfg.x = -0.37;
  const PathSampler sampler(cfg);
  for (std::size_t p = 0; p < 20; ++p) {
    const auto path = sampler.sample(p);
    ASSERT_EQ(path.size(), 257u);
    EXPECT_EQ(path[0], -0.37);
  }
}

TEST(Sampler, StandardNormalStartMoments) {
  PathConfig cfg = small_config(1.0 / 256.0);
  cfg.start_mode = StartMode::StandardNormal;
  const PathSampler sampler(cfg);
  const std::size_t n = 1'000'000;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const double s0 = sampler.sample(p)[0];
    sum += s0;
    sum_sq += s0 * s0;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  EXPECT_LE(std::abs(mean), 4.0 / std::sqrt(double(n)));
  EXPECT_NEAR(var, 1.0, 0.01);
}

TEST(Sampler, IncrementsHaveSlepianCovariance) {
  // Var S(t) = 1 and Cov(S(0), S(t)) = 1 - t for t <= 1.
  PathConfig cfg = small_config(1.5);
  cfg.start_mode = StartMode::StandardNormal;
  const PathSampler sampler(cfg);
  const std::size_t n = 40'000;
  const std::size_t half = 128, three_halves = 384;
  double s_half = 0, s_half_sq = 0, cross = 0, late_sq = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const auto path = sampler.sample(p);
    s_half += path[half];
    s_half_sq += path[half] * path[half];
    cross += path[0] * path[half];
    late_sq += path[three_halves] * path[three_halves];
  }
  EXPECT_NEAR(s_half_sq / n, 1.0, 0.04);
  EXPECT_NEAR(late_sq / n, 1.0, 0.04);
  EXPECT_NEAR(cross / n, 0.5, 0.03);
  EXPECT_NEAR(s_half / n, 0.0, 0.03);
}

TEST(Sampler, CommonRandomNumbersGiveMonotoneSurvival) {
  const PathConfig cfg = small_config(2.0);
  const PathSampler sampler(cfg);
  const auto low = barrier_on_grid(BarrierSpec::linear(1.5, 0.0, 2.0), cfg);
  const auto high = barrier_on_grid(BarrierSpec::one_change(1.5, 0.3, 0.1, 1, 1), cfg);
  for (std::size_t p = 0; p < 5'000; ++p) {
    if (sampler.survives(p, low)) EXPECT_TRUE(sampler.survives(p, high)) << p;
  }
  EXPECT_LE(simulate_survival(BarrierSpec::linear(1.5, 0.0, 2.0), cfg).survivors,
            simulate_survival(BarrierSpec::one_change(1.5, 0.3, 0.1, 1, 1), cfg).survivors);
  EXPECT_THROW(sampler.survives(0, std::vector<double>(3, 1.0)), DomainError);
}

TEST(BiasBound, ScalesWithGrid) {
  PathConfig cfg;
  cfg.grid_step = 1.0 / 2048.0;
  EXPECT_NEAR(bias_bound(cfg), kBiasConstant * std::sqrt(1.0 / 2048.0), 1e-15);
  double prev = bias_bound(cfg);
  for (double step : {1.0 / 4096, 1.0 / 65536, 1.0 / 1048576}) {
    cfg.grid_step = step;
    EXPECT_LT(bias_bound(cfg), prev);
    prev = bias_bound(cfg);
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Simulate, AgreesWithClosedFormWithinBand) {
  PathConfig cfg = small_config();
  cfg.paths = 100'000;
  cfg.grid_step = 1.0 / 512.0;
  cfg.threads = 0;
  const McEstimate est = simulate_survival(BarrierSpec::linear(1, 0, 1), cfg);
  const double exact = fpt_closed_T_le_1(1, 0, 1, 0);
  EXPECT_GE(est.probability, exact - 3 * est.std_error);  // discrete monitoring only overestimates survival
  EXPECT_LE(est.probability - exact, 3 * est.std_error + bias_bound(cfg));
}

TEST(Simulate, FinerGridReducesBias) {
  const double exact = fpt_closed_T_le_1(1, 0, 1, 0);
  PathConfig cfg = small_config();
  cfg.paths = 200'000;
  cfg.threads = 0;
  cfg.grid_step = 1.0 / 256.0;
  const double coarse = simulate_survival(BarrierSpec::linear(1, 0, 1), cfg).probability - exact;
  cfg.grid_step = 1.0 / 1024.0;
  const double fine = simulate_survival(BarrierSpec::linear(1, 0, 1), cfg).probability - exact;
  EXPECT_LT(std::abs(fine), std::abs(coarse));
  EXPECT_LE(coarse, bias_bound(small_config()) + 0.004);
}
