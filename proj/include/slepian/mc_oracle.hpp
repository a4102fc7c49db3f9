#ifndef SLEPIAN_MC_ORACLE_HPP
#define SLEPIAN_MC_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "slepian/barrier.hpp"

namespace slepian {

enum class StartMode {
  Conditioned,     // S(0) = x exactly
  StandardNormal,  // S(0) ~ N(0, 1)
};

struct PathConfig {
  std::size_t paths = 1'000'000;
  double grid_step = 1.0 / 2048.0;
  std::uint64_t seed = 1;
  double horizon = 1.0;
  StartMode start_mode = StartMode::Conditioned;
  double x = 0.0;        // used in Conditioned mode
  unsigned threads = 0;  // 0: hardware concurrency

  /// Checks paths >= 1e4, grid_step <= 1/256 with 1/grid_step integral,
  /// horizon a positive multiple of grid_step.
  void validate() const;
  /// Grid points per unit time.
  int steps_per_unit() const;
  /// Grid intervals on [0, horizon].
  int horizon_steps() const;
};

struct McEstimate {
  double probability = 0.0;
  double std_error = 0.0;
  std::size_t paths = 0;
  std::size_t survivors = 0;
  double grid_step = 0.0;
  std::uint64_t seed = 0;
};

/// Upper limit on standard normal draws for one simulate_survival call.
inline constexpr double kMaxNormalDraws = 2e11;

/// Empirical allowance for discrete-monitoring bias: c * sqrt(grid_step).
inline constexpr double kBiasConstant = 0.5;
double bias_bound(const PathConfig& cfg);

/// Generates S on the grid 0, dt, ..., horizon for individual paths. The
/// random stream of a path depends only on (seed, path index), so any two
/// barriers evaluated with the same sampler see common random numbers.
class PathSampler {
 public:
  explicit PathSampler(const PathConfig& cfg);

  /// Full path S(k dt), k = 0..horizon_steps.
  std::vector<double> sample(std::size_t path) const;

  /// true when S(k dt) < barrier[k] at every grid point; stops at the first crossing.
  bool survives(std::size_t path, const std::vector<double>& barrier) const;

  const PathConfig& config() const { return cfg_; }

 private:
  template <typename Visit>
  void walk(std::size_t path, Visit&& visit) const;

  PathConfig cfg_;
  double root_dt_ = 0.0;
  std::vector<double> bridge_pull_;  // 1 / (n - k)
  std::vector<double> bridge_sd_;    // sqrt(dt (n - k - 1) / (n - k))
};

/// Barrier heights on the sampler's grid.
std::vector<double> barrier_on_grid(const BarrierSpec& barrier, const PathConfig& cfg);

/// Fraction of paths with S(t_k) < barrier(t_k) at every grid point t_k in [0, horizon].
/// cfg.horizon must equal the barrier's horizon. Deterministic for any thread count.
McEstimate simulate_survival(const BarrierSpec& barrier, const PathConfig& cfg);

}  // namespace slepian

#endif  // SLEPIAN_MC_ORACLE_HPP
