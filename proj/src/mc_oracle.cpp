#include "slepian/mc_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "slepian/errors.hpp"

namespace slepian {

namespace {

constexpr std::size_t kBlockPaths = 2048;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++; seeded per path from (seed, path) through splitmix64.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t sm = seed ^ (0x6a09e667f3bcc909ULL * (stream + 1));
    splitmix64(sm);
    sm ^= stream;
    for (auto& word : s_) word = splitmix64(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

bool near_integer(double v) { return std::abs(v - std::round(v)) <= 1e-9 * std::max(1.0, std::abs(v)); }

}  // namespace

void PathConfig::validate() const {
  if (paths < 10'000) throw DomainError("PathConfig: paths must be >= 1e4");
  if (!(grid_step > 0.0 && grid_step <= 1.0 / 256.0)) throw DomainError("PathConfig: grid_step must lie in (0, 1/256]");
  if (!near_integer(1.0 / grid_step)) throw DomainError("PathConfig: 1/grid_step must be an integer");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("PathConfig: horizon must be positive");
  if (!near_integer(horizon / grid_step)) throw DomainError("PathConfig: horizon must be a multiple of grid_step");
  if (start_mode == StartMode::Conditioned && !std::isfinite(x)) throw DomainError("PathConfig: x must be finite");
}

int PathConfig::steps_per_unit() const { return static_cast<int>(std::lround(1.0 / grid_step)); }

int PathConfig::horizon_steps() const { return static_cast<int>(std::lround(horizon / grid_step)); }

double bias_bound(const PathConfig& cfg) {
  if (!(cfg.grid_step > 0.0)) return 0.0;
  return kBiasConstant * std::sqrt(cfg.grid_step);
}

PathSampler::PathSampler(const PathConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const int n = cfg_.steps_per_unit();
  root_dt_ = std::sqrt(1.0 / n);
  bridge_pull_.resize(n);
  bridge_sd_.resize(n);
  for (int k = 0; k < n; ++k) {
    const double remaining = n - k;
    bridge_pull_[k] = 1.0 / remaining;
    bridge_sd_[k] = root_dt_ * std::sqrt((remaining - 1.0) / remaining);
  }
}

// Visits S_k = W(k dt) - W(k dt + 1) for k = 0, 1, ... until visit returns false.
// W on [0, 1] is a Brownian bridge from 0 to -S(0); later increments are independent.
template <typename Visit>
void PathSampler::walk(std::size_t path, Visit&& visit) const {
  Xoshiro256pp rng(cfg_.seed, path);
  boost::random::normal_distribution<double> normal;
  const int n = cfg_.steps_per_unit();
  const int steps = cfg_.horizon_steps();

  const double s0 = cfg_.start_mode == StartMode::Conditioned ? cfg_.x : normal(rng);
  const double target = -s0;

  thread_local std::vector<double> w;
  w.resize(static_cast<std::size_t>(n + steps) + 1);
  w[0] = 0.0;
  for (int k = 0; k < n - 1; ++k) {
    w[k + 1] = w[k] + (target - w[k]) * bridge_pull_[k] + bridge_sd_[k] * normal(rng);
  }
  w[n] = target;
  if (!visit(0, s0)) return;
  for (int k = 1; k <= steps; ++k) {
    w[k + n] = w[k + n - 1] + root_dt_ * normal(rng);
    if (!visit(k, w[k] - w[k + n])) return;
  }
}

std::vector<double> PathSampler::sample(std::size_t path) const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(cfg_.horizon_steps()) + 1);
  walk(path, [&](int, double s) {
    out.push_back(s);
    return true;
  });
  return out;
}

bool PathSampler::survives(std::size_t path, const std::vector<double>& barrier) const {
  if (barrier.size() != static_cast<std::size_t>(cfg_.horizon_steps()) + 1) {
    throw DomainError("PathSampler: barrier grid size does not match the configuration");
  }
  bool alive = true;
  walk(path, [&](int k, double s) {
    alive = s < barrier[static_cast<std::size_t>(k)];
    return alive;
  });
  return alive;
}

std::vector<double> barrier_on_grid(const BarrierSpec& barrier, const PathConfig& cfg) {
  const int steps = cfg.horizon_steps();
  std::vector<double> out(static_cast<std::size_t>(steps) + 1);
  const double horizon = barrier.horizon();
  for (int k = 0; k <= steps; ++k) out[k] = barrier.evaluate(std::min(horizon, k * cfg.grid_step));
  return out;
}

McEstimate simulate_survival(const BarrierSpec& barrier, const PathConfig& cfg) {
  cfg.validate();
  if (std::abs(cfg.horizon - barrier.horizon()) > 1e-9 * std::max(1.0, barrier.horizon())) {
    throw DomainError("simulate_survival: PathConfig horizon must equal the barrier horizon");
  }
  const double draws = static_cast<double>(cfg.paths) * (cfg.horizon + 1.0) / cfg.grid_step;
  if (draws > kMaxNormalDraws) {
    throw ResourceError("simulate_survival: " + std::to_string(draws) +
                        " normal draws exceed the cap of 2e11; reduce paths or use a coarser grid_step");
  }
  const PathSampler sampler(cfg);
  const std::vector<double> grid = barrier_on_grid(barrier, cfg);

  const std::size_t blocks = (cfg.paths + kBlockPaths - 1) / kBlockPaths;
  std::vector<std::size_t> survivors(blocks, 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t b = next++; b < blocks; b = next++) {
      const std::size_t first = b * kBlockPaths;
      const std::size_t last = std::min(cfg.paths, first + kBlockPaths);
      std::size_t count = 0;
      for (std::size_t p = first; p < last; ++p) count += sampler.survives(p, grid) ? 1 : 0;
      survivors[b] = count;
    }
  };
  unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  McEstimate est;
  for (std::size_t c : survivors) est.survivors += c;
  est.paths = cfg.paths;
  est.probability = static_cast<double>(est.survivors) / static_cast<double>(cfg.paths);
  est.std_error = std::sqrt(est.probability * (1.0 - est.probability) / static_cast<double>(cfg.paths));
  est.grid_step = cfg.grid_step;
  est.seed = cfg.seed;
  return est;
}

}  // namespace slepian
