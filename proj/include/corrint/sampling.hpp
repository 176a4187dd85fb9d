#pragma once

#include <cstdint>
#include <vector>

#include "corrint/evaluation.hpp"

namespace corrint {

/// Two-scale probe density: slow positions resolve earlier layers at `spp` samples per
/// period, and the phase of the newest layer is sampled at `phases` jittered values.
struct ProbeSpec {
  int spp = 8;
  int phases = 16;
  int periodic_min = 8;
  int slow_min = 256;
  std::uint64_t seed = 1;
  double budget = 2e7;  // cap on slow positions per pass
};

/// Uniform double in [0, 1) from the top 53 bits.
double unit_double(std::uint64_t bits);

class SlowGrid {
 public:
  /// Grid resolving layers 1..level of `m`, jittered from (seed, salt).
  SlowGrid(const LayeredMap& m, int level, const ProbeSpec& spec, std::uint64_t salt);

  std::size_t size() const { return total_; }
  const std::vector<int>& counts() const { return counts_; }
  Vec point(std::size_t idx) const;

 private:
  const ChartDomain* dom_;
  std::vector<int> counts_;
  std::vector<double> jitter_;
  std::size_t total_ = 1;
};

std::vector<double> phase_grid(int phases, std::uint64_t seed, std::uint64_t salt);

/// Random points in the chart box, deterministic in (seed, salt).
std::vector<Vec> random_points(const ChartDomain& dom, int count, std::uint64_t seed,
                               std::uint64_t salt);

}  // namespace corrint
