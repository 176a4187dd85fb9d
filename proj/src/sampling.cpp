#include "corrint/sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace corrint {

double unit_double(std::uint64_t bits) { return double(bits >> 11) * 0x1.0p-53; }

namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(salt),
                    std::uint32_t(salt >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

SlowGrid::SlowGrid(const LayeredMap& m, int level, const ProbeSpec& spec, std::uint64_t salt)
    : dom_(&m.domain()) {
  const int n = dom_->dim;
  auto rng = make_rng(spec.seed, salt);
  for (int i = 0; i < n; ++i) {
    double freq = 0.0;
    for (int k = 1; k <= level; ++k)
      freq = std::max(freq, m.layer(k).lambda * std::abs(m.layer(k).nu[i]));
    double need = std::ceil(spec.spp * freq * dom_->extent(i) / (2.0 * std::numbers::pi));
    int floor_n = dom_->is_periodic(i) ? spec.periodic_min : spec.slow_min;
    double c = std::max<double>(floor_n, need);
    if (c > spec.budget) throw std::runtime_error("probe budget exceeded");
    counts_.push_back((int)c);
    jitter_.push_back(unit_double(rng()));
    total_ *= (std::size_t)c;
  }
  if ((double)total_ > spec.budget) throw std::runtime_error("probe budget exceeded");
}

Vec SlowGrid::point(std::size_t idx) const {
  const int n = dom_->dim;
  Vec x(n);
  for (int i = 0; i < n; ++i) {
    std::size_t c = counts_[i];
    std::size_t j = idx % c;
    idx /= c;
    x[i] = dom_->lo[i] + dom_->extent(i) * ((double)j + jitter_[i]) / (double)c;
  }
  return x;
}

std::vector<double> phase_grid(int phases, std::uint64_t seed, std::uint64_t salt) {
  auto rng = make_rng(seed, salt ^ 0x9e3779b97f4a7c15ULL);
  double j = unit_double(rng());
  std::vector<double> th(phases);
  for (int p = 0; p < phases; ++p) th[p] = 2.0 * std::numbers::pi * (p + j) / phases;
  return th;
}

std::vector<Vec> random_points(const ChartDomain& dom, int count, std::uint64_t seed,
                               std::uint64_t salt) {
  auto rng = make_rng(seed, salt ^ 0x5851f42d4c957f2dULL);
  std::vector<Vec> pts;
  pts.reserve(count);
  for (int c = 0; c < count; ++c) {
    Vec x(dom.dim);
    for (int i = 0; i < dom.dim; ++i) x[i] = dom.lo[i] + dom.extent(i) * unit_double(rng());
    pts.push_back(x);
  }
  return pts;
}

}  // namespace corrint
