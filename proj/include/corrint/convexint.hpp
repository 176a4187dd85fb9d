#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrint/decomposition.hpp"
#include "corrint/evaluation.hpp"
#include "corrint/sampling.hpp"

namespace corrint {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class LambdaCapExceeded : public std::runtime_error {
 public:
  explicit LambdaCapExceeded(double cap)
      : std::runtime_error("step: lambda cap exceeded before conditions held"), cap(cap) {}
  double cap;
};

class ShortnessLost : public std::runtime_error {
 public:
  ShortnessLost(const std::string& what, double eig) : std::runtime_error(what), eigenvalue(eig) {}
  double eigenvalue;
};

class StageCheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepParams {
  double delta = 0.5;
  std::optional<double> ell;
  double eps_step = 1.0;  // C⁰ budget ε/m
  int m = 1;
  double defect_sup = 1.0;  // stage-start sampled defect sup
  double lambda0 = 8.0;
  double lambda_factor = 2.0;
  double lambda_max = 1e10;
  ProbeSpec probe;
  std::uint64_t salt = 0;
  bool parallel = true;
};

struct LevelStats {
  double lambda = 0, r_sup = 0, c0 = 0, e_over_lambda = 0;
  bool ok_r = false, ok_c0 = false, ok_e = false;
};

struct StepRecord {
  int k = 0;
  int term = 0;
  Vec nu;
  double lambda = 0;
  double r_sup = 0, r_bound = 0;
  double c0 = 0, c0_bound = 0;
  double e_over_lambda = 0, e_bound = 0;
  double r0_sup = 0;
  std::vector<int> grid;
  int phases = 0;
  double spot_r_max = 0;
  double spot_backend_rel = 0;
  std::vector<LevelStats> ladder;
};

struct BinStats {
  double lo = 0, hi = 0;
  double sup = 0;
  double min_eig = std::numeric_limits<double>::infinity();
  std::size_t count = 0;
};

/// Sampled statistics of g − ∇uᵀ∇u and drift over the two-scale grid of the newest layer.
struct Survey {
  double sup = 0;
  double min_eig = std::numeric_limits<double>::infinity();
  std::vector<BinStats> bins;  // dyadic in distance to B (single bin without B)
  double dominance = -std::numeric_limits<double>::infinity();
  std::vector<double> coeff_sup;
  int m0 = 0;
  double c0_start = 0, c1_start = 0, c0_base = 0, c1_base = 0;
  double length = kNaN;  // closed curves only
  std::vector<int> grid;
  int phases = 1;

  /// sup over distance ≤ ell and min eigenvalue over distance ≥ ell/2.
  double sup_within(double ell) const;
  double min_eig_beyond(double ell) const;
};

struct ProbeResult {
  std::vector<LevelStats> levels;
  double r0_sup = 0, combo_sup = 0, e_sup = 0;
  std::vector<int> grid;
  int phases = 0;
};

struct StageRecord {
  int index = 0;
  double eps = 0;
  double ell = kNaN, ell0 = kNaN;
  double delta = 0;
  int m = 0, m0 = 0;
  double C = 0;
  double sup_before = 0, min_eig_before = 0;
  double sup_after = 0, min_eig_after = 0, min_eig_after_outside = kNaN;
  double shortness_floor = 0;
  double c0_drift = 0, c1_drift = 0, c1_bound = 0;
  bool c0_ok = false, metric_ok = false, c1_ok = false, short_ok = false;
  std::vector<StepRecord> steps;
};

struct StagePlan {
  std::optional<double> ell;
  double ell0 = kNaN;
  double delta = 0;
  int m = 0, m0 = 0;
  std::vector<int> terms;
  double sup = 0;
};

struct RunConfigCore {
  ProbeSpec probe;
  double lambda0 = 8.0;
  double lambda_factor = 2.0;
  double lambda_max = 1e10;
  bool parallel = true;
};

struct RunReport {
  double eps = 0, tol = 0;
  int max_stages = 0;
  ProbeSpec probe;
  std::vector<double> eps_schedule;
  Survey initial, final;
  std::vector<StageRecord> stages;
  bool converged = false;
  double c0_to_base = 0;
  std::size_t boundary_points = 0, boundary_mismatches = 0;
};

class NotConverged : public std::runtime_error {
 public:
  NotConverged(int stages, double achieved, std::shared_ptr<RunReport> report,
               std::shared_ptr<LayeredMap> map)
      : std::runtime_error("iteration did not reach the target defect"),
        stages(stages),
        achieved(achieved),
        report(std::move(report)),
        map(std::move(map)) {}
  int stages;
  double achieved;
  std::shared_ptr<RunReport> report;
  std::shared_ptr<LayeredMap> map;
};

/// Smallest admissible λ ≥ lambda keeping the layer periodic on periodic axes.
double admissible_lambda(const ChartDomain& dom, const Vec& nu, double lambda);

Survey survey_serial(const LayeredMap& m, int start_level, const ProbeSpec& spec,
                     std::uint64_t salt);
Survey survey_parallel(const LayeredMap& m, int start_level, const ProbeSpec& spec,
                       std::uint64_t salt);
Survey survey(const LayeredMap& m, int start_level, const ProbeSpec& spec, std::uint64_t salt,
              bool parallel = true);

/// Measures r(λ), |Γ·frame| and ‖E‖ for layer k of `m` at every λ in the ladder.
ProbeResult probe_serial(const LayeredMap& m, int k, const std::vector<double>& ladder,
                         const ProbeSpec& spec, std::uint64_t salt);
ProbeResult probe_parallel(const LayeredMap& m, int k, const std::vector<double>& ladder,
                           const ProbeSpec& spec, std::uint64_t salt);

CorrugationLayer make_layer(const LayeredMap& prev, int term, const Vec& nu, double delta,
                            std::optional<double> ell, int start_level);

std::pair<LayeredMap, StepRecord> do_step(const LayeredMap& prev, int term, const Vec& nu,
                                          int start_level, const StepParams& p);
/// The same measurement at a single prescribed λ (no acceptance test).
StepRecord measure_step(const LayeredMap& prev, int term, const Vec& nu, int start_level,
                        const StepParams& p, double lambda);

StagePlan plan_stage(const LayeredMap& u, const Survey& before, double eps,
                     std::optional<double> ell_prev);

struct StageOutcome {
  LayeredMap map;
  StageRecord record;
  Survey after;
};
StageOutcome do_stage(const LayeredMap& u, double eps, const Survey& before,
                      std::optional<double> ell_prev, int index, const RunConfigCore& cfg);

double eps_schedule(double eps, int k);

struct IterateResult {
  LayeredMap map;
  RunReport report;
};
IterateResult iterate(const LayeredMap& u0, double eps, double tol, int max_stages,
                      const RunConfigCore& cfg);

LayeredMap step_homotopy(const LayeredMap& prev, const CorrugationLayer& layer, double tau);

struct EmbeddingReport {
  double min_ratio_near = std::numeric_limits<double>::infinity();
  double min_ratio_far = std::numeric_limits<double>::infinity();
  double mu = 0;
  Vec worst_x, worst_y;
  std::size_t pairs = 0;
  bool pass = false;
};
EmbeddingReport check_embedding(const LayeredMap& m, double mu, const std::vector<int>& grid);

/// Bit-exact comparison of the map and its base on the B-face.
std::pair<std::size_t, std::size_t> boundary_mismatches(const LayeredMap& m, int per_axis);

}  // namespace corrint
