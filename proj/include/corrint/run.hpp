#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "corrint/config.hpp"
#include "corrint/models.hpp"

namespace corrint {

enum ExitCode { kExitOk = 0, kExitError = 1, kExitNotConverged = 2 };

using ModelParams = std::map<std::string, double>;

int cmd_profile(double s_max, int grid, std::ostream& out);
int cmd_decompose(const std::string& model, const ModelParams& params, int grid, std::ostream& out);
int cmd_model_list(std::ostream& out);
int cmd_model_check(const std::string& model, const ModelParams& params, int per_axis,
                    std::ostream& out);

/// Post-run measurements stored under "analysis" in the run document.
nlohmann::json analyze_run(const ModelSpec& model, const LayeredMap& map, const RunReport& rep,
                           std::uint64_t seed);

struct ExtendResult {
  int status = kExitOk;
  nlohmann::json document;
};
/// Builds the model, iterates, writes every artifact named in `cfg`.
ExtendResult run_extend(const RunConfig& cfg, std::ostream& log);

struct TauSample {
  double tau = 0;
  double min_eig = 0, sup = 0;
  bool ok = false;
};
struct HomotopyCheck {
  double delta = 0, ell = 0, lambda = 0;
  int m = 0;
  double floor = 0;  // −δ²/(2m)
  bool tau0_exact = false, tau1_exact = false;
  std::size_t points = 0;
  std::vector<TauSample> taus;
  std::shared_ptr<LayeredMap> prev, stepped;
  CorrugationLayer layer;
};
/// First step of the first stage, then the homotopy H(τ,·) sampled at each τ.
HomotopyCheck homotopy_check(const ModelSpec& model, const RunConfig& cfg,
                             const std::vector<double>& taus, int points = 1000);
int cmd_homotopy(const RunConfig& cfg, const std::vector<double>& taus, std::ostream& out);

int cmd_verify_geodesic(const std::string& model, double rho, double R, std::ostream& out);
int cmd_verify_obstruction(double psi1, int n, std::ostream& out);

int cmd_export(const std::string& report, const std::string& obj, const std::string& csv, int grid,
               int level, std::ostream& out);

/// Export grid used when none is given: 4097 points on curves; on surfaces 65 per bounded axis
/// and 128 per periodic axis.
std::vector<int> default_export_grid(const ChartDomain& dom, int grid);

}  // namespace corrint
