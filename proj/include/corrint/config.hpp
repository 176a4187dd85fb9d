#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "corrint/convexint.hpp"

namespace corrint {

/// Schema violation at a JSON pointer into the config document.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path(std::move(path)) {}
  std::string path;
};

constexpr int kMinSamplesPerPeriod = 8;

struct RunConfig {
  std::string model;
  std::map<std::string, double> params;
  double eps = 0.5;
  double tol = 0.01;
  int max_stages = 8;
  int spp = kMinSamplesPerPeriod;
  int phases = 16;
  std::uint64_t seed = 1;
  double lambda0 = 8.0;
  double lambda_factor = 2.0;
  double lambda_max = 1e10;
  std::string report, obj, csv, stages_csv;
  int export_grid = 0;  // 0: per-model default

  RunConfigCore core() const;
};

/// Reads a config document; unknown keys and type mismatches are errors.
RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const RunConfig& cfg);
/// Throws ConfigError naming the offending field.
void validate(const RunConfig& cfg);

}  // namespace corrint
