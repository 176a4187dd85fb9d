#include "corrint/config.hpp"

#include <cmath>
#include <set>

namespace corrint {

namespace {

using nlohmann::json;

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<int>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

}  // namespace

RunConfigCore RunConfig::core() const {
  RunConfigCore c;
  c.probe.spp = spp;
  c.probe.phases = phases;
  c.probe.seed = seed;
  c.lambda0 = lambda0;
  c.lambda_factor = lambda_factor;
  c.lambda_max = lambda_max;
  return c;
}

RunConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  static const std::set<std::string> known = {
      "model",  "params",      "eps",        "tol",       "max_stages", "spp",
      "phases", "seed",        "lambda0",    "lambda_factor", "lambda_max", "export"};
  for (auto& [key, _] : doc.items())
    if (!known.count(key)) throw ConfigError("/" + key, "unknown key");

  RunConfig c;
  if (!doc.contains("model")) throw ConfigError("/model", "required");
  c.model = text(doc["model"], "/model");
  if (doc.contains("params")) {
    const json& p = doc["params"];
    if (!p.is_object()) throw ConfigError("/params", "expected an object");
    for (auto& [key, v] : p.items()) c.params[key] = number(v, "/params/" + key);
  }
  if (doc.contains("eps")) c.eps = number(doc["eps"], "/eps");
  if (doc.contains("tol")) c.tol = number(doc["tol"], "/tol");
  if (doc.contains("max_stages")) c.max_stages = integer(doc["max_stages"], "/max_stages");
  if (doc.contains("spp")) c.spp = integer(doc["spp"], "/spp");
  if (doc.contains("phases")) c.phases = integer(doc["phases"], "/phases");
  if (doc.contains("seed")) {
    const auto& sd = doc["seed"];
    if (!sd.is_number_unsigned() && !(sd.is_number_integer() && sd.get<std::int64_t>() >= 0))
      throw ConfigError("/seed", "expected a non-negative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("lambda0")) c.lambda0 = number(doc["lambda0"], "/lambda0");
  if (doc.contains("lambda_factor")) c.lambda_factor = number(doc["lambda_factor"], "/lambda_factor");
  if (doc.contains("lambda_max")) c.lambda_max = number(doc["lambda_max"], "/lambda_max");
  if (doc.contains("export")) {
    const json& e = doc["export"];
    if (!e.is_object()) throw ConfigError("/export", "expected an object");
    for (auto& [key, v] : e.items()) {
      std::string path = "/export/" + key;
      if (key == "report") c.report = text(v, path);
      else if (key == "obj") c.obj = text(v, path);
      else if (key == "csv") c.csv = text(v, path);
      else if (key == "stages_csv") c.stages_csv = text(v, path);
      else if (key == "grid") c.export_grid = integer(v, path);
      else throw ConfigError(path, "unknown key");
    }
  }
  validate(c);
  return c;
}

json config_to_json(const RunConfig& c) {
  json p = json::object();
  for (auto& [k, v] : c.params) p[k] = v;
  json doc = {{"model", c.model},
              {"params", p},
              {"eps", c.eps},
              {"tol", c.tol},
              {"max_stages", c.max_stages},
              {"spp", c.spp},
              {"phases", c.phases},
              {"seed", c.seed},
              {"lambda0", c.lambda0},
              {"lambda_factor", c.lambda_factor},
              {"lambda_max", c.lambda_max}};
  return doc;
}

void validate(const RunConfig& c) {
  if (c.model.empty()) throw ConfigError("/model", "required");
  auto positive = [](double v, const char* path) {
    if (!(v > 0) || !std::isfinite(v)) throw ConfigError(path, "must be positive and finite");
  };
  positive(c.eps, "/eps");
  positive(c.tol, "/tol");
  positive(c.lambda0, "/lambda0");
  positive(c.lambda_max, "/lambda_max");
  if (!(c.lambda_factor > 1)) throw ConfigError("/lambda_factor", "must exceed 1");
  if (c.lambda_max < c.lambda0) throw ConfigError("/lambda_max", "must be at least lambda0");
  if (c.max_stages < 0) throw ConfigError("/max_stages", "must be non-negative");
  if (c.spp < kMinSamplesPerPeriod)
    throw ConfigError("/spp", "probe density below 8 samples per period");
  if (c.phases < 1) throw ConfigError("/phases", "must be at least 1");
  if (c.export_grid < 0) throw ConfigError("/export/grid", "must be non-negative");
}

}  // namespace corrint
