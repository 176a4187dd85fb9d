#pragma once

#include <string>

#include "json.hpp"

#include "corrint/config.hpp"
#include "corrint/convexint.hpp"
#include "corrint/models.hpp"

namespace corrint {

constexpr const char* kReportSchema = "corrint.run-report/1";

nlohmann::json to_json(const Survey& s);
nlohmann::json to_json(const StepRecord& r);
nlohmann::json to_json(const StageRecord& r);
nlohmann::json to_json(const RunReport& r);
nlohmann::json to_json(const EmbeddingReport& r);
/// Parameters of every layer of `m`, enough to rebuild it on top of the model base.
nlohmann::json layers_json(const LayeredMap& m);

/// Full run document. Contains no timings or file paths, so equal runs give equal bytes.
nlohmann::json run_document(const RunConfig& cfg, const ModelSpec& model, const RunReport& rep,
                            const LayeredMap& map);
std::string dump(const nlohmann::json& doc);

/// Reconstructs the final map of a run document.
LayeredMap rebuild_map(const nlohmann::json& doc);
ModelSpec rebuild_model(const nlohmann::json& doc);

}  // namespace corrint
