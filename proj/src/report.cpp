#include "corrint/report.hpp"

#include <cmath>
#include <stdexcept>

namespace corrint {

using nlohmann::json;

namespace {

json vec(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec to_vec(const json& a) {
  Vec v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
  return v;
}

json level_json(const LevelStats& l) {
  return {{"lambda", l.lambda},   {"r_sup", l.r_sup}, {"c0", l.c0},
          {"e_over_lambda", l.e_over_lambda}, {"ok_r", l.ok_r}, {"ok_c0", l.ok_c0},
          {"ok_e", l.ok_e}};
}

}  // namespace

json to_json(const Survey& s) {
  json bins = json::array();
  for (const auto& b : s.bins) {
    if (b.count == 0) continue;
    bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"sup", b.sup}, {"min_eig", b.min_eig},
                    {"count", b.count}});
  }
  return {{"sup", s.sup},
          {"min_eig", s.min_eig},
          {"bins", bins},
          {"dominance", s.dominance},
          {"coeff_sup", s.coeff_sup},
          {"m0", s.m0},
          {"c0_start", s.c0_start},
          {"c1_start", s.c1_start},
          {"c0_base", s.c0_base},
          {"c1_base", s.c1_base},
          {"length", s.length},
          {"grid", s.grid},
          {"phases", s.phases}};
}

json to_json(const StepRecord& r) {
  json ladder = json::array();
  for (const auto& l : r.ladder) ladder.push_back(level_json(l));
  return {{"k", r.k},
          {"term", r.term},
          {"nu", vec(r.nu)},
          {"lambda", r.lambda},
          {"r_sup", r.r_sup},
          {"r_bound", r.r_bound},
          {"c0", r.c0},
          {"c0_bound", r.c0_bound},
          {"e_over_lambda", r.e_over_lambda},
          {"e_bound", r.e_bound},
          {"r0_sup", r.r0_sup},
          {"grid", r.grid},
          {"phases", r.phases},
          {"spot_r_max", r.spot_r_max},
          {"spot_backend_rel", r.spot_backend_rel},
          {"ladder", ladder}};
}

json to_json(const StageRecord& r) {
  json steps = json::array();
  for (const auto& s : r.steps) steps.push_back(to_json(s));
  return {{"index", r.index},
          {"eps", r.eps},
          {"ell", r.ell},
          {"ell0", r.ell0},
          {"delta", r.delta},
          {"m", r.m},
          {"m0", r.m0},
          {"C", r.C},
          {"sup_before", r.sup_before},
          {"min_eig_before", r.min_eig_before},
          {"sup_after", r.sup_after},
          {"min_eig_after", r.min_eig_after},
          {"min_eig_after_outside", r.min_eig_after_outside},
          {"shortness_floor", r.shortness_floor},
          {"c0_drift", r.c0_drift},
          {"c1_drift", r.c1_drift},
          {"c1_bound", r.c1_bound},
          {"c0_ok", r.c0_ok},
          {"metric_ok", r.metric_ok},
          {"c1_ok", r.c1_ok},
          {"short_ok", r.short_ok},
          {"steps", steps}};
}

json to_json(const RunReport& r) {
  json stages = json::array();
  for (const auto& s : r.stages) stages.push_back(to_json(s));
  return {{"eps", r.eps},
          {"tol", r.tol},
          {"max_stages", r.max_stages},
          {"probe",
           {{"spp", r.probe.spp},
            {"phases", r.probe.phases},
            {"periodic_min", r.probe.periodic_min},
            {"slow_min", r.probe.slow_min},
            {"seed", r.probe.seed},
            {"budget", r.probe.budget}}},
          {"eps_schedule", r.eps_schedule},
          {"initial", to_json(r.initial)},
          {"stages", stages},
          {"final", to_json(r.final)},
          {"converged", r.converged},
          {"c0_to_base", r.c0_to_base},
          {"boundary_points", r.boundary_points},
          {"boundary_mismatches", r.boundary_mismatches}};
}

json to_json(const EmbeddingReport& r) {
  return {{"min_ratio_near", r.min_ratio_near},
          {"min_ratio_far", r.min_ratio_far},
          {"mu", r.mu},
          {"worst_x", vec(r.worst_x)},
          {"worst_y", vec(r.worst_y)},
          {"pairs", r.pairs},
          {"pass", r.pass}};
}

json layers_json(const LayeredMap& m) {
  json a = json::array();
  for (int k = 1; k <= m.levels(); ++k) {
    const CorrugationLayer& L = m.layer(k);
    a.push_back({{"lambda", L.lambda},
                 {"nu", vec(L.nu)},
                 {"sqrt_one_minus_delta", L.sqrt_one_minus_delta},
                 {"ell", L.cutoff ? json(L.cutoff->ell) : json(nullptr)},
                 {"tau_scale", L.tau_scale},
                 {"start_level", L.start_level},
                 {"term", L.term}});
  }
  return a;
}

json run_document(const RunConfig& cfg, const ModelSpec& model, const RunReport& rep,
                  const LayeredMap& map) {
  json info = json::object();
  for (auto& [k, v] : model.info) info[k] = v;
  return {{"schema", kReportSchema},
          {"config", config_to_json(cfg)},
          {"model", {{"name", model.name}, {"info", info}, {"warnings", model.warnings}}},
          {"run", to_json(rep)},
          {"layers", layers_json(map)}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

ModelSpec rebuild_model(const json& doc) {
  if (!doc.is_object() || doc.value("schema", "") != std::string(kReportSchema))
    throw std::invalid_argument("not a run report of schema " + std::string(kReportSchema));
  RunConfig cfg = config_from_json(doc.at("config"));
  return model_by_name(cfg.model, cfg.params);
}

LayeredMap rebuild_map(const json& doc) {
  LayeredMap m = rebuild_model(doc).map();
  for (const json& l : doc.at("layers")) {
    std::optional<double> ell;
    if (!l.at("ell").is_null()) ell = l.at("ell").get<double>();
    double sq = l.at("sqrt_one_minus_delta").get<double>();
    CorrugationLayer L = make_layer(m, l.at("term").get<int>(), to_vec(l.at("nu")), 1.0 - sq * sq,
                                    ell, l.at("start_level").get<int>());
    L.sqrt_one_minus_delta = sq;
    L.lambda = l.at("lambda").get<double>();
    L.tau_scale = l.at("tau_scale").get<double>();
    m = m.with_layer(std::move(L));
  }
  return m;
}

}  // namespace corrint
