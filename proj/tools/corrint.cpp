#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <omp.h>

#include "CLI11.hpp"

#include "corrint/config.hpp"
#include "corrint/run.hpp"

using namespace corrint;

namespace {

/// Model parameter flags shared by the subcommands that build a model.
struct ModelFlags {
  std::string name;
  std::optional<double> a, eps_geom, side, theta_max, eps_band, c, psi1, n;

  void add(CLI::App* app) {
    app->add_option("--model,--name", name, "model name (see `model --list`)");
    app->add_option("--a", a, "coin axis ratio");
    app->add_option("--eps-geom", eps_geom, "sphere-band deformation parameter");
    app->add_option("--side", side, "sphere-band side, +1 or -1");
    app->add_option("--theta-max", theta_max, "sphere-band chart width");
    app->add_option("--eps-band", eps_band, "collar width of normal-data models");
    app->add_option("--c", c, "Dirichlet conformal defect amplitude");
    app->add_option("--psi1", psi1, "psi'(1) of the warped metric");
    app->add_option("--n", n, "dimension of the psi model");
  }
  void apply(ModelParams& p) const {
    auto put = [&](const char* k, const std::optional<double>& v) {
      if (v) p[k] = *v;
    };
    put("a", a);
    put("eps_geom", eps_geom);
    put("side", side);
    put("theta_max", theta_max);
    put("eps_band", eps_band);
    put("c", c);
    put("psi1", psi1);
    put("n", n);
  }
};

/// Run flags that override keys of the config document.
struct RunFlags {
  std::string config;
  std::optional<double> eps, tol, lambda0, lambda_max;
  std::optional<int> stages, spp, phases, grid;
  std::optional<std::uint64_t> seed;
  std::string report, obj, csv, stages_csv;

  void add(CLI::App* app) {
    app->add_option("--config", config, "JSON config document")->check(CLI::ExistingFile);
    app->add_option("--eps", eps, "C0 budget");
    app->add_option("--tol", tol, "target defect");
    app->add_option("--stages", stages, "stage cap");
    app->add_option("--spp", spp, "probe samples per period (>= 8)");
    app->add_option("--phases", phases, "probe phases per slow position");
    app->add_option("--seed", seed, "probe jitter seed");
    app->add_option("--lambda0", lambda0, "first trial frequency");
    app->add_option("--lambda-max", lambda_max, "frequency cap");
    app->add_option("--report", report, "JSON run report");
    app->add_option("--obj", obj, "OBJ export of the final map");
    app->add_option("--csv", csv, "CSV export (x, u, defect)");
    app->add_option("--stages-csv", stages_csv, "per-step CSV");
    app->add_option("--grid", grid, "export grid per axis");
  }

  RunConfig build(const ModelFlags& mf) const {
    nlohmann::json doc = nlohmann::json::object();
    if (!config.empty()) {
      std::ifstream is(config);
      try {
        doc = nlohmann::json::parse(is);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", std::string("config is not valid JSON: ") + e.what());
      }
      if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
    }
    if (!mf.name.empty()) doc["model"] = mf.name;
    ModelParams p;
    mf.apply(p);
    for (auto& [k, v] : p) doc["params"][k] = v;
    auto put = [&](const char* k, const auto& v) {
      if (v) doc[k] = *v;
    };
    put("eps", eps);
    put("tol", tol);
    put("max_stages", stages);
    put("spp", spp);
    put("phases", phases);
    put("seed", seed);
    put("lambda0", lambda0);
    put("lambda_max", lambda_max);
    auto exp = [&](const char* k, const std::string& v) {
      if (!v.empty()) doc["export"][k] = v;
    };
    exp("report", report);
    exp("obj", obj);
    exp("csv", csv);
    exp("stages_csv", stages_csv);
    if (grid) doc["export"]["grid"] = *grid;
    return config_from_json(doc);
  }
};

}  // namespace

int main(int argc, char** argv) {
  if (const char* t = std::getenv("CORRINT_THREADS")) {
    int n = std::atoi(t);
    if (n > 0) omp_set_num_threads(n);
  }

  CLI::App app{"corrint: convex integration for one-sided isometric C1 extensions"};
  app.require_subcommand(1);

  auto* prof = app.add_subcommand("profile", "tabulate the corrugation Gamma(s, t)");
  double s_max = 5.0;
  int prof_grid = 32;
  std::string prof_out;
  prof->add_option("--s-max", s_max, "largest amplitude s");
  prof->add_option("--grid", prof_grid, "samples per axis");
  prof->add_option("--out", prof_out, "CSV file (default stdout)");

  auto* dec = app.add_subcommand("decompose", "decompose a model defect into primitive metrics");
  ModelFlags dec_model;
  dec_model.add(dec);
  int dec_grid = 33;
  dec->add_option("--grid", dec_grid, "samples per axis");

  auto* mod = app.add_subcommand("model", "list or validate models");
  ModelFlags mod_model;
  mod_model.add(mod);
  bool list = false, check = false;
  int mod_grid = 33;
  mod->add_flag("--list", list, "list model names");
  mod->add_flag("--check", check, "print the sampled defect validation table");
  mod->add_option("--grid", mod_grid, "samples per axis");

  auto* ext = app.add_subcommand("extend", "iterate stages until the defect reaches tol");
  ModelFlags ext_model;
  RunFlags ext_run;
  ext_model.add(ext);
  ext_run.add(ext);

  auto* hom = app.add_subcommand("homotopy", "sample the single-step homotopy H(tau, .)");
  ModelFlags hom_model;
  RunFlags hom_run;
  std::vector<double> taus;
  hom_model.add(hom);
  hom_run.add(hom);
  hom->add_option("--tau", taus, "homotopy parameters in [0, 1]")->check(CLI::Range(0.0, 1.0));

  auto* ver = app.add_subcommand("verify", "geodesic expansion and obstruction checks");
  std::string lemma, geo_model = "sphere";
  bool obstruction = false;
  double rho = 0.6, R = 1.0, vpsi1 = 3.0;
  int vn = 2;
  ver->add_option("--lemma", lemma, "lemma to verify (geodesic)");
  ver->add_option("--model", geo_model, "sphere or plane");
  ver->add_option("--rho", rho, "polar angle of the latitude circle");
  ver->add_option("--R", R, "radius of the Euclidean circle");
  ver->add_flag("--obstruction", obstruction, "run the psi-metric obstruction example");
  ver->add_option("--psi1", vpsi1, "psi'(1)");
  ver->add_option("--n", vn, "dimension (2 or 3)");

  auto* exp = app.add_subcommand("export", "rebuild a map from its run report and export it");
  std::string exp_report, exp_obj, exp_csv;
  int exp_grid = 0, exp_level = -1;
  exp->add_option("--report", exp_report, "run report JSON")->required()->check(CLI::ExistingFile);
  exp->add_option("--obj", exp_obj, "OBJ output");
  exp->add_option("--csv", exp_csv, "CSV output");
  exp->add_option("--grid", exp_grid, "samples per axis");
  exp->add_option("--level", exp_level, "number of layers to include (-1: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*prof) {
      if (prof_out.empty()) return cmd_profile(s_max, prof_grid, std::cout);
      std::ofstream os(prof_out);
      if (!os) throw std::runtime_error("cannot open " + prof_out);
      return cmd_profile(s_max, prof_grid, os);
    }
    if (*dec) {
      if (dec_model.name.empty()) throw ConfigError("/model", "required");
      ModelParams p;
      dec_model.apply(p);
      return cmd_decompose(dec_model.name, p, dec_grid, std::cout);
    }
    if (*mod) {
      if (list) return cmd_model_list(std::cout);
      if (mod_model.name.empty()) throw ConfigError("/model", "required");
      ModelParams p;
      mod_model.apply(p);
      if (!check) {
        std::cout << "nothing to do; pass --check\n";
        return kExitOk;
      }
      return cmd_model_check(mod_model.name, p, mod_grid, std::cout);
    }
    if (*ext) {
      RunConfig cfg = ext_run.build(ext_model);
      return run_extend(cfg, std::cerr).status;
    }
    if (*hom) {
      RunConfig cfg = hom_run.build(hom_model);
      if (taus.empty()) taus = {0.0, 0.25, 0.5, 0.75, 1.0};
      return cmd_homotopy(cfg, taus, std::cout);
    }
    if (*ver) {
      if (obstruction) return cmd_verify_obstruction(vpsi1, vn, std::cout);
      if (lemma == "geodesic") return cmd_verify_geodesic(geo_model, rho, R, std::cout);
      throw std::invalid_argument("verify: pass --lemma geodesic or --obstruction");
    }
    if (*exp) return cmd_export(exp_report, exp_obj, exp_csv, exp_grid, exp_level, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
