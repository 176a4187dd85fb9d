#include "corrint/run.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "corrint/analysis.hpp"
#include "corrint/corrugation.hpp"
#include "corrint/decomposition.hpp"
#include "corrint/export.hpp"
#include "corrint/report.hpp"
#include "corrint/sampling.hpp"

namespace corrint {

using nlohmann::json;

namespace {

void write_file(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  fn(os);
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::string vec_str(const Vec& v) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

bool same_bits(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

bool same_bits(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

void write_artifacts(const RunConfig& cfg, const LayeredMap& map, const RunReport& rep,
                     const json& doc) {
  const ChartDomain& dom = map.domain();
  auto grid = default_export_grid(dom, cfg.export_grid);
  if (!cfg.report.empty()) write_file(cfg.report, [&](std::ostream& os) { os << dump(doc); });
  if (!cfg.obj.empty())
    write_file(cfg.obj, [&](std::ostream& os) {
      if (dom.dim == 1)
        write_obj_curve(os, map, grid[0]);
      else
        write_obj_surface(os, map, grid);
    });
  if (!cfg.csv.empty()) write_file(cfg.csv, [&](std::ostream& os) { write_grid_csv(os, map, grid); });
  if (!cfg.stages_csv.empty())
    write_file(cfg.stages_csv, [&](std::ostream& os) { write_stages_csv(os, rep); });
}

}  // namespace

std::vector<int> default_export_grid(const ChartDomain& dom, int grid) {
  std::vector<int> g(dom.dim);
  for (int a = 0; a < dom.dim; ++a) {
    if (grid > 0)
      g[a] = grid;
    else if (dom.dim == 1)
      g[a] = 4097;
    else
      g[a] = dom.is_periodic(a) ? 128 : 65;
    if (dom.is_periodic(a) && grid > 0) g[a] = std::max(grid, 3);
  }
  return g;
}

int cmd_profile(double s_max, int grid, std::ostream& out) {
  if (!(s_max >= 0) || grid < 2) throw std::invalid_argument("profile: need s_max >= 0 and grid >= 2");
  out << "s,t,gamma1,gamma2,dt_gamma1,dt_gamma2\n" << std::setprecision(17);
  for (int i = 0; i < grid; ++i) {
    double s = s_max * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      double t = 2 * std::numbers::pi * j / (grid - 1);
      Pair g = gamma(s, t), d = gamma_dt(s, t);
      out << s << ',' << t << ',' << g.first << ',' << g.second << ',' << d.first << ','
          << d.second << '\n';
    }
  }
  return kExitOk;
}

int cmd_decompose(const std::string& model, const ModelParams& params, int grid, std::ostream& out) {
  ModelSpec ms = model_by_name(model, params);
  LayeredMap u = ms.map();
  SymMatField D = defect_field(u, ms.metric);
  GridSpec spec{std::vector<int>(ms.domain.dim, grid)};
  PrimitiveDecomposition dec = decompose_fixed(D, ms.domain, spec);
  std::vector<double> sup(dec.terms.size(), 0.0);
  double resid = 0.0;
  spec.for_each(ms.domain, [&](const Vec& x) {
    Mat d = D(x);
    for (std::size_t k = 0; k < dec.terms.size(); ++k)
      sup[k] = std::max(sup[k], dec.terms[k].coeff(x));
    resid = std::max(resid, (reconstruct(dec, x) - d).cwiseAbs().maxCoeff());
  });
  out << "model " << ms.name << ", n = " << dec.dim << ", m = " << dec.m
      << ", m0_bound = " << dec.m0_bound << "\n";
  out << "term  direction            sup a^2\n";
  for (std::size_t k = 0; k < dec.terms.size(); ++k)
    out << std::setw(4) << k << "  " << std::setw(20) << std::left << vec_str(dec.terms[k].nu)
        << std::right << ' ' << sup[k] << (dec.active.size() > k && !dec.active[k] ? "  (inactive)" : "")
        << "\n";
  out << "max reconstruction residual " << resid << "\n";
  return kExitOk;
}

int cmd_model_list(std::ostream& out) {
  for (const auto& n : model_names()) out << n << "\n";
  return kExitOk;
}

int cmd_model_check(const std::string& model, const ModelParams& params, int per_axis,
                    std::ostream& out) {
  ModelSpec ms = model_by_name(model, params);
  DefectCheck c = check_model(ms, per_axis);
  out << "model            " << ms.name << "\n";
  for (auto& [k, v] : ms.info) out << std::left << std::setw(17) << k << std::right << v << "\n";
  out << "samples          " << c.samples << "\n";
  out << "max |D| on B     " << c.max_on_boundary << "\n";
  out << "min eig          " << c.min_eig << "\n";
  out << "min eig interior " << c.min_eig_interior << "\n";
  out << "closed-form err  " << c.max_closed_form_error << "\n";
  for (const auto& w : ms.warnings) out << "warning: " << w << "\n";
  bool ok = c.min_eig >= -1e-10 && c.max_on_boundary <= 1e-10;
  out << "verdict          " << (ok ? "adapted short map" : "defect check failed") << "\n";
  return ok ? kExitOk : kExitError;
}

json analyze_run(const ModelSpec& model, const LayeredMap& map, const RunReport& rep,
                 std::uint64_t seed) {
  json a = json::object();
  const ChartDomain& dom = map.domain();
  if (dom.dim == 1 && dom.is_periodic(0)) {
    auto pts = random_points(dom, 20000, seed, 91);
    std::vector<double> speed(pts.size()), ref(pts.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (long long i = 0; i < (long long)pts.size(); ++i) {
      speed[i] = map.jacobian(pts[i]).col(0).norm();
      ref[i] = std::sqrt(map.metric()(pts[i])(0, 0));
    }
    double s = 0, r = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      s += speed[i];
      r += ref[i];
    }
    a["length_mc"] = s * dom.extent(0) / pts.size();
    a["length_intrinsic"] = r * dom.extent(0) / pts.size();
    a["length_survey"] = rep.final.length;
  }
  if (dom.boundary_axis) {
    json b = {{"points", rep.boundary_points}, {"mismatches", rep.boundary_mismatches}};
    if (model.name == "sphere-band") {
      double err = 0;
      Vec x(2);
      for (int i = 0; i < 4096; ++i) {
        x << dom.lo[0], dom.lo[1] + dom.extent(1) * i / 4096.0;
        Vec u = map.value(x);
        err = std::max({err, std::abs(std::hypot(u[0], u[1]) - 1.0), std::abs(u[2])});
      }
      b["unit_circle_error"] = err;
    }
    a["boundary"] = b;
  }
  if (dom.dim == 2 && map.q() == 3) a["embedding"] = to_json(check_embedding(map, 0.25, {24, 24}));
  return a;
}

ExtendResult run_extend(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  ExtendResult res;
  ModelSpec model = model_by_name(cfg.model, cfg.params);
  for (const auto& w : model.warnings) log << "warning: " << w << "\n";
  LayeredMap u0 = model.map();
  RunReport rep;
  std::shared_ptr<LayeredMap> fin;
  try {
    IterateResult r = iterate(u0, cfg.eps, cfg.tol, cfg.max_stages, cfg.core());
    rep = std::move(r.report);
    fin = std::make_shared<LayeredMap>(std::move(r.map));
  } catch (const NotConverged& nc) {
    rep = *nc.report;
    fin = nc.map;
    res.status = kExitNotConverged;
    log << "not converged after " << nc.stages << " stages, defect " << nc.achieved << "\n";
  }
  res.document = run_document(cfg, model, rep, *fin);
  res.document["analysis"] = analyze_run(model, *fin, rep, cfg.seed);
  for (const auto& s : rep.stages) {
    log << "stage " << s.index << ": eps " << s.eps << ", delta " << s.delta << ", m " << s.m
        << ", defect " << s.sup_before << " -> " << s.sup_after << "\n";
    for (const auto& st : s.steps)
      log << "  step " << st.k << ": lambda " << st.lambda << ", r " << st.r_sup << " <= "
          << st.r_bound << "\n";
  }
  log << "final defect " << rep.final.sup << " (tol " << cfg.tol << "), C0 to base "
      << rep.c0_to_base << "\n";
  write_artifacts(cfg, *fin, rep, res.document);
  return res;
}

HomotopyCheck homotopy_check(const ModelSpec& model, const RunConfig& cfg,
                             const std::vector<double>& taus, int points) {
  HomotopyCheck hc;
  const RunConfigCore core = cfg.core();
  LayeredMap u0 = model.map();
  Survey before = survey(u0, 0, core.probe, 3, core.parallel);
  const double eps1 = eps_schedule(cfg.eps, 1);
  StagePlan plan = plan_stage(u0, before, eps1, std::nullopt);
  if (plan.terms.empty()) throw std::runtime_error("homotopy: no active defect term");
  const int t = plan.terms.front();
  StepParams p;
  p.delta = plan.delta;
  p.ell = plan.ell;
  p.eps_step = eps1 / plan.m;
  p.m = plan.m;
  p.defect_sup = before.sup;
  p.lambda0 = core.lambda0;
  p.lambda_factor = core.lambda_factor;
  p.lambda_max = core.lambda_max;
  p.probe = core.probe;
  p.salt = 1000ULL + 10ULL * t + 1;
  p.parallel = core.parallel;
  auto [stepped, rec] = do_step(u0, t, term_direction(u0.n(), t), 0, p);
  hc.delta = plan.delta;
  hc.ell = plan.ell ? *plan.ell : kNaN;
  hc.m = plan.m;
  hc.lambda = rec.lambda;
  hc.floor = -plan.delta * plan.delta / (2.0 * plan.m);
  hc.layer = stepped.layer(1);
  hc.prev = std::make_shared<LayeredMap>(u0);
  hc.stepped = std::make_shared<LayeredMap>(stepped);
  auto pts = random_points(u0.domain(), points, cfg.seed, 77);
  hc.points = pts.size();
  for (std::size_t i = 0; i < taus.size(); ++i) {
    LayeredMap H = step_homotopy(u0, hc.layer, taus[i]);
    Survey s = survey(H, 0, core.probe, 500 + i, core.parallel);
    hc.taus.push_back({taus[i], s.min_eig, s.sup, s.min_eig >= hc.floor});
    if (taus[i] == 0.0 || taus[i] == 1.0) {
      const LayeredMap& ref = taus[i] == 0.0 ? u0 : stepped;
      bool same = true;
      for (const Vec& x : pts)
        same = same && same_bits(H.value(x), ref.value(x)) && same_bits(H.jacobian(x), ref.jacobian(x));
      (taus[i] == 0.0 ? hc.tau0_exact : hc.tau1_exact) = same;
    }
  }
  return hc;
}

int cmd_homotopy(const RunConfig& cfg, const std::vector<double>& taus, std::ostream& out) {
  validate(cfg);
  ModelSpec model = model_by_name(cfg.model, cfg.params);
  HomotopyCheck hc = homotopy_check(model, cfg, taus);
  out << "model " << model.name << ": first step lambda " << hc.lambda << ", delta " << hc.delta
      << ", m " << hc.m << ", floor " << hc.floor << "\n";
  out << "tau        min eig      sup          ok\n";
  bool ok = true;
  for (const auto& s : hc.taus) {
    out << std::left << std::setw(10) << s.tau << ' ' << std::setw(12) << s.min_eig << ' '
        << std::setw(12) << s.sup << ' ' << (s.ok ? "yes" : "no") << std::right << "\n";
    ok = ok && s.ok;
  }
  for (double t : taus) {
    if (t == 0.0) out << "tau = 0 reproduces prev: " << (hc.tau0_exact ? "bit-exact" : "differs") << "\n";
    if (t == 1.0) out << "tau = 1 reproduces step: " << (hc.tau1_exact ? "bit-exact" : "differs") << "\n";
    if ((t == 0.0 && !hc.tau0_exact) || (t == 1.0 && !hc.tau1_exact)) ok = false;
  }
  if (!cfg.obj.empty()) {
    auto grid = default_export_grid(model.domain, cfg.export_grid);
    for (double t : taus) {
      std::string path = cfg.obj;
      if (taus.size() > 1) {
        std::ostringstream tag;
        tag << "_tau" << t;
        auto dot = path.rfind('.');
        path.insert(dot == std::string::npos ? path.size() : dot, tag.str());
      }
      LayeredMap H = step_homotopy(*hc.prev, hc.layer, t);
      write_file(path, [&](std::ostream& os) {
        if (model.domain.dim == 1)
          write_obj_curve(os, H, grid[0]);
        else
          write_obj_surface(os, H, grid);
      });
    }
  }
  return ok ? kExitOk : kExitError;
}

int cmd_verify_geodesic(const std::string& model, double rho, double R, std::ostream& out) {
  GeodesicModel gm;
  std::function<Vec(double)> curve;
  double k;
  if (model == "sphere") {
    if (!(rho > 0 && rho < std::numbers::pi)) throw std::invalid_argument("verify: rho must lie in (0, pi)");
    gm = GeodesicModel::round_sphere();
    double sr = std::sin(rho);
    curve = [rho, sr](double t) {
      Vec x(2);
      x << rho, t / sr;
      return x;
    };
    k = std::cos(rho) / sr;
  } else if (model == "plane") {
    if (!(R > 0)) throw std::invalid_argument("verify: R must be positive");
    gm = GeodesicModel::euclidean();
    curve = [R](double t) {
      Vec x(2);
      x << R * std::cos(t / R), R * std::sin(t / R);
      return x;
    };
    k = 1.0 / R;
  } else {
    throw std::invalid_argument("verify: unknown geodesic model " + model);
  }
  ExpansionFit fit = expansion_check(gm, curve, k);
  out << std::setprecision(12) << "t                  d(p, gamma(t)) - t\n";
  for (std::size_t i = 0; i < fit.t.size(); ++i)
    out << std::left << std::setw(18) << fit.t[i] << ' ' << fit.d[i] - fit.t[i] << std::right << "\n";
  out << "k_g       " << k << "\n";
  out << "c3        " << fit.c3 << "\n";
  out << "expected  " << fit.expected << "\n";
  out << "rel error " << fit.rel_error << "\n";
  bool ok = fit.rel_error <= 0.02;
  out << "verdict   " << (ok ? "pass" : "fail") << "\n";
  return ok ? kExitOk : kExitError;
}

int cmd_verify_obstruction(double psi1, int n, std::ostream& out) {
  ObstructionModelReport rep = model_obstruction_metric(psi1, n);
  Eigen::IOFormat fmt(12, 0, ", ", "\n", "  [", "]");
  out << "psi'(1) = " << psi1 << ", n = " << n << "\n";
  out << "margin h^ghat - h^g0:\n" << rep.margin.format(fmt) << "\n";
  out << "expected (psi'(1) - 2)/2 g:\n" << rep.expected.format(fmt) << "\n";
  out << "max error  " << rep.max_error << "\n";
  out << "verdict    " << rep.verdict << "\n";
  std::string sm;
  try {
    ModelSpec m = short_map_from_normal_data(psi_boundary_data(psi1, n), 0.2);
    std::ostringstream os;
    os << "constructed (eps_band " << m.info.at("eps_band") << ")";
    sm = os.str();
  } catch (const HypothesisFailed& e) {
    sm = std::string("not constructed: ") + e.what();
  }
  out << "adapted short map " << sm << "\n";
  return rep.max_error <= 1e-8 ? kExitOk : kExitError;
}

int cmd_export(const std::string& report, const std::string& obj, const std::string& csv, int grid,
               int level, std::ostream& out) {
  std::ifstream is(report);
  if (!is) throw std::runtime_error("cannot read " + report);
  json doc = json::parse(is);
  LayeredMap m = rebuild_map(doc);
  const ChartDomain& dom = m.domain();
  auto g = default_export_grid(dom, grid);
  if (!obj.empty()) {
    MeshStats st;
    write_file(obj, [&](std::ostream& os) {
      st = dom.dim == 1 ? write_obj_curve(os, m, g[0], level) : write_obj_surface(os, m, g, level);
    });
    out << obj << ": " << st.vertices << " vertices, " << st.faces << " faces, " << st.degenerate
        << " degenerate\n";
  }
  if (!csv.empty()) {
    write_file(csv, [&](std::ostream& os) { write_grid_csv(os, m, g, level); });
    out << csv << " written\n";
  }
  return kExitOk;
}

}  // namespace corrint
