// Acceptance criteria: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "CLI11.hpp"

#include "corrint/analysis.hpp"
#include "corrint/config.hpp"
#include "corrint/convexint.hpp"
#include "corrint/corrugation.hpp"
#include "corrint/decomposition.hpp"
#include "corrint/export.hpp"
#include "corrint/models.hpp"
#include "corrint/report.hpp"
#include "corrint/run.hpp"
#include "corrint/sampling.hpp"

using namespace corrint;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& log) {
  std::string cmd = std::string(CORRINT_CLI) + " " + args + " >" + log.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path workdir() {
  fs::path p = fs::current_path() / "acceptance_out";
  fs::create_directories(p);
  return p;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = (double)x.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome corrugation_suite() {
  Outcome o;
  double per = 0;
  for (double s : {0.5, 1.0, 5.0})
    for (int i = 0; i < 100; ++i) {
      double t = 2 * kPi * i / 100;
      Pair a = gamma(s, t), b = gamma(s, t + 2 * kPi);
      per = std::max(per, std::hypot(a.first - b.first, a.second - b.second));
    }
  o.require(per <= 1e-10, "periodicity " + fmt("%.3g", per));

  double circ = 0;
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j) {
      double s = 10.0 * i / 99, t = 2 * kPi * j / 99;
      Pair d = gamma_dt(s, t);
      circ = std::max(circ, std::abs((d.first + 1) * (d.first + 1) + d.second * d.second - (1 + s * s)));
    }
  o.require(circ <= 1e-10, "circle equation " + fmt("%.3g", circ));

  double c1_excess = -1e300, mixed_sup = 0;
  for (int i = 0; i <= 400; ++i) {
    double s = i == 0 ? 0.0 : std::pow(10.0, -6.0 + 7.0 * i / 400);
    for (int j = 0; j <= 200; ++j) {
      double t = 2 * kPi * j / 200;
      Pair d = gamma_dt(s, t);
      c1_excess = std::max(c1_excess, std::hypot(d.first, d.second) - kSqrt2 * s);
      Pair m = gamma_dsdt(s, t);
      mixed_sup = std::max(mixed_sup, std::hypot(m.first, m.second));
    }
  }
  o.require(c1_excess <= 1e-9, "|dtGamma| - sqrt2 s = " + fmt("%.3g", c1_excess));
  o.require(mixed_sup >= kSqrt2 - 1e-3 && mixed_sup <= kSqrt2 + 1e-9, "sup |dsdtGamma| " + fmt("%.12g", mixed_sup));
  o.note("periodicity " + fmt("%.2g", per) + ", circle eq " + fmt("%.2g", circ) + ", sup|dsdtGamma| " +
         fmt("%.10f", mixed_sup));
  return o;
}

Outcome profile_identity() {
  Outcome o;
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    double s = 1e-6 * std::pow(50.0 / 1e-6, i / 9999.0);
    worst = std::max(worst, std::abs(boost::math::cyl_bessel_j(0, profile_f(s)) * std::sqrt(1 + s * s) - 1));
  }
  o.require(worst <= 1e-12, "identity " + fmt("%.3g", worst));

  // Bound chain: f ≤ √(2 log(1+s²)), f ≥ 4√(s²/(8+5s²)), |J₁(f)| ≥ f/(2√(1+s²)), and x²/8 − x⁴/96 ≤ J₂(x) ≤ x²/8.
  double slack[4] = {-1e300, -1e300, -1e300, -1e300};
  for (int i = 0; i < 10000; ++i) {
    double s = 1e-6 * std::pow(50.0 / 1e-6, i / 9999.0);
    double f = profile_f(s), R = std::sqrt(1 + s * s);
    slack[0] = std::max(slack[0], f - std::sqrt(2 * std::log1p(s * s)));
    slack[1] = std::max(slack[1], 4 * std::sqrt(s * s / (8 + 5 * s * s)) - f);
    slack[2] = std::max(slack[2], f / (2 * R) - std::abs(bessel_j(1, f)));
  }
  const double mu = bessel_zero_mu();
  for (int i = 0; i <= 1000; ++i) {
    double x = -mu + 2 * mu * i / 1000, j2 = bessel_j(2, x);
    slack[3] = std::max({slack[3], j2 - x * x / 8, x * x / 8 - std::pow(x, 4) / 96 - j2});
  }
  for (int k = 0; k < 4; ++k) o.require(slack[k] <= 1e-9, "bound " + std::to_string(k + 1) + " " + fmt("%.3g", slack[k]));
  o.note("identity " + fmt("%.2g", worst));
  return o;
}

Outcome decomposition_and_coin() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    double a = 2 * u(rng), c = 2 * u(rng);
    double b = (2 * u(rng) - 1) * std::min(a, c);
    Mat A(2, 2);
    A << a, b, b, c;
    Mat R = Mat::Zero(2, 2);
    for (int k = 0; k < term_count(2); ++k) {
      Vec nu = term_direction(2, k);
      R += coefficient(2, k, A) * nu * nu.transpose();
    }
    worst = std::max(worst, (R - A).cwiseAbs().maxCoeff());
  }
  o.require(worst <= 1e-12, "reconstruction " + fmt("%.3g", worst));

  ModelSpec coin = model_coin(0.5, 0.2);
  double cw = 0;
  for (const Vec& x : random_points(coin.domain, 50, 5, 3)) {
    double r = x[0];
    Mat D = coin.metric(x) - pullback_metric(coin.base.jac(x));
    Mat E = Mat::Zero(2, 2);
    E(0, 0) = 4 * r * (1 + r);
    E(1, 1) = r * (1 + r) * (2 + r + r * r);
    cw = std::max(cw, (D - E).cwiseAbs().maxCoeff());
  }
  o.require(cw <= 1e-10, "coin defect " + fmt("%.3g", cw));
  o.note("reconstruction " + fmt("%.2g", worst) + ", coin " + fmt("%.2g", cw));
  return o;
}

Outcome step_rate() {
  Outcome o;
  LayeredMap u0 = model_circle().map();
  StepParams p;
  p.delta = 0.1;
  p.m = 1;
  p.eps_step = 0.5;
  p.defect_sup = 0.75;
  std::vector<double> ls = {50, 100, 200, 400}, rs;
  for (double l : ls) rs.push_back(measure_step(u0, 0, Vec::Ones(1), 0, p, l).r_sup);
  double slope = fit_slope(ls, rs);
  o.require(std::abs(slope + 1) <= 0.15, "slope " + fmt("%.4f", slope));
  o.note("slope " + fmt("%.4f", slope));
  return o;
}

json run_report(const std::string& args, const fs::path& report, int expect_rc, Outcome& o) {
  fs::remove(report);
  int rc = run_cli(args + " --report " + report.string(), report.string() + ".log");
  o.require(rc == expect_rc, "exit code " + std::to_string(rc));
  if (!fs::exists(report)) {
    o.require(false, "no report written");
    return json::object();
  }
  return json::parse(slurp(report));
}

// ∫|u'| by Monte Carlo at random points of the rebuilt map.
double curve_length(const LayeredMap& m, int count, std::uint64_t seed) {
  double sum = 0;
  auto pts = random_points(m.domain(), count, seed, 404);
  for (const Vec& x : pts) sum += m.jacobian(x).col(0).norm();
  return sum * m.domain().extent(0) / pts.size();
}

Outcome circle_end_to_end() {
  Outcome o;
  fs::path rep = workdir() / "circle.json";
  json doc = run_report("extend --model circle --eps 0.5 --tol 0.01", rep, 0, o);
  if (!o.pass) return o;
  const json& run = doc.at("run");
  o.require(run.at("converged").get<bool>(), "converged");
  double sup = run.at("final").at("sup").get<double>();
  o.require(sup <= 0.01, "final defect " + fmt("%.3g", sup));
  LayeredMap m = rebuild_map(doc);
  double len = curve_length(m, 20000, 7);
  double rel = std::abs(len - 2 * kPi) / (2 * kPi);
  o.require(rel <= 0.01, "length " + fmt("%.6f", len));
  double c0 = 0;
  LayeredMap u0 = m.prefix(0);
  for (int i = 0; i < 4096; ++i) {
    Vec x = Vec::Constant(1, 2 * kPi * i / 4096);
    c0 = std::max(c0, (m.value(x) - u0.value(x)).norm());
  }
  c0 = std::max(c0, run.at("c0_to_base").get<double>());
  o.require(c0 <= 0.5, "C0 distance " + fmt("%.3g", c0));
  o.note("stages " + std::to_string(run.at("stages").size()) + ", defect " + fmt("%.3g", sup) + ", length " +
         fmt("%.6f", len) + ", C0 " + fmt("%.3g", c0));
  return o;
}

Outcome sphere_band_end_to_end() {
  Outcome o;
  fs::path rep = workdir() / "band.json", obj = workdir() / "band.obj";
  json doc = run_report("extend --model sphere-band --eps 0.2 --tol 0.05 --obj " + obj.string(), rep, 0, o);
  if (!o.pass) return o;
  const json& run = doc.at("run");
  o.require(run.at("converged").get<bool>(), "converged");
  double sup = run.at("final").at("sup").get<double>();
  double me = run.at("final").at("min_eig").get<double>();
  o.require(sup <= 0.05, "final defect " + fmt("%.3g", sup));
  o.require(me >= -1e-10, "final min eigenvalue " + fmt("%.3g", me));

  LayeredMap m = rebuild_map(doc);
  ModelSpec base = rebuild_model(doc);
  const ChartDomain& dom = m.domain();
  std::size_t mismatch = 0;
  double circle_err = 0;
  for (int i = 0; i < 4096; ++i) {
    Vec x(2);
    x << dom.lo[0], dom.lo[1] + dom.extent(1) * i / 4096.0;
    Vec u = m.value(x), b = base.base.eval(x);
    mismatch += !(u == b);
    circle_err = std::max({circle_err, std::abs(std::hypot(u[0], u[1]) - 1.0), std::abs(u[2])});
  }
  o.require(mismatch == 0, std::to_string(mismatch) + " equator points differ from the base");
  o.require(circle_err <= 1e-10, "equator vs unit circle " + fmt("%.3g", circle_err));

  // The OBJ's B-face ring: first vertices of the export grid lie on the unit circle.
  std::istringstream is(slurp(obj));
  std::vector<Vec> xs = export_grid(dom, default_export_grid(dom, 0));
  double obj_err = 0;
  std::size_t vi = 0;
  for (std::string line; std::getline(is, line);) {
    if (line.rfind("v ", 0) != 0) continue;
    if (vi < xs.size() && xs[vi][0] == dom.lo[0]) {
      std::istringstream ls(line.substr(2));
      double x, y, z;
      ls >> x >> y >> z;
      obj_err = std::max({obj_err, std::abs(std::hypot(x, y) - 1.0), std::abs(z)});
    }
    ++vi;
  }
  o.require(vi == xs.size(), "OBJ vertex count");
  o.require(obj_err <= 1e-10, "OBJ equator " + fmt("%.3g", obj_err));

  EmbeddingReport e = check_embedding(m, 0.25, {24, 24});
  double ratio = std::min(e.min_ratio_near, e.min_ratio_far);
  o.require(ratio >= 0.45, "embedding ratio " + fmt("%.4f", ratio));
  o.note("defect " + fmt("%.3g", sup) + ", min eig " + fmt("%.3g", me) + ", equator err " + fmt("%.2g", circle_err) +
         ", embedding ratio " + fmt("%.4f", ratio));
  return o;
}

Outcome homotopy_endpoints() {
  Outcome o;
  RunConfig cfg;
  cfg.model = "sphere-band";
  cfg.eps = 0.2;
  cfg.tol = 0.05;
  ModelSpec model = model_by_name(cfg.model, cfg.params);
  HomotopyCheck hc = homotopy_check(model, cfg, {0.0, 0.25, 0.5, 0.75, 1.0});
  o.require(hc.tau0_exact, "tau = 0 differs from prev");
  o.require(hc.tau1_exact, "tau = 1 differs from the step");
  double worst = 1e300;
  for (const auto& s : hc.taus) {
    o.require(s.min_eig >= hc.floor, "tau " + fmt("%.2f", s.tau) + " min eig " + fmt("%.3g", s.min_eig));
    worst = std::min(worst, s.min_eig);
  }
  o.note("floor " + fmt("%.3g", hc.floor) + ", min eig " + fmt("%.3g", worst));
  return o;
}

Outcome geodesic_expansion() {
  Outcome o;
  GeodesicModel e = GeodesicModel::euclidean();
  std::string d;
  for (double R : {0.5, 1.0, 2.0}) {
    auto c = [R](double t) {
      Vec v(2);
      v << R * std::cos(t / R), R * std::sin(t / R);
      return v;
    };
    ExpansionFit f = expansion_check(e, c, 1.0 / R);
    o.require(f.rel_error <= 0.02, "circle R = " + fmt("%g", R) + " rel " + fmt("%.3g", f.rel_error));
    d += "R=" + fmt("%g", R) + ":" + fmt("%.2g", f.rel_error) + " ";
  }
  const double rho = 0.6;
  auto lat = [rho](double t) {
    Vec v(2);
    v << rho, t / std::sin(rho);
    return v;
  };
  ExpansionFit f = expansion_check(GeodesicModel::round_sphere(), lat, 1.0 / std::tan(rho));
  o.require(f.rel_error <= 0.02, "latitude rel " + fmt("%.3g", f.rel_error));
  o.note(d + "latitude:" + fmt("%.2g", f.rel_error));
  return o;
}

Outcome obstruction_example() {
  Outcome o;
  for (int n : {2, 3}) {
    ObstructionModelReport r = model_obstruction_metric(3.0, n);
    o.require(r.max_error <= 1e-8, "n = " + std::to_string(n) + " margin error " + fmt("%.3g", r.max_error));
    o.require(r.obstructed, "n = " + std::to_string(n) + " not obstructed");
    ModelSpec m = short_map_from_normal_data(psi_boundary_data(3.0, n), 0.2);
    DefectCheck c = check_model(m, n == 2 ? 65 : 17);
    o.require(c.min_eig >= -1e-10 && c.max_on_boundary <= 1e-10, "short map n = " + std::to_string(n));
    o.note("n=" + std::to_string(n) + " margin err " + fmt("%.2g", r.max_error) + ", " + r.verdict);
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  fs::path a = workdir() / "det_a.json", b = workdir() / "det_b.json";
  run_report("extend --model circle --eps 0.5 --tol 0.01 --seed 1", a, 0, o);
  run_report("extend --model circle --eps 0.5 --tol 0.01 --seed 1", b, 0, o);
  std::string sa = slurp(a), sb = slurp(b);
  o.require(!sa.empty() && sa == sb, "reports differ");
  o.note(std::to_string(sa.size()) + " bytes");
  return o;
}

struct Criterion {
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {"corrugation suite", 10, corrugation_suite},
      {"profile identity and bound chain", 10, profile_identity},
      {"decomposition and coin defect", 5, decomposition_and_coin},
      {"step residual rate", 60, step_rate},
      {"end-to-end circle", 120, circle_end_to_end},
      {"end-to-end sphere band", 600, sphere_band_end_to_end},
      {"homotopy endpoints", 60, homotopy_endpoints},
      {"geodesic expansion", 60, geodesic_expansion},
      {"obstruction example", 30, obstruction_example},
      {"determinism", 1e300, determinism},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && (int)i + 1 != only) continue;
    const auto& c = criteria[i];
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (t > c.limit_s) o.require(false, "runtime " + fmt("%.1f s", t) + " over " + fmt("%g s", c.limit_s));
    std::printf("criterion %2zu %-34s %s  (%.1f s)  %s\n", i + 1, c.name, o.pass ? "PASS" : "FAIL", t,
                o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
