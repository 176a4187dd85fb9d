#include "corrint/convexint.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#include <omp.h>

namespace corrint {

namespace {

constexpr int kBins = 40;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Runs body(i, acc) over [0, n) and folds thread-local accumulators with `merge`.
template <class Acc, class Body>
void sweep(std::size_t n, bool parallel, Acc& total, const Acc& init, Body body) {
  if (!parallel) {
    for (std::size_t i = 0; i < n; ++i) body(i, total);
    return;
  }
  std::exception_ptr err;
#pragma omp parallel
  {
    Acc local = init;
#pragma omp for schedule(dynamic, 64)
    for (long long i = 0; i < (long long)n; ++i) {
      if (err) continue;
      try {
        body((std::size_t)i, local);
      } catch (...) {
#pragma omp critical(corrint_err)
        if (!err) err = std::current_exception();
      }
    }
#pragma omp critical(corrint_merge)
    total.merge(local);
  }
  if (err) std::rethrow_exception(err);
}

struct SurveyAcc {
  double sup = 0, min_eig = kInf, dominance = -kInf;
  std::vector<BinStats> bins;
  std::vector<double> coeff;
  int m0 = 0;
  double c0s = 0, c1s = 0, c0b = 0, c1b = 0;

  void merge(const SurveyAcc& o) {
    sup = std::max(sup, o.sup);
    min_eig = std::min(min_eig, o.min_eig);
    dominance = std::max(dominance, o.dominance);
    for (std::size_t b = 0; b < bins.size(); ++b) {
      bins[b].sup = std::max(bins[b].sup, o.bins[b].sup);
      bins[b].min_eig = std::min(bins[b].min_eig, o.bins[b].min_eig);
      bins[b].count += o.bins[b].count;
    }
    for (std::size_t k = 0; k < coeff.size(); ++k) coeff[k] = std::max(coeff[k], o.coeff[k]);
    m0 = std::max(m0, o.m0);
    c0s = std::max(c0s, o.c0s);
    c1s = std::max(c1s, o.c1s);
    c0b = std::max(c0b, o.c0b);
    c1b = std::max(c1b, o.c1b);
  }
};

int bin_of(const ChartDomain& dom, const Vec& x) {
  if (!dom.boundary_axis) return 0;
  int b = *dom.boundary_axis;
  double d = x[b] - dom.lo[b];
  if (d <= 0) return kBins - 1;
  int j = (int)std::floor(std::log2(dom.extent(b) / d));
  return std::clamp(j, 0, kBins - 1);
}

std::vector<BinStats> make_bins(const ChartDomain& dom) {
  std::vector<BinStats> bins;
  if (!dom.boundary_axis) {
    BinStats b;
    b.lo = 0;
    b.hi = kInf;
    bins.push_back(b);
    return bins;
  }
  double E = dom.extent(*dom.boundary_axis);
  for (int j = 0; j < kBins; ++j) {
    BinStats b;
    b.hi = std::ldexp(E, -j);
    b.lo = j == kBins - 1 ? 0.0 : std::ldexp(E, -j - 1);
    bins.push_back(b);
  }
  return bins;
}

Survey run_survey(const LayeredMap& m, int start_level, const ProbeSpec& spec,
                  std::uint64_t salt, bool parallel) {
  const ChartDomain& dom = m.domain();
  const int K = m.levels();
  const int n = m.n();
  const int nterms = n > 1 ? term_count(n) : 1;
  const bool curve = n == 1 && dom.is_periodic(0);
  SlowGrid grid(m, std::max(K - 1, 0), spec, salt);
  std::vector<double> theta =
      K > 0 ? phase_grid(spec.phases, spec.seed, salt) : std::vector<double>{0.0};
  std::vector<double> len(curve ? grid.size() : 0, 0.0);

  SurveyAcc init;
  init.bins = make_bins(dom);
  init.coeff.assign(nterms, 0.0);
  SurveyAcc total = init;

  auto body = [&](std::size_t idx, SurveyAcc& acc) {
    Vec x = grid.point(idx);
    Mat g = m.metric()(x);
    Jet base{m.base().eval(x), m.base().jac(x)};
    SlowFields sf;
    std::optional<CorrugationProfile> prof;
    Jet start;
    bool start_is_current = start_level >= K;
    if (K > 0) {
      std::vector<Jet> lower;
      sf = m.slow_fields(K, x, true, start_is_current ? nullptr : &lower);
      if (sf.active) prof.emplace(sf.s);
      if (!start_is_current) start = lower[start_level];
    }
    const int nph = (K > 0 && sf.active) ? (int)theta.size() : 1;
    const int b = bin_of(dom, x);
    double lsum = 0.0;
    for (int p = 0; p < nph; ++p) {
      Jet cur = K == 0 ? base : (sf.active ? m.lift(K, sf, *prof, theta[p]) : Jet{sf.u_prev, sf.J_prev});
      Mat D = g - pullback_metric(cur.J);
      double lo = sym_min_eigenvalue(D), hi = sym_max_eigenvalue(D);
      double nrm = std::max(std::abs(lo), std::abs(hi));
      acc.sup = std::max(acc.sup, nrm);
      acc.min_eig = std::min(acc.min_eig, lo);
      acc.bins[b].sup = std::max(acc.bins[b].sup, nrm);
      acc.bins[b].min_eig = std::min(acc.bins[b].min_eig, lo);
      acc.bins[b].count += 1;
      if (n > 1) acc.dominance = std::max(acc.dominance, dominance_violation(D));
      int live = 0;
      for (int k = 0; k < nterms; ++k) {
        double c = n > 1 ? coefficient(n, k, D) : std::max(D(0, 0), 0.0);
        acc.coeff[k] = std::max(acc.coeff[k], c);
        if (c > kActiveThreshold) ++live;
      }
      acc.m0 = std::max(acc.m0, live);
      if (!start_is_current) {
        acc.c0s = std::max(acc.c0s, (cur.u - start.u).norm());
        acc.c1s = std::max(acc.c1s, op_norm(cur.J - start.J));
      }
      acc.c0b = std::max(acc.c0b, (cur.u - base.u).norm());
      acc.c1b = std::max(acc.c1b, op_norm(cur.J - base.J));
      if (curve) lsum += cur.J.col(0).norm();
    }
    if (curve) len[idx] = lsum / nph;
  };
  sweep(grid.size(), parallel, total, init, body);

  Survey s;
  s.sup = total.sup;
  s.min_eig = total.min_eig;
  s.bins = total.bins;
  s.dominance = total.dominance;
  s.coeff_sup = total.coeff;
  s.m0 = total.m0;
  s.c0_start = total.c0s;
  s.c1_start = total.c1s;
  s.c0_base = total.c0b;
  s.c1_base = total.c1b;
  s.grid = grid.counts();
  s.phases = (int)theta.size();
  if (curve) {
    double acc = 0.0;
    for (double v : len) acc += v;
    s.length = acc * dom.extent(0) / (double)grid.size();
  }
  return s;
}

struct ProbeAcc {
  std::vector<double> lvl;
  double r0 = 0, combo = 0, e = 0;
  void merge(const ProbeAcc& o) {
    for (std::size_t j = 0; j < lvl.size(); ++j) lvl[j] = std::max(lvl[j], o.lvl[j]);
    r0 = std::max(r0, o.r0);
    combo = std::max(combo, o.combo);
    e = std::max(e, o.e);
  }
};

ProbeResult run_probe(const LayeredMap& m, int k, const std::vector<double>& ladder,
                      const ProbeSpec& spec, std::uint64_t salt, bool parallel) {
  SlowGrid grid(m, k - 1, spec, salt);
  std::vector<double> theta = phase_grid(spec.phases, spec.seed, salt);
  ProbeAcc init;
  init.lvl.assign(ladder.size(), 0.0);
  ProbeAcc total = init;
  auto body = [&](std::size_t idx, ProbeAcc& acc) {
    Vec x = grid.point(idx);
    SlowFields sf = m.slow_fields(k, x);
    if (!sf.active) return;
    CorrugationProfile prof(sf.s);
    for (double th : theta) {
      StepTerms t = m.step_terms(k, sf, prof.at(th));
      double n0 = sym_norm(t.r0), nA = sym_norm(t.A), nB = sym_norm(t.B);
      acc.r0 = std::max(acc.r0, n0);
      acc.combo = std::max(acc.combo, t.combo.norm());
      acc.e = std::max(acc.e, op_norm(t.E));
      for (std::size_t j = 0; j < ladder.size(); ++j) {
        double L = ladder[j];
        if (n0 + nA / L + nB / (L * L) <= acc.lvl[j]) continue;
        Mat r = t.r0 + t.A / L + t.B / (L * L);
        acc.lvl[j] = std::max(acc.lvl[j], sym_norm(r));
      }
    }
  };
  sweep(grid.size(), parallel, total, init, body);
  ProbeResult out;
  out.r0_sup = total.r0;
  out.combo_sup = total.combo;
  out.e_sup = total.e;
  out.grid = grid.counts();
  out.phases = (int)theta.size();
  for (std::size_t j = 0; j < ladder.size(); ++j) {
    LevelStats ls;
    ls.lambda = ladder[j];
    ls.r_sup = total.lvl[j];
    ls.c0 = total.combo / ladder[j];
    ls.e_over_lambda = total.e / ladder[j];
    out.levels.push_back(ls);
  }
  return out;
}

void spot_checks(const LayeredMap& out, int k, const StepParams& p, StepRecord& rec) {
  auto pts = random_points(out.domain(), 16, p.probe.seed, p.salt + 0x51);
  const auto& L = out.layer(k);
  for (const Vec& x : pts) {
    SlowFields sf = out.slow_fields(k, x, false);
    if (!sf.active || sf.s == 0.0) continue;
    Mat J = out.jacobian(x);
    double inc = sf.s * sf.s / (sf.xi_tilde_norm * sf.xi_tilde_norm);
    Mat r = pullback_metric(J) - pullback_metric(sf.J_prev) - inc * L.nu * L.nu.transpose();
    rec.spot_r_max = std::max(rec.spot_r_max, sym_norm(r));
    Mat Jf = out.jacobian_fd(x);
    rec.spot_backend_rel = std::max(rec.spot_backend_rel, op_norm(Jf - J) / op_norm(J));
  }
}

std::vector<double> make_ladder(const ChartDomain& dom, const Vec& nu, const StepParams& p) {
  std::vector<double> lad;
  for (double l = p.lambda0; l <= p.lambda_max; l *= p.lambda_factor) {
    double a = admissible_lambda(dom, nu, l);
    if (a > p.lambda_max) break;
    if (lad.empty() || a > lad.back()) lad.push_back(a);
  }
  return lad;
}

StepRecord base_record(const LayeredMap& cand, int k, int term, const Vec& nu,
                       const StepParams& p, const ProbeResult& pr) {
  StepRecord rec;
  rec.k = k;
  rec.term = term;
  rec.nu = nu;
  rec.r_bound = p.delta * p.delta / (2.0 * p.m);
  rec.c0_bound = p.eps_step;
  rec.e_bound = std::sqrt(p.defect_sup) / p.m;
  rec.r0_sup = pr.r0_sup;
  rec.grid = pr.grid;
  rec.phases = pr.phases;
  (void)cand;
  return rec;
}

}  // namespace

double Survey::sup_within(double ell) const {
  double s = 0.0;
  for (const auto& b : bins)
    if (b.hi <= ell * (1 + 1e-12)) s = std::max(s, b.sup);
  return s;
}

double Survey::min_eig_beyond(double ell) const {
  double e = kInf;
  for (const auto& b : bins)
    if (b.lo >= 0.5 * ell * (1 - 1e-12)) e = std::min(e, b.min_eig);
  return e;
}

double admissible_lambda(const ChartDomain& dom, const Vec& nu, double lambda) {
  double unit = 0.0;
  for (int a : dom.periodic_axes) {
    if (std::abs(nu[a]) < 1e-15) continue;
    double u = 2.0 * std::numbers::pi / (std::abs(nu[a]) * dom.extent(a));
    if (unit == 0.0) {
      unit = u;
      lambda = std::ceil(lambda / u * (1 - 1e-12)) * u;
    } else {
      double r = lambda / u;
      if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r))
        throw std::invalid_argument("no frequency is periodic on all periodic axes");
    }
  }
  return lambda;
}

Survey survey_serial(const LayeredMap& m, int start_level, const ProbeSpec& spec,
                     std::uint64_t salt) {
  return run_survey(m, start_level, spec, salt, false);
}

Survey survey_parallel(const LayeredMap& m, int start_level, const ProbeSpec& spec,
                       std::uint64_t salt) {
  return run_survey(m, start_level, spec, salt, true);
}

Survey survey(const LayeredMap& m, int start_level, const ProbeSpec& spec, std::uint64_t salt,
              bool parallel) {
  return run_survey(m, start_level, spec, salt, parallel);
}

ProbeResult probe_serial(const LayeredMap& m, int k, const std::vector<double>& ladder,
                         const ProbeSpec& spec, std::uint64_t salt) {
  return run_probe(m, k, ladder, spec, salt, false);
}

ProbeResult probe_parallel(const LayeredMap& m, int k, const std::vector<double>& ladder,
                           const ProbeSpec& spec, std::uint64_t salt) {
  return run_probe(m, k, ladder, spec, salt, true);
}

CorrugationLayer make_layer(const LayeredMap& prev, int term, const Vec& nu, double delta,
                            std::optional<double> ell, int start_level) {
  CorrugationLayer L;
  L.lambda = 1.0;
  L.nu = nu;
  L.sqrt_one_minus_delta = std::sqrt(1.0 - delta);
  if (ell && prev.domain().boundary_axis) L.cutoff = CutoffProfile{*ell};
  L.start_level = start_level;
  L.term = term;
  const int n = prev.n();
  L.coeff = [n, term](const Mat& D) { return coefficient(n, term, D); };
  return L;
}

std::pair<LayeredMap, StepRecord> do_step(const LayeredMap& prev, int term, const Vec& nu,
                                          int start_level, const StepParams& p) {
  CorrugationLayer layer = make_layer(prev, term, nu, p.delta, p.ell, start_level);
  LayeredMap cand = prev.with_layer(layer);
  const int k = cand.levels();
  auto ladder = make_ladder(prev.domain(), nu, p);
  ProbeResult pr = p.parallel ? probe_parallel(cand, k, ladder, p.probe, p.salt)
                              : probe_serial(cand, k, ladder, p.probe, p.salt);
  StepRecord rec = base_record(cand, k, term, nu, p, pr);
  int chosen = -1;
  for (std::size_t j = 0; j < pr.levels.size(); ++j) {
    auto& ls = pr.levels[j];
    ls.ok_r = ls.r_sup <= rec.r_bound;
    ls.ok_c0 = ls.c0 < rec.c0_bound;
    ls.ok_e = ls.e_over_lambda <= rec.e_bound;
    if (chosen < 0 && ls.ok_r && ls.ok_c0 && ls.ok_e) chosen = (int)j;
  }
  rec.ladder = pr.levels;
  if (chosen < 0) throw LambdaCapExceeded(p.lambda_max);
  const auto& ls = pr.levels[chosen];
  rec.lambda = ls.lambda;
  rec.r_sup = ls.r_sup;
  rec.c0 = ls.c0;
  rec.e_over_lambda = ls.e_over_lambda;
  layer.lambda = ls.lambda;
  LayeredMap out = prev.with_layer(layer);
  spot_checks(out, k, p, rec);
  return {out, rec};
}

StepRecord measure_step(const LayeredMap& prev, int term, const Vec& nu, int start_level,
                        const StepParams& p, double lambda) {
  CorrugationLayer layer = make_layer(prev, term, nu, p.delta, p.ell, start_level);
  LayeredMap cand = prev.with_layer(layer);
  const int k = cand.levels();
  ProbeResult pr = p.parallel ? probe_parallel(cand, k, {lambda}, p.probe, p.salt)
                              : probe_serial(cand, k, {lambda}, p.probe, p.salt);
  StepRecord rec = base_record(cand, k, term, nu, p, pr);
  rec.ladder = pr.levels;
  rec.lambda = lambda;
  rec.r_sup = pr.levels[0].r_sup;
  rec.c0 = pr.levels[0].c0;
  rec.e_over_lambda = pr.levels[0].e_over_lambda;
  return rec;
}

StagePlan plan_stage(const LayeredMap& u, const Survey& before, double eps,
                     std::optional<double> ell_prev) {
  const ChartDomain& dom = u.domain();
  StagePlan plan;
  plan.sup = before.sup;
  double min_eig;
  if (dom.boundary_axis) {
    double E = dom.extent(*dom.boundary_axis);
    plan.ell0 = ell_prev ? std::min(E, *ell_prev) : E;
    int j0 = (int)std::lround(std::log2(E / plan.ell0));
    for (int j = j0; j < kBins - 1 && !plan.ell; ++j) {
      double ell = std::ldexp(E, -j);
      if (before.sup_within(ell) < eps / 2) plan.ell = ell;
    }
    if (!plan.ell) throw StageCheckFailed("stage: no dyadic cutoff width meets the defect bound");
    min_eig = before.min_eig_beyond(*plan.ell);
  } else {
    min_eig = before.min_eig;
  }
  if (!(min_eig > 0)) throw ShortnessLost("stage: defect not positive off the cutoff zone", min_eig);
  const int n = u.n();
  if (n > 1 && before.dominance > 1e-12) throw DominanceViolated(Vec(), Mat());
  plan.delta = 0.9 * std::min({min_eig, eps / (2.0 * before.sup), std::sqrt(eps)});
  plan.delta = std::min(plan.delta, 0.9);
  for (int k = 0; k < (int)before.coeff_sup.size(); ++k)
    if (before.coeff_sup[k] > kActiveThreshold) plan.terms.push_back(k);
  plan.m = (int)plan.terms.size();
  plan.m0 = before.m0;
  return plan;
}

StageOutcome do_stage(const LayeredMap& u, double eps, const Survey& before,
                      std::optional<double> ell_prev, int index, const RunConfigCore& cfg) {
  StagePlan plan = plan_stage(u, before, eps, ell_prev);
  StageRecord rec;
  rec.index = index;
  rec.eps = eps;
  rec.ell = plan.ell ? *plan.ell : kNaN;
  rec.ell0 = plan.ell0;
  rec.delta = plan.delta;
  rec.m = plan.m;
  rec.m0 = plan.m0;
  rec.C = std::sqrt(2.0) * plan.m0 + 1.0;
  rec.sup_before = before.sup;
  rec.min_eig_before = before.min_eig;
  const int start = u.levels();
  LayeredMap cur = u;
  for (int t : plan.terms) {
    StepParams p;
    p.delta = plan.delta;
    p.ell = plan.ell;
    p.eps_step = eps / plan.m;
    p.m = plan.m;
    p.defect_sup = before.sup;
    p.lambda0 = cfg.lambda0;
    p.lambda_factor = cfg.lambda_factor;
    p.lambda_max = cfg.lambda_max;
    p.probe = cfg.probe;
    p.salt = 1000ULL * index + 10ULL * t + 1;
    p.parallel = cfg.parallel;
    auto [next, sr] = do_step(cur, t, term_direction(u.n(), t), start, p);
    rec.steps.push_back(std::move(sr));
    cur = std::move(next);
  }
  Survey after = survey(cur, start, cfg.probe, 1000ULL * index + 7, cfg.parallel);
  rec.sup_after = after.sup;
  rec.min_eig_after = after.min_eig;
  rec.min_eig_after_outside = plan.ell ? after.min_eig_beyond(*plan.ell) : after.min_eig;
  rec.shortness_floor = plan.delta * plan.delta / 2.0;
  rec.c0_drift = after.c0_start;
  rec.c1_drift = after.c1_start;
  rec.c1_bound = rec.C * std::sqrt(before.sup);
  rec.c0_ok = rec.c0_drift <= eps;
  rec.metric_ok = rec.sup_after <= eps;
  rec.c1_ok = rec.c1_drift <= rec.c1_bound;
  rec.short_ok = plan.m == 0 || rec.min_eig_after_outside >= rec.shortness_floor - 1e-10;
  if (after.min_eig < -1e-10) throw ShortnessLost("stage: defect lost positivity", after.min_eig);
  if (!(rec.c0_ok && rec.metric_ok && rec.c1_ok && rec.short_ok)) {
    std::ostringstream os;
    os << "stage " << index << " check failed: c0 " << rec.c0_drift << "/" << eps << ", metric "
       << rec.sup_after << "/" << eps << ", c1 " << rec.c1_drift << "/" << rec.c1_bound
       << ", shortness " << rec.min_eig_after_outside << "/" << rec.shortness_floor;
    throw StageCheckFailed(os.str());
  }
  return {std::move(cur), std::move(rec), std::move(after)};
}

double eps_schedule(double eps, int k) {
  double pi4 = std::pow(std::numbers::pi, 4);
  return eps * (90.0 / pi4) / std::pow((double)k, 4);
}

IterateResult iterate(const LayeredMap& u0, double eps, double tol, int max_stages,
                      const RunConfigCore& cfg) {
  RunReport rep;
  rep.eps = eps;
  rep.tol = tol;
  rep.max_stages = max_stages;
  rep.probe = cfg.probe;
  rep.initial = survey(u0, 0, cfg.probe, 3, cfg.parallel);
  Survey cur_survey = rep.initial;
  LayeredMap cur = u0;
  std::optional<double> ell_prev;
  rep.converged = cur_survey.sup <= tol;
  for (int k = 1; k <= max_stages && !rep.converged; ++k) {
    double ek = eps_schedule(eps, k);
    rep.eps_schedule.push_back(ek);
    StageOutcome out = do_stage(cur, ek, cur_survey, ell_prev, k, cfg);
    if (!std::isnan(out.record.ell)) ell_prev = out.record.ell;
    rep.stages.push_back(std::move(out.record));
    cur = std::move(out.map);
    cur_survey = std::move(out.after);
    rep.converged = cur_survey.sup <= tol;
  }
  rep.final = cur_survey;
  rep.c0_to_base = cur_survey.c0_base;
  auto [pts, bad] = boundary_mismatches(cur, 64);
  rep.boundary_points = pts;
  rep.boundary_mismatches = bad;
  if (!rep.converged)
    throw NotConverged(max_stages, cur_survey.sup, std::make_shared<RunReport>(rep),
                       std::make_shared<LayeredMap>(cur));
  return {std::move(cur), std::move(rep)};
}

LayeredMap step_homotopy(const LayeredMap& prev, const CorrugationLayer& layer, double tau) {
  CorrugationLayer l = layer;
  l.tau_scale *= CutoffProfile{0.5}(tau);
  return prev.with_layer(std::move(l));
}

EmbeddingReport check_embedding(const LayeredMap& m, double mu, const std::vector<int>& grid) {
  const ChartDomain& dom = m.domain();
  std::vector<Vec> xs, v, b;
  std::vector<int> idx(dom.dim, 0);
  while (true) {
    Vec x(dom.dim);
    for (int i = 0; i < dom.dim; ++i)
      x[i] = dom.lo[i] + dom.extent(i) * (idx[i] + 0.5) / grid[i];
    xs.push_back(x);
    int a = 0;
    while (a < dom.dim && ++idx[a] == grid[a]) idx[a++] = 0;
    if (a == dom.dim) break;
  }
  v.resize(xs.size());
  b.resize(xs.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long long i = 0; i < (long long)xs.size(); ++i) {
    v[i] = m.value(xs[i]);
    b[i] = m.base().eval(xs[i]);
  }
  EmbeddingReport rep;
  rep.mu = mu;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      double db = (b[i] - b[j]).norm();
      if (db == 0.0) continue;
      double r = (v[i] - v[j]).norm() / db;
      double dx = 0.0;
      for (int a = 0; a < dom.dim; ++a) {
        double d = std::abs(xs[i][a] - xs[j][a]);
        if (dom.is_periodic(a)) d = std::min(d, dom.extent(a) - d);
        dx += d * d;
      }
      double& slot = std::sqrt(dx) < mu ? rep.min_ratio_near : rep.min_ratio_far;
      if (r < slot) {
        slot = r;
        if (r <= std::min(rep.min_ratio_near, rep.min_ratio_far)) {
          rep.worst_x = xs[i];
          rep.worst_y = xs[j];
        }
      }
      ++rep.pairs;
    }
  rep.pass = rep.min_ratio_near >= 0.45 && rep.min_ratio_far >= 0.45;
  return rep;
}

std::pair<std::size_t, std::size_t> boundary_mismatches(const LayeredMap& m, int per_axis) {
  const ChartDomain& dom = m.domain();
  if (!dom.boundary_axis) return {0, 0};
  const int b = *dom.boundary_axis;
  std::size_t pts = 0, bad = 0;
  std::vector<int> idx(dom.dim, 0);
  while (true) {
    Vec x(dom.dim);
    for (int i = 0; i < dom.dim; ++i)
      x[i] = i == b ? dom.lo[i] : dom.lo[i] + dom.extent(i) * (idx[i] + 0.37) / per_axis;
    Vec u = m.value(x), u0 = m.base().eval(x);
    ++pts;
    for (int c = 0; c < u.size(); ++c)
      if (u[c] != u0[c]) {
        ++bad;
        break;
      }
    int a = 0;
    while (a < dom.dim && (a == b || ++idx[a] == per_axis)) {
      if (a != b) idx[a] = 0;
      ++a;
    }
    if (a == dom.dim) break;
  }
  return {pts, bad};
}

}  // namespace corrint
