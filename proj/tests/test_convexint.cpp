#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "corrint/convexint.hpp"
#include "corrint/models.hpp"
#include "corrint/sampling.hpp"

using namespace corrint;

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = (double)x.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct BandStep {
  LayeredMap prev, next;
  StepRecord rec;
  StepParams p;
};

const BandStep& band_step() {
  static const BandStep bs = [] {
    LayeredMap u0 = model_sphere_band(0.1, 1).map();
    ProbeSpec spec;
    Survey s = survey(u0, 0, spec, 3);
    StepParams p;
    p.delta = 0.05;
    p.ell = 0.3;
    p.m = 2;
    p.eps_step = 0.05;
    p.defect_sup = s.sup;
    p.probe = spec;
    p.salt = 11;
    auto [next, rec] = do_step(u0, 0, term_direction(2, 0), 0, p);
    return BandStep{u0, next, rec, p};
  }();
  return bs;
}

}  // namespace

TEST_CASE("admissible frequencies are integers along periodic axes") {
  ModelSpec c = model_circle();
  CHECK(admissible_lambda(c.domain, Vec::Ones(1), 5.0) == 5.0);
  CHECK(admissible_lambda(c.domain, Vec::Ones(1), 5.2) == 6.0);
  ModelSpec b = model_sphere_band(0.1, 1);
  double l = admissible_lambda(b.domain, Vec::Unit(2, 1), 100.3);
  CHECK(l >= 100.3);
  CHECK(l == std::round(l));
}

TEST_CASE("stage budgets sum to eps") {
  double sum = 0, root = 0;
  for (int k = 1; k <= 200000; ++k) {
    sum += eps_schedule(0.5, k);
    root += std::sqrt(eps_schedule(0.5, k));
  }
  CHECK(sum == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sum <= 0.5);
  const double pi = 3.141592653589793;
  CHECK(root == doctest::Approx(std::sqrt(0.5 * 90 / std::pow(pi, 4)) * pi * pi / 6).epsilon(1e-4));
  CHECK(eps_schedule(0.5, 1) == doctest::Approx(0.5 * 90 / std::pow(pi, 4)));
}

TEST_CASE("a zero coefficient makes the layer an exact no-op") {
  LayeredMap u0 = model_sphere_band(0.1, 1).map();
  CorrugationLayer L = make_layer(u0, 0, Vec::Unit(2, 0), 0.5, 0.3, 0);
  L.coeff = [](const Mat&) { return 0.0; };
  L.lambda = 64;
  LayeredMap m = u0.with_layer(L);
  for (const Vec& x : random_points(u0.domain(), 300, 1, 0)) {
    CHECK(m.value(x) == u0.value(x));
    CHECK(m.jacobian(x) == u0.jacobian(x));
  }
}

TEST_CASE("circle step residual halves when lambda doubles") {
  LayeredMap u0 = model_circle().map();
  StepParams p;
  p.delta = 0.1;
  p.m = 1;
  p.eps_step = 0.5;
  p.defect_sup = 0.75;
  std::vector<double> ls = {50, 100, 200, 400}, rs;
  double c0_scaled = 0;
  for (double l : ls) {
    StepRecord r = measure_step(u0, 0, Vec::Ones(1), 0, p, l);
    rs.push_back(r.r_sup);
    if (c0_scaled == 0) c0_scaled = r.c0 * l;
    CHECK(r.c0 * l == doctest::Approx(c0_scaled).epsilon(1e-3));
  }
  CHECK(fit_slope(ls, rs) == doctest::Approx(-1.0).epsilon(0.15));
}

TEST_CASE("a sphere-band step freezes the half collar bit for bit") {
  const BandStep& bs = band_step();
  CHECK(bs.rec.r_sup <= bs.rec.r_bound);
  CHECK(bs.rec.c0 < bs.rec.c0_bound);
  CHECK(bs.rec.e_over_lambda <= bs.rec.e_bound);
  const double ell = *bs.p.ell;
  for (const Vec& y : random_points(bs.prev.domain(), 1000, 2, 1)) {
    Vec x = y;
    x[0] = 0.5 * ell * y[0] / bs.prev.domain().hi[0];
    CHECK(bs.next.value(x) == bs.prev.value(x));
  }
  auto [pts, bad] = boundary_mismatches(bs.next, 64);
  CHECK(pts > 0);
  CHECK(bad == 0);
}

TEST_CASE("homotopy endpoints reproduce both maps exactly") {
  const BandStep& bs = band_step();
  const CorrugationLayer& L = bs.next.layer(bs.next.levels());
  LayeredMap h0 = step_homotopy(bs.prev, L, 0.0), h1 = step_homotopy(bs.prev, L, 1.0);
  for (const Vec& x : random_points(bs.prev.domain(), 500, 3, 2)) {
    CHECK(h0.value(x) == bs.prev.value(x));
    CHECK(h0.jacobian(x) == bs.prev.jacobian(x));
    CHECK(h1.value(x) == bs.next.value(x));
    CHECK(h1.jacobian(x) == bs.next.jacobian(x));
  }
  const double floor = -bs.p.delta * bs.p.delta / (2.0 * bs.p.m);
  for (double tau : {0.25, 0.5, 0.75}) {
    Survey s = survey(step_homotopy(bs.prev, L, tau), 0, bs.p.probe, 5);
    CHECK(s.min_eig >= floor);
  }
}

TEST_CASE("tolerance above the initial defect runs no stages") {
  RunConfigCore cfg;
  IterateResult r = iterate(model_circle().map(), 0.5, 1.0, 4, cfg);
  CHECK(r.report.converged);
  CHECK(r.report.stages.empty());
  CHECK(r.map.levels() == 0);
}

TEST_CASE("the embedding ratio of an unlayered map is one") {
  LayeredMap u0 = model_sphere_band(0.1, 1).map();
  EmbeddingReport e = check_embedding(u0, 0.25, {12, 12});
  CHECK(e.min_ratio_near == 1.0);
  CHECK(e.min_ratio_far == 1.0);
  CHECK(e.pass);
  CHECK(e.pairs == 144 * 143 / 2);
}

TEST_CASE("serial and parallel kernels agree bit for bit") {
  LayeredMap u0 = model_circle().map();
  CorrugationLayer L = make_layer(u0, 0, Vec::Ones(1), 0.2, std::nullopt, 0);
  L.lambda = 128;
  LayeredMap m = u0.with_layer(L);
  ProbeSpec spec;
  Survey a = survey_serial(m, 0, spec, 5), b = survey_parallel(m, 0, spec, 5);
  CHECK(a.sup == b.sup);
  CHECK(a.min_eig == b.min_eig);
  CHECK(a.c1_base == b.c1_base);
  std::vector<double> ladder = {64, 128, 256};
  ProbeResult pa = probe_serial(m, 1, ladder, spec, 7), pb = probe_parallel(m, 1, ladder, spec, 7);
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    CHECK(pa.levels[i].r_sup == pb.levels[i].r_sup);
    CHECK(pa.levels[i].c0 == pb.levels[i].c0);
  }
}

TEST_CASE("a stage cap below convergence reports the partial result") {
  RunConfigCore cfg;
  try {
    iterate(model_circle().map(), 0.5, 1e-6, 1, cfg);
    FAIL("expected NotConverged");
  } catch (const NotConverged& e) {
    CHECK(e.stages == 1);
    CHECK(e.achieved > 1e-6);
    REQUIRE(e.report);
    CHECK(e.report->stages.size() == 1);
    CHECK(e.map->levels() >= 1);
    CHECK(e.report->c0_to_base <= 0.5);
  }
}
