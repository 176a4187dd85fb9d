// Serial reference vs OpenMP kernels for the survey and probe sweeps.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "corrint/convexint.hpp"
#include "corrint/models.hpp"

using namespace corrint;

namespace {

template <class F>
double seconds(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::string name = argc > 1 ? argv[1] : "circle";
  ModelSpec ms = model_by_name(name, {});
  LayeredMap u0 = ms.map();
  ProbeSpec spec;
  Survey before = survey(u0, 0, spec, 3);
  StagePlan plan = plan_stage(u0, before, eps_schedule(0.5, 1), std::nullopt);
  const int term = plan.terms.front();
  const Vec nu = term_direction(u0.n(), term);
  LayeredMap one = u0.with_layer([&] {
    CorrugationLayer L = make_layer(u0, term, nu, plan.delta, plan.ell, 0);
    L.lambda = admissible_lambda(u0.domain(), nu, 128.0);
    return L;
  }());
  std::vector<double> ladder;
  for (double l = 8; l <= 1024; l *= 2) ladder.push_back(admissible_lambda(u0.domain(), nu, l));

  std::printf("model %s, %d threads\n", ms.name.c_str(), omp_get_max_threads());
  Survey ss, sp;
  double ts = seconds([&] { ss = survey_serial(one, 0, spec, 5); });
  double tp = seconds([&] { sp = survey_parallel(one, 0, spec, 5); });
  std::printf("survey  serial %8.3f s  parallel %8.3f s  sup %.6g / %.6g\n", ts, tp, ss.sup, sp.sup);
  ProbeResult ps, pp;
  ts = seconds([&] { ps = probe_serial(one, 1, ladder, spec, 7); });
  tp = seconds([&] { pp = probe_parallel(one, 1, ladder, spec, 7); });
  std::printf("probe   serial %8.3f s  parallel %8.3f s  r(l0) %.6g / %.6g\n", ts, tp,
              ps.levels.front().r_sup, pp.levels.front().r_sup);
  return ss.sup == sp.sup && ps.levels.front().r_sup == pp.levels.front().r_sup ? 0 : 1;
}
