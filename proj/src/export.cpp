#include "corrint/export.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace corrint {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<Vec> image(const LayeredMap& m, const std::vector<Vec>& xs, int level) {
  std::vector<Vec> out(xs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < (long long)xs.size(); ++i) out[i] = m.value(xs[i], level);
  return out;
}

void write_vertices(std::ostream& os, const std::vector<Vec>& pts) {
  for (const Vec& p : pts) {
    os << 'v';
    for (int c = 0; c < 3; ++c) os << ' ' << (c < p.size() ? num(p[c]) : std::string("0"));
    os << '\n';
  }
}

}  // namespace

std::vector<Vec> export_grid(const ChartDomain& dom, const std::vector<int>& counts) {
  if ((int)counts.size() != dom.dim) throw std::invalid_argument("export grid: wrong axis count");
  std::vector<Vec> xs;
  std::vector<int> idx(dom.dim, 0);
  while (true) {
    Vec x(dom.dim);
    for (int a = 0; a < dom.dim; ++a) {
      int N = counts[a];
      double frac = dom.is_periodic(a) ? (double)idx[a] / N
                                       : (N > 1 ? (double)idx[a] / (N - 1) : 0.0);
      x[a] = idx[a] == 0 ? dom.lo[a] : dom.lo[a] + dom.extent(a) * frac;
    }
    xs.push_back(x);
    int a = 0;
    while (a < dom.dim && ++idx[a] == counts[a]) idx[a++] = 0;
    if (a == dom.dim) break;
  }
  return xs;
}

MeshStats write_obj_surface(std::ostream& os, const LayeredMap& m, const std::vector<int>& counts,
                            int level) {
  const ChartDomain& dom = m.domain();
  if (dom.dim != 2 || m.q() != 3) throw std::invalid_argument("surface export needs a 2D chart in R^3");
  std::vector<Vec> pts = image(m, export_grid(dom, counts), level);
  const int N0 = counts[0], N1 = counts[1];
  const bool w0 = dom.is_periodic(0), w1 = dom.is_periodic(1);
  MeshStats st;
  st.vertices = pts.size();
  write_vertices(os, pts);
  auto id = [&](int i, int j) { return (std::size_t)(i % N0) + (std::size_t)N0 * (j % N1); };
  auto face = [&](std::size_t a, std::size_t b, std::size_t c) {
    Eigen::Vector3d p = pts[a].head<3>(), q = pts[b].head<3>(), r = pts[c].head<3>();
    double area2 = (q - p).cross(r - p).norm();
    double scale = std::max({(q - p).squaredNorm(), (r - p).squaredNorm(), (r - q).squaredNorm()});
    if (!(area2 > 1e-12 * scale)) ++st.degenerate;
    os << "f " << a + 1 << ' ' << b + 1 << ' ' << c + 1 << '\n';
    ++st.faces;
  };
  const int I = w0 ? N0 : N0 - 1, J = w1 ? N1 : N1 - 1;
  for (int j = 0; j < J; ++j)
    for (int i = 0; i < I; ++i) {
      std::size_t a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      face(a, b, c);
      face(a, c, d);
    }
  return st;
}

MeshStats write_obj_curve(std::ostream& os, const LayeredMap& m, int samples, int level,
                          std::size_t first_index) {
  const ChartDomain& dom = m.domain();
  if (dom.dim != 1) throw std::invalid_argument("curve export needs a 1D chart");
  std::vector<Vec> pts = image(m, export_grid(dom, {samples}), level);
  MeshStats st;
  st.vertices = pts.size();
  write_vertices(os, pts);
  os << 'l';
  for (std::size_t i = 0; i < pts.size(); ++i) os << ' ' << first_index + i;
  if (dom.is_periodic(0)) os << ' ' << first_index;
  os << '\n';
  st.faces = 1;
  return st;
}

void write_grid_csv(std::ostream& os, const LayeredMap& m, const std::vector<int>& counts,
                    int level) {
  const ChartDomain& dom = m.domain();
  std::vector<Vec> xs = export_grid(dom, counts);
  std::vector<Vec> u(xs.size());
  std::vector<double> d(xs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < (long long)xs.size(); ++i) {
    Jet j = m.jet(xs[i], level);
    u[i] = j.u;
    d[i] = sym_norm(m.metric()(xs[i]) - pullback_metric(j.J));
  }
  for (int a = 0; a < dom.dim; ++a) os << 'x' << a << ',';
  for (int c = 0; c < m.q(); ++c) os << 'u' << c << ',';
  os << "defect\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (int a = 0; a < dom.dim; ++a) os << num(xs[i][a]) << ',';
    for (int c = 0; c < m.q(); ++c) os << num(u[i][c]) << ',';
    os << num(d[i]) << '\n';
  }
}

void write_stages_csv(std::ostream& os, const RunReport& rep) {
  os << "stage,step,term,lambda,r_sup,r_bound,c0,c0_bound,e_over_lambda,e_bound,eps,ell,delta,"
        "sup_before,sup_after\n";
  for (const auto& s : rep.stages)
    for (std::size_t k = 0; k < s.steps.size(); ++k) {
      const auto& r = s.steps[k];
      os << s.index << ',' << k + 1 << ',' << r.term << ',' << num(r.lambda) << ','
         << num(r.r_sup) << ',' << num(r.r_bound) << ',' << num(r.c0) << ',' << num(r.c0_bound)
         << ',' << num(r.e_over_lambda) << ',' << num(r.e_bound) << ',' << num(s.eps) << ','
         << num(s.ell) << ',' << num(s.delta) << ',' << num(s.sup_before) << ','
         << num(s.sup_after) << '\n';
    }
}

}  // namespace corrint
