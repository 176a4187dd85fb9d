#include "corrint/models.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include <boost/math/special_functions/ellint_2.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "corrint/decomposition.hpp"

namespace corrint {

namespace {

constexpr double kPi = std::numbers::pi;

Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

ChartDomain box(std::vector<double> lo, std::vector<double> hi, std::optional<int> baxis,
                std::vector<int> periodic) {
  ChartDomain d;
  d.dim = (int)lo.size();
  d.lo = std::move(lo);
  d.hi = std::move(hi);
  d.boundary_axis = baxis;
  d.periodic_axes = std::move(periodic);
  d.validate();
  return d;
}

Mat h_from_christoffel(const std::function<Mat(const Vec&)>& metric, int n, const Vec& x) {
  Vec p(n);
  p[0] = 0.0;
  for (int i = 1; i < n; ++i) p[i] = x[i - 1];
  auto gam = christoffel_fd(SymMatField{n, metric}, p);
  return -gam[0].bottomRightCorner(n - 1, n - 1);
}

}  // namespace

Mat abar_normal(const BoundaryData& bd, const Vec& x) {
  const int d = bd.n - 1;
  const double h = 1e-3;
  Vec nb = bd.nubar(x);
  Mat a(d, d);
  for (int i = 0; i < d; ++i) {
    Vec p1 = x, p2 = x, m1 = x, m2 = x;
    p1[i] += h;
    p2[i] += 2 * h;
    m1[i] -= h;
    m2[i] -= 2 * h;
    Mat dJ = (bd.f_jac(m2) - 8 * bd.f_jac(m1) + 8 * bd.f_jac(p1) - bd.f_jac(p2)) / (12 * h);
    for (int j = 0; j < d; ++j) a(i, j) = dJ.col(j).dot(nb);
  }
  return 0.5 * (a + a.transpose());
}

Vec abar_vector(const BoundaryData& bd, const Vec& x, const Vec& v) {
  const int d = bd.n - 1;
  const double h = 1e-3;
  Mat F = bd.f_jac(x);
  Vec second = Vec::Zero(F.rows());
  for (int i = 0; i < d; ++i) {
    Vec p1 = x, p2 = x, m1 = x, m2 = x;
    p1[i] += h;
    p2[i] += 2 * h;
    m1[i] -= h;
    m2[i] -= 2 * h;
    Mat dJ = (bd.f_jac(m2) - 8 * bd.f_jac(m1) + 8 * bd.f_jac(p1) - bd.f_jac(p2)) / (12 * h);
    second += v[i] * (dJ * v);
  }
  Mat G = F.transpose() * F;
  Vec tang = F * G.ldlt().solve(F.transpose() * second);
  return second - tang;
}

DefectCheck check_model(const ModelSpec& m, int per_axis) {
  DefectCheck out;
  out.min_eig = std::numeric_limits<double>::infinity();
  out.min_eig_interior = std::numeric_limits<double>::infinity();
  GridSpec grid{std::vector<int>(m.domain.dim, per_axis)};
  const auto& dom = m.domain;
  grid.for_each(dom, [&](const Vec& x) {
    Mat J = m.base.jac(x);
    Mat D = m.metric(x) - pullback_metric(J);
    double e = sym_min_eigenvalue(D);
    out.min_eig = std::min(out.min_eig, e);
    ++out.samples;
    if (dom.boundary_axis) {
      int b = *dom.boundary_axis;
      double dist = x[b] - dom.lo[b];
      if (dist == 0.0) out.max_on_boundary = std::max(out.max_on_boundary, sym_norm(D));
      if (dist >= 0.05 * dom.extent(b)) out.min_eig_interior = std::min(out.min_eig_interior, e);
    } else {
      out.min_eig_interior = std::min(out.min_eig_interior, e);
    }
    if (m.closed_defect)
      out.max_closed_form_error =
          std::max(out.max_closed_form_error, (D - (*m.closed_defect)(x)).cwiseAbs().maxCoeff());
  });
  return out;
}

ModelSpec short_map_from_normal_data(const BoundaryData& bd, double eps_band) {
  const int n = bd.n;
  GridSpec bgrid{std::vector<int>(n - 1, 32)};
  bgrid.for_each(bd.boundary_domain, [&](const Vec& x) {
    Mat form = bd.h_field(x) - abar_normal(bd, x);
    double e = sym_min_eigenvalue(form);
    if (!(e > 1e-10)) throw HypothesisFailed(x, e);
  });

  auto s = [](double t) { return t - 0.5 * t * t; };
  auto sp = [](double t) { return 1.0 - t; };
  BaseMap base;
  base.n = n;
  base.q = n + 1;
  base.eval = [bd, s](const Vec& p) -> Vec {
    Vec x = p.tail(bd.n - 1);
    return bd.f(x) - s(p[0]) * bd.nubar(x);
  };
  base.jac = [bd, s, sp](const Vec& p) -> Mat {
    Vec x = p.tail(bd.n - 1);
    Mat J(bd.n + 1, bd.n);
    J.col(0) = -sp(p[0]) * bd.nubar(x);
    J.rightCols(bd.n - 1) = bd.f_jac(x) - s(p[0]) * bd.nubar_jac(x);
    return J;
  };

  std::vector<int> periodic;
  for (int a : bd.boundary_domain.periodic_axes) periodic.push_back(a + 1);
  std::vector<double> lo{0.0}, hi{eps_band};
  for (int i = 0; i < n - 1; ++i) {
    lo.push_back(bd.boundary_domain.lo[i]);
    hi.push_back(bd.boundary_domain.hi[i]);
  }

  ModelSpec spec;
  spec.name = "normal-data";
  spec.metric = SymMatField{n, bd.metric};
  spec.base = base;
  double eps = eps_band;
  GridSpec sgrid{std::vector<int>(n - 1, 16)};
  for (int halvings = 0;; ++halvings) {
    if (halvings > 40) throw HypothesisFailed(Vec(), 0.0);
    bool ok = true;
    std::vector<double> ts;
    for (int k = 1; k <= 16; ++k) ts.push_back(eps * k / 16.0);
    for (int k = 5; k <= 10; ++k) ts.push_back(std::ldexp(eps, -k));
    sgrid.for_each(bd.boundary_domain, [&](const Vec& x) {
      for (double t : ts) {
        Vec p(n);
        p[0] = t;
        p.tail(n - 1) = x;
        Mat D = bd.metric(p) - pullback_metric(base.jac(p));
        if (!(sym_min_eigenvalue(D) > 0.0)) ok = false;
      }
    });
    if (ok) break;
    eps *= 0.5;
  }
  hi[0] = eps;
  spec.domain = box(lo, hi, 0, periodic);
  spec.info["eps_band"] = eps;
  return spec;
}

ModelSpec model_circle() {
  ModelSpec m;
  m.name = "circle";
  m.domain = box({0.0}, {2 * kPi}, std::nullopt, {0});
  m.metric = SymMatField{1, [](const Vec&) -> Mat { return Mat::Identity(1, 1); }};
  m.base.n = 1;
  m.base.q = 2;
  m.base.eval = [](const Vec& x) -> Vec {
    Vec v(2);
    v << 0.5 * std::cos(x[0]), 0.5 * std::sin(x[0]);
    return v;
  };
  m.base.jac = [](const Vec& x) -> Mat {
    Mat J(2, 1);
    J << -0.5 * std::sin(x[0]), 0.5 * std::cos(x[0]);
    return J;
  };
  m.closed_defect = SymMatField{1, [](const Vec&) -> Mat { return Mat::Constant(1, 1, 0.75); }};
  return m;
}

ModelSpec model_sphere_band(double eps_geom, int side, double theta_max) {
  if (!(eps_geom > 0 && eps_geom <= 0.1)) throw std::invalid_argument("sphere-band: eps outside (0, 0.1]");
  if (side != 1 && side != -1) throw std::invalid_argument("sphere-band: side must be +1 or -1");
  ModelSpec m;
  m.name = "sphere-band";
  m.domain = box({0.0, 0.0}, {theta_max, 2 * kPi}, 0, {1});
  const double e = eps_geom, sg = side;
  m.metric = SymMatField{2, [sg](const Vec& x) -> Mat {
                           double c = std::cos(sg * x[0]);
                           return diag2(1.0, c * c);
                         }};
  m.base.n = 2;
  m.base.q = 3;
  m.base.eval = [e, sg](const Vec& x) -> Vec {
    double th = sg * x[0], ph = x[1];
    double rho = 1.0 - e * std::sin(th) * std::sin(th);
    Vec v(3);
    v << rho * std::cos(th) * std::cos(ph), rho * std::cos(th) * std::sin(ph), rho * std::sin(th);
    return v;
  };
  m.base.jac = [e, sg](const Vec& x) -> Mat {
    double th = sg * x[0], ph = x[1];
    double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
    double rho = 1.0 - e * st * st, drho = -2.0 * e * st * ct;
    Mat J(3, 2);
    J(0, 0) = sg * (drho * ct * cp - rho * st * cp);
    J(1, 0) = sg * (drho * ct * sp - rho * st * sp);
    J(2, 0) = sg * (drho * st + rho * ct);
    J(0, 1) = -rho * ct * sp;
    J(1, 1) = rho * ct * cp;
    J(2, 1) = 0.0;
    return J;
  };
  m.closed_defect = SymMatField{2, [e, sg](const Vec& x) -> Mat {
                                  double th = sg * x[0];
                                  double st = std::sin(th), ct = std::cos(th);
                                  double rho = 1.0 - e * st * st, drho = -2.0 * e * st * ct;
                                  return diag2(1.0 - rho * rho - drho * drho,
                                               (1.0 - rho * rho) * ct * ct);
                                }};
  m.info["eps_geom"] = eps_geom;
  m.info["side"] = side;
  m.info["theta_max"] = theta_max;
  return m;
}

double coin_length(double a) {
  // Perimeter of the ellipse with semi-axes 1 and a.
  double big = std::max(1.0, a), small = std::min(1.0, a);
  return 4.0 * big * boost::math::ellint_2(std::sqrt(1.0 - (small / big) * (small / big)));
}

double coin_constant(double a) {
  double L = coin_length(a);
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t it = 200;
  auto r = boost::math::tools::toms748_solve([L](double c) { return c * L - 2 * kPi; }, 1e-3,
                                             1e3, tol, it);
  return 0.5 * (r.first + r.second);
}

namespace {

/// t(s) for the arc-length parametrization of γ_a, with cubic Hermite interpolation.
struct ArcTable {
  double a, C;
  int N;
  std::vector<double> t, dt;

  double speed(double tt) const {
    return C * std::sqrt(std::sin(tt) * std::sin(tt) + a * a * std::cos(tt) * std::cos(tt));
  }

  ArcTable(double a_, int N_) : a(a_), C(coin_constant(a_)), N(N_) {
    using namespace boost::numeric::odeint;
    using State = std::array<double, 1>;
    std::vector<double> times(N + 1);
    for (int i = 0; i <= N; ++i) times[i] = 2 * kPi * i / N;
    t.assign(N + 1, 0.0);
    State st{0.0};
    auto rhs = [this](const State& x, State& dx, double) { dx[0] = 1.0 / speed(x[0]); };
    auto stepper = make_dense_output(1e-13, 1e-13, runge_kutta_dopri5<State>());
    integrate_times(stepper, rhs, st, times.begin(), times.end(), 1e-3,
                    [this](const State& x, double s) {
                      int i = (int)std::lround(s / (2 * kPi) * N);
                      t[i] = x[0];
                    });
    dt.resize(N + 1);
    for (int i = 0; i <= N; ++i) dt[i] = 1.0 / speed(t[i]);
  }

  double operator()(double s) const {
    double per = std::floor(s / (2 * kPi));
    double sr = s - 2 * kPi * per;
    double u = sr / (2 * kPi) * N;
    int i = std::clamp((int)u, 0, N - 1);
    double h = 2 * kPi / N;
    double w = u - i;
    double h00 = (1 + 2 * w) * (1 - w) * (1 - w), h10 = w * (1 - w) * (1 - w);
    double h01 = w * w * (3 - 2 * w), h11 = w * w * (w - 1);
    return h00 * t[i] + h10 * h * dt[i] + h01 * t[i + 1] + h11 * h * dt[i + 1] + 2 * kPi * per;
  }
};

}  // namespace

ModelSpec model_coin(double a, double eps_band) {
  if (!(a > 0)) throw std::invalid_argument("coin: a must be positive");
  auto tab = std::make_shared<const ArcTable>(a, 4096);
  ModelSpec m;
  m.name = "coin";
  m.domain = box({0.0, 0.0}, {eps_band, 2 * kPi}, 0, {1});
  m.metric = SymMatField{2, [](const Vec& x) -> Mat {
                           double r = x[0];
                           return diag2((1 + 2 * r) * (1 + 2 * r), (1 + r + r * r) * (1 + r + r * r));
                         }};
  m.base.n = 2;
  m.base.q = 3;
  m.base.eval = [tab](const Vec& x) -> Vec {
    double t = (*tab)(x[1]);
    Vec v(3);
    v << tab->C * std::cos(t), tab->C * tab->a * std::sin(t), x[0];
    return v;
  };
  m.base.jac = [tab](const Vec& x) -> Mat {
    double t = (*tab)(x[1]);
    double sp = tab->speed(t);
    Mat J = Mat::Zero(3, 2);
    J(2, 0) = 1.0;
    J(0, 1) = -tab->C * std::sin(t) / sp;
    J(1, 1) = tab->C * tab->a * std::cos(t) / sp;
    return J;
  };
  m.closed_defect = SymMatField{2, [](const Vec& x) -> Mat {
                                  double r = x[0];
                                  return diag2(4 * r * (1 + r), r * (1 + r) * (2 + r + r * r));
                                }};
  m.info["a"] = a;
  m.info["C_a"] = tab->C;
  m.info["eps_band"] = eps_band;
  return m;
}

double coin_diameter(double a, int samples) {
  double C = coin_constant(a);
  std::vector<std::array<double, 2>> p(samples);
  for (int i = 0; i < samples; ++i) {
    double t = 2 * kPi * i / samples;
    p[i] = {C * std::cos(t), C * a * std::sin(t)};
  }
  double d = 0.0;
  for (int i = 0; i < samples; ++i)
    for (int j = i + 1; j < samples; ++j)
      d = std::max(d, std::hypot(p[i][0] - p[j][0], p[i][1] - p[j][1]));
  return d;
}

ModelSpec model_dirichlet_disk(const std::function<double(const Vec&)>& phi, const BaseMap& u_embed,
                               const ChartDomain& domain) {
  GridSpec grid{std::vector<int>(domain.dim, 33)};
  bool nontrivial = false;
  grid.for_each(domain, [&](const Vec& x) {
    double p = phi(x);
    if (!(p > 0.0 && p <= 1.0)) throw PhiRangeError("dirichlet: phi leaves (0, 1]");
    if (domain.on_boundary(x) && std::abs(p - 1.0) > 1e-12)
      throw PhiRangeError("dirichlet: phi must equal 1 on the boundary");
    if (!domain.on_boundary(x) && p < 1.0 - 1e-14) nontrivial = true;
  });
  ModelSpec m;
  m.name = "dirichlet";
  m.domain = domain;
  m.base = u_embed;
  auto jac = u_embed.jac;
  m.metric = SymMatField{domain.dim, [jac, phi](const Vec& x) -> Mat {
                           return pullback_metric(jac(x)) / phi(x);
                         }};
  m.closed_defect = SymMatField{domain.dim, [jac, phi](const Vec& x) -> Mat {
                                  double p = phi(x);
                                  return (1.0 - p) * pullback_metric(jac(x)) / p;
                                }};
  if (!nontrivial) m.warnings.push_back("defect vanishes off B; not an adapted short map");
  return m;
}

ModelSpec model_dirichlet_default(double c) {
  ChartDomain dom = box({0.0, 0.0}, {0.5, 2 * kPi}, 0, {1});
  BaseMap u;
  u.n = 2;
  u.q = 3;
  u.eval = [](const Vec& x) -> Vec {
    double r = 1.0 - x[0];
    Vec v(3);
    v << r * std::cos(x[1]), r * std::sin(x[1]), 0.0;
    return v;
  };
  u.jac = [](const Vec& x) -> Mat {
    double r = 1.0 - x[0];
    Mat J = Mat::Zero(3, 2);
    J(0, 0) = -std::cos(x[1]);
    J(1, 0) = -std::sin(x[1]);
    J(0, 1) = -r * std::sin(x[1]);
    J(1, 1) = r * std::cos(x[1]);
    return J;
  };
  auto phi = [c](const Vec& x) {
    double r = 1.0 - x[0];
    return 1.0 - c * (1.0 - r * r);
  };
  ModelSpec m = model_dirichlet_disk(phi, u, dom);
  m.info["c"] = c;
  return m;
}

BoundaryData equator_boundary_data(bool outward_normal) {
  BoundaryData bd;
  bd.n = 2;
  bd.boundary_domain = box({0.0}, {2 * kPi}, std::nullopt, {0});
  bd.f = [](const Vec& x) -> Vec {
    Vec v(3);
    v << std::cos(x[0]), std::sin(x[0]), 0.0;
    return v;
  };
  bd.f_jac = [](const Vec& x) -> Mat {
    Mat J(3, 1);
    J << -std::sin(x[0]), std::cos(x[0]), 0.0;
    return J;
  };
  if (outward_normal) {
    bd.nubar = bd.f;
    bd.nubar_jac = bd.f_jac;
  } else {
    bd.nubar = [](const Vec&) -> Vec {
      Vec v(3);
      v << 0.0, 0.0, -1.0;
      return v;
    };
    bd.nubar_jac = [](const Vec&) -> Mat { return Mat::Zero(3, 1); };
  }
  bd.metric = [](const Vec& p) -> Mat {
    double c = std::cos(p[0]);
    return diag2(1.0, c * c);
  };
  auto metric = bd.metric;
  bd.h_field = [metric](const Vec& x) { return h_from_christoffel(metric, 2, x); };
  return bd;
}

BoundaryData flat_segment_boundary_data() {
  BoundaryData bd;
  bd.n = 2;
  bd.boundary_domain = box({0.0}, {1.0}, std::nullopt, {});
  bd.f = [](const Vec& x) -> Vec {
    Vec v(3);
    v << x[0], 0.0, 0.0;
    return v;
  };
  bd.f_jac = [](const Vec&) -> Mat {
    Mat J(3, 1);
    J << 1.0, 0.0, 0.0;
    return J;
  };
  bd.nubar = [](const Vec&) -> Vec {
    Vec v(3);
    v << 0.0, 1.0, 0.0;
    return v;
  };
  bd.nubar_jac = [](const Vec&) -> Mat { return Mat::Zero(3, 1); };
  bd.metric = [](const Vec&) -> Mat { return Mat::Identity(2, 2); };
  auto metric = bd.metric;
  bd.h_field = [metric](const Vec& x) { return h_from_christoffel(metric, 2, x); };
  return bd;
}

double psi_value(double psi1, double r) {
  double d = r - 1.0;
  return r * r + (psi1 - 2.0) * d * std::exp(-d * d / 0.0625);
}

namespace {

/// Round metric of S^{n-1} in the boundary chart (φ) or (α, φ).
Mat round_metric(int n, const Vec& x) {
  if (n == 2) return Mat::Identity(1, 1);
  double s = std::sin(x[0]);
  return diag2(1.0, s * s);
}

std::function<Mat(const Vec&)> warped_metric(int n, std::function<double(double)> warp) {
  return [n, warp](const Vec& p) -> Mat {
    Mat g = Mat::Zero(n, n);
    g(0, 0) = 1.0;
    g.bottomRightCorner(n - 1, n - 1) = warp(1.0 + p[0]) * round_metric(n, p.tail(n - 1));
    return g;
  };
}

}  // namespace

BoundaryData psi_boundary_data(double psi1, int n) {
  if (n != 2 && n != 3) throw std::invalid_argument("psi example: n must be 2 or 3");
  BoundaryData bd;
  bd.n = n;
  if (n == 2) {
    bd.boundary_domain = box({0.0}, {2 * kPi}, std::nullopt, {0});
    bd.f = [](const Vec& x) -> Vec {
      Vec v(3);
      v << std::cos(x[0]), std::sin(x[0]), 0.0;
      return v;
    };
    bd.f_jac = [](const Vec& x) -> Mat {
      Mat J(3, 1);
      J << -std::sin(x[0]), std::cos(x[0]), 0.0;
      return J;
    };
  } else {
    bd.boundary_domain = box({0.4, 0.0}, {kPi - 0.4, 2 * kPi}, std::nullopt, {1});
    bd.f = [](const Vec& x) -> Vec {
      Vec v(4);
      v << std::sin(x[0]) * std::cos(x[1]), std::sin(x[0]) * std::sin(x[1]), std::cos(x[0]), 0.0;
      return v;
    };
    bd.f_jac = [](const Vec& x) -> Mat {
      Mat J(4, 2);
      double sa = std::sin(x[0]), ca = std::cos(x[0]), sp = std::sin(x[1]), cp = std::cos(x[1]);
      J << ca * cp, -sa * sp, ca * sp, sa * cp, -sa, 0.0, 0.0, 0.0;
      return J;
    };
  }
  auto f = bd.f;
  auto fj = bd.f_jac;
  bd.nubar = [f](const Vec& x) -> Vec { return -f(x); };
  bd.nubar_jac = [fj](const Vec& x) -> Mat { return -fj(x); };
  bd.metric = warped_metric(n, [psi1](double r) { return psi_value(psi1, r); });
  auto metric = bd.metric;
  bd.h_field = [metric, n](const Vec& x) { return h_from_christoffel(metric, n, x); };
  return bd;
}

ObstructionModelReport model_obstruction_metric(double psi1, int n) {
  ObstructionModelReport rep;
  rep.n = n;
  rep.psi1 = psi1;
  Vec x(n - 1);
  if (n == 2)
    x << 0.7;
  else
    x << 1.1, 0.7;
  auto ghat = warped_metric(n, [psi1](double r) { return psi_value(psi1, r); });
  auto geuc = warped_metric(n, [](double r) { return r * r; });
  Mat hh = h_from_christoffel(ghat, n, x);
  Mat h0 = h_from_christoffel(geuc, n, x);
  rep.margin = hh - h0;
  rep.expected = 0.5 * (psi1 - 2.0) * round_metric(n, x);
  rep.max_error = (rep.margin - rep.expected).cwiseAbs().maxCoeff();
  rep.min_margin_eig = sym_min_eigenvalue(rep.margin);
  rep.obstructed = rep.min_margin_eig > 1e-10;
  rep.verdict = rep.obstructed ? "C1-extension obstructed" : "not obstructed by this criterion";
  return rep;
}

std::vector<std::string> model_names() {
  return {"circle", "sphere-band", "coin", "dirichlet", "equator", "psi"};
}

ModelSpec model_by_name(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&](const char* k, double d) {
    auto it = params.find(k);
    return it == params.end() ? d : it->second;
  };
  if (name == "circle") return model_circle();
  if (name == "sphere-band")
    return model_sphere_band(get("eps_geom", 0.1), (int)get("side", 1), get("theta_max", 1.2));
  if (name == "coin") return model_coin(get("a", 0.5), get("eps_band", 0.1));
  if (name == "dirichlet") return model_dirichlet_default(get("c", 0.3));
  if (name == "equator") {
    ModelSpec m = short_map_from_normal_data(equator_boundary_data(true), get("eps_band", 0.5));
    m.name = "equator";
    return m;
  }
  if (name == "psi") {
    int n = (int)get("n", 2);
    ModelSpec m = short_map_from_normal_data(psi_boundary_data(get("psi1", 3.0), n), get("eps_band", 0.2));
    m.name = "psi";
    return m;
  }
  throw std::invalid_argument("unknown model: " + name);
}

}  // namespace corrint
