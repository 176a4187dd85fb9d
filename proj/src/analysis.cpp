#include "corrint/analysis.hpp"

#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

namespace corrint {

std::vector<Mat> GeodesicModel::gamma(const Vec& x) const {
  return christoffel ? christoffel(x) : christoffel_fd(metric, x);
}

GeodesicModel GeodesicModel::euclidean() {
  GeodesicModel gm;
  gm.metric = SymMatField{2, [](const Vec&) -> Mat { return Mat::Identity(2, 2); }};
  gm.christoffel = [](const Vec&) { return std::vector<Mat>(2, Mat::Zero(2, 2)); };
  return gm;
}

GeodesicModel GeodesicModel::round_sphere() {
  GeodesicModel gm;
  gm.metric = SymMatField{2, [](const Vec& x) -> Mat {
                            Mat g = Mat::Zero(2, 2);
                            double s = std::sin(x[0]);
                            g(0, 0) = 1.0;
                            g(1, 1) = s * s;
                            return g;
                          }};
  gm.christoffel = [](const Vec& x) {
    std::vector<Mat> gam(2, Mat::Zero(2, 2));
    double s = std::sin(x[0]), c = std::cos(x[0]);
    gam[0](1, 1) = -s * c;
    gam[1](0, 1) = gam[1](1, 0) = c / s;
    return gam;
  };
  return gm;
}

GeodesicEnd shoot(const GeodesicModel& gm, const Vec& p, const Vec& v) {
  using State = std::array<double, 4>;
  namespace ode = boost::numeric::odeint;
  auto rhs = [&gm](const State& y, State& dy, double) {
    Vec x(2), w(2);
    x << y[0], y[1];
    w << y[2], y[3];
    auto gam = gm.gamma(x);
    dy[0] = y[2];
    dy[1] = y[3];
    for (int k = 0; k < 2; ++k) dy[2 + k] = -w.dot(gam[k] * w);
  };
  auto speed = [&gm](const State& y) {
    Vec x(2), w(2);
    x << y[0], y[1];
    w << y[2], y[3];
    return std::sqrt(w.dot(gm.metric(x) * w));
  };
  State y{p[0], p[1], v[0], v[1]};
  const double s0 = speed(y);
  double drift = 0.0;
  auto stepper = ode::make_controlled(gm.tol, gm.tol, ode::runge_kutta_dopri5<State>());
  ode::integrate_adaptive(stepper, rhs, y, 0.0, 1.0, 1e-3, [&](const State& st, double) {
    if (s0 > 0) drift = std::max(drift, std::abs(speed(st) - s0) / s0);
  });
  GeodesicEnd out;
  out.x = Vec(2);
  out.v = Vec(2);
  out.x << y[0], y[1];
  out.v << y[2], y[3];
  out.speed_drift = drift;
  return out;
}

GeodesicDistance geodesic_solve(const GeodesicModel& gm, const Vec& p, const Vec& q) {
  GeodesicDistance out;
  if ((q - p).norm() == 0.0) return out;
  Mat L = gm.metric(p).llt().matrixU();  // g = LᵀL; v = L⁻¹(cos α, sin α) is g-unit
  Mat Linv = L.inverse();
  auto velocity = [&](double alpha, double len) -> Vec {
    Vec e(2);
    e << std::cos(alpha), std::sin(alpha);
    return len * (Linv * e);
  };
  Vec w = L * (q - p);
  double alpha = std::atan2(w[1], w[0]);
  double len = w.norm();
  const double h = 1e-6;
  for (int it = 0; it < 60; ++it) {
    GeodesicEnd e = shoot(gm, p, velocity(alpha, len));
    Vec F = e.x - q;
    out.residual = F.norm();
    out.speed_drift = e.speed_drift;
    out.iterations = it;
    if (out.residual <= 1e-14 * std::max(1.0, q.norm())) break;
    Mat Jf(2, 2);
    Vec xp = shoot(gm, p, velocity(alpha + h, len)).x;
    Vec xm = shoot(gm, p, velocity(alpha - h, len)).x;
    Jf.col(0) = (xp - xm) / (2 * h);
    Jf.col(1) = e.v / len;  // unit time with speed len: ∂x(1)/∂len = v(1)/len
    Vec step = Jf.fullPivLu().solve(F);
    alpha -= step[0];
    len -= step[1];
    if (!(len > 0) || !std::isfinite(len)) throw ShootingDiverged("geodesic: shooting diverged", out.residual);
  }
  if (!(out.residual <= 1e-10)) throw ShootingDiverged("geodesic: residual above 1e-10", out.residual);
  out.length = len;
  return out;
}

double geodesic_distance(const GeodesicModel& gm, const Vec& p, const Vec& q) {
  return geodesic_solve(gm, p, q).length;
}

ExpansionFit expansion_check(const GeodesicModel& gm, const std::function<Vec(double)>& curve,
                             double k_g) {
  ExpansionFit fit;
  fit.expected = -k_g * k_g / 24.0;
  const double T = 0.03 / std::max(std::abs(k_g), 0.5);
  Vec p = curve(0.0);
  Eigen::Matrix<double, 4, 2> A;
  Eigen::Vector4d y;
  for (int i = 0; i < 4; ++i) {
    double t = std::ldexp(T, -i);
    double d = geodesic_distance(gm, p, curve(t));
    fit.t.push_back(t);
    fit.d.push_back(d);
    A(i, 0) = 1.0;
    A(i, 1) = t;
    y[i] = (d - t) / (t * t * t);
  }
  Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
  fit.c3 = c[0];
  fit.c4 = c[1];
  fit.rel_error = fit.expected != 0.0 ? std::abs(fit.c3 - fit.expected) / std::abs(fit.expected)
                                      : std::abs(fit.c3);
  return fit;
}

ObstructionReport obstruction_verdict(const BoundaryData& bd, const Vec& x,
                                      const std::vector<Vec>& directions) {
  ObstructionReport rep;
  rep.x = x;
  const int d = bd.n - 1;
  Vec p(bd.n);
  p[0] = 0.0;
  p.tail(d) = x;
  Mat gB = bd.metric(p).bottomRightCorner(d, d);
  Mat h = bd.h_field(x);
  rep.max_margin = -std::numeric_limits<double>::infinity();
  for (const Vec& v0 : directions) {
    Vec v = v0 / std::sqrt(v0.dot(gB * v0));
    DirectionMargin dm;
    dm.v = v;
    dm.h = std::abs(v.dot(h * v));
    dm.abar = abar_vector(bd, x, v).norm();
    dm.margin = dm.h - dm.abar;
    rep.max_margin = std::max(rep.max_margin, dm.margin);
    rep.directions.push_back(dm);
  }
  rep.obstructed = rep.max_margin > 1e-10;
  rep.verdict = rep.obstructed ? "obstructed" : "not obstructed";
  return rep;
}

LengthComparison length_comparison(const LayeredMap& m, const SymMatField& g,
                                   const std::function<Vec(double)>& curve, double t0, double t1,
                                   int samples) {
  LengthComparison out;
  Vec prev = curve(t0);
  Vec uprev = m.value(prev);
  for (int i = 1; i <= samples; ++i) {
    Vec x = curve(t0 + (t1 - t0) * i / samples);
    Vec dx = x - prev;
    Mat G = g(0.5 * (x + prev));
    out.intrinsic += std::sqrt(dx.dot(G * dx));
    Vec u = m.value(x);
    out.extrinsic += (u - uprev).norm();
    prev = x;
    uprev = u;
  }
  return out;
}

}  // namespace corrint
