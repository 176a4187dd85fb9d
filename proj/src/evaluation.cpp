#include "corrint/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace corrint {

double pow2_step(double h) { return std::ldexp(1.0, std::ilogb(h)); }

Stencil derivative_stencil(const ChartDomain& dom, int axis, const Vec& x, double h) {
  Stencil s{};
  const bool periodic = dom.is_periodic(axis);
  if (!periodic && x[axis] - 2 * h < dom.lo[axis]) {
    const double w[5] = {-25, 48, -36, 16, -3};
    for (int c = 0; c < 5; ++c) {
      s.off[c] = c * h;
      s.w[c] = w[c] / (12 * h);
    }
    s.count = 5;
  } else if (!periodic && x[axis] + 2 * h > dom.hi[axis]) {
    const double w[5] = {25, -48, 36, -16, 3};
    for (int c = 0; c < 5; ++c) {
      s.off[c] = -c * h;
      s.w[c] = w[c] / (12 * h);
    }
    s.count = 5;
  } else {
    const double off[4] = {-2, -1, 1, 2};
    const double w[4] = {1, -8, 8, -1};
    for (int c = 0; c < 4; ++c) {
      s.off[c] = off[c] * h;
      s.w[c] = w[c] / (12 * h);
    }
    s.count = 4;
  }
  return s;
}

LayeredMap::LayeredMap(ChartDomain domain, BaseMap base, SymMatField metric)
    : domain_(std::make_shared<const ChartDomain>(std::move(domain))),
      base_(std::make_shared<const BaseMap>(std::move(base))),
      metric_(std::make_shared<const SymMatField>(std::move(metric))) {}

double LayeredMap::lambda_max(int level) const {
  level = resolve(level);
  double m = 0.0;
  for (int k = 0; k < level; ++k) m = std::max(m, layers_[k].lambda);
  return m;
}

double LayeredMap::fd_step(int k) const {
  double lm = lambda_max(k - 1);
  return pow2_step(lm > 0 ? std::min(1e-4, 1e-2 / lm) : 1e-4);
}

double LayeredMap::phase(int k, const Vec& x) const {
  const auto& L = layer(k);
  return L.lambda * x.dot(L.nu);
}

double LayeredMap::eta_at(int k, const Vec& x, double offset) const {
  const auto& L = layer(k);
  if (!L.cutoff) return 1.0;
  int b = *domain_->boundary_axis;
  return (*L.cutoff)(x[b] - domain_->lo[b] + offset);
}

LayeredMap::Pre LayeredMap::pre_fields(int k, const Vec& x, const Mat& J_prev,
                                       const Mat& J_start) const {
  const auto& L = layer(k);
  Pre p;
  Frame fr;
  try {
    fr = corr_frame(J_prev, L.nu);
  } catch (const ImmersionLost& e) {
    throw ImmersionLost(e.what(), x);
  }
  p.xi = fr.xi;
  p.zeta = fr.zeta;
  p.xtn = fr.xi_tilde_norm;
  p.eta = eta_at(k, x);
  if (p.eta == 0.0 || L.tau_scale == 0.0) return p;
  Mat D = metric_->eval(x) - pullback_metric(J_start);
  p.a2 = std::max(0.0, L.coeff(D));
  p.s = L.sqrt_one_minus_delta * L.tau_scale * p.eta * std::sqrt(p.a2) * p.xtn;
  return p;
}

SlowFields LayeredMap::fields(int k, const Vec& x, const std::vector<Level>& lv,
                              bool derivatives) const {
  const auto& L = layer(k);
  const int n = this->n(), q = this->q();
  const Level& prev = lv[k - 1];
  const Level& start = lv[L.start_level];
  SlowFields sf;
  sf.u_prev = prev.u;
  sf.J_prev = prev.J;
  Pre p = pre_fields(k, x, prev.J, start.J);
  sf.xi = p.xi;
  sf.zeta = p.zeta;
  sf.xi_tilde_norm = p.xtn;
  sf.a2 = p.a2;
  sf.eta = p.eta;
  sf.s = p.s;
  sf.grad_s = Vec::Zero(n);
  sf.dxi = Mat::Zero(q, n);
  sf.dzeta = Mat::Zero(q, n);
  const double h = fd_step(k);
  sf.active = L.tau_scale != 0.0 && eta_at(k, x, 4 * h) > 0.0;
  if (!derivatives || !sf.active) return sf;
  // Differences along the tangent line (x + εe_i, J + εH_i) give the chain-rule derivative.
  for (int i = 0; i < n; ++i) {
    Stencil st = derivative_stencil(*domain_, i, x, h);
    for (int c = 0; c < st.count; ++c) {
      double w = st.w[c], off = st.off[c];
      if (off == 0.0) {
        sf.dxi.col(i) += w * p.xi;
        sf.dzeta.col(i) += w * p.zeta;
        sf.grad_s[i] += w * p.s;
        continue;
      }
      Vec y = x;
      y[i] += off;
      Mat Jy = prev.J + off * prev.H[i];
      Mat Js = L.start_level == k - 1 ? Jy : Mat(start.J + off * start.H[i]);
      Pre py = pre_fields(k, y, Jy, Js);
      sf.dxi.col(i) += w * py.xi;
      sf.dzeta.col(i) += w * py.zeta;
      sf.grad_s[i] += w * py.s;
    }
  }
  return sf;
}

void LayeredMap::chain(const Vec& x, int upto, std::vector<Level>& lv) const {
  const int n = this->n();
  lv.clear();
  lv.reserve(upto + 1);
  Level b;
  b.u = base_->eval(x);
  b.J = base_->jac(x);
  const double hb = pow2_step(1e-3);
  for (int i = 0; i < n; ++i) {
    b.H[i] = Mat::Zero(q(), n);
    Stencil st = derivative_stencil(*domain_, i, x, hb);
    for (int c = 0; c < st.count; ++c) {
      Vec y = x;
      y[i] += st.off[c];
      b.H[i] += st.w[c] * (st.off[c] == 0.0 ? b.J : base_->jac(y));
    }
  }
  lv.push_back(std::move(b));
  for (int k = 1; k <= upto; ++k) {
    SlowFields sf = fields(k, x, lv, true);
    if (!sf.active) {
      lv.push_back(lv.back());
      continue;
    }
    const auto& L = layer(k);
    CorrugationProfile prof(sf.s);
    auto g = prof.at(phase(k, x));
    Level nx;
    nx.u = sf.u_prev + (g.g.first * sf.xi + g.g.second * sf.zeta) / L.lambda;
    Vec w = g.dt.first * sf.xi + g.dt.second * sf.zeta;
    Vec wst = g.dst.first * sf.xi + g.dst.second * sf.zeta;
    Vec wtt = g.dtt.first * sf.xi + g.dtt.second * sf.zeta;
    Mat E = (g.ds.first * sf.xi + g.ds.second * sf.zeta) * sf.grad_s.transpose() +
            g.g.first * sf.dxi + g.g.second * sf.dzeta;
    nx.J = sf.J_prev + w * L.nu.transpose() + E / L.lambda;
    // ∂_i of the O(1) and O(λ) parts; terms of order λ_{k-1}²/λ_k are dropped.
    Mat F = wst * sf.grad_s.transpose() + g.dt.first * sf.dxi + g.dt.second * sf.dzeta;
    const Level& pv = lv[k - 1];
    for (int i = 0; i < n; ++i) {
      Vec col = L.lambda * L.nu[i] * wtt + F.col(i);
      nx.H[i] = pv.H[i] + col * L.nu.transpose() + L.nu[i] * F;
    }
    lv.push_back(std::move(nx));
  }
}

SlowFields LayeredMap::slow_fields(int k, const Vec& x, bool derivatives,
                                   std::vector<Jet>* out) const {
  std::vector<Level> lv;
  chain(x, k - 1, lv);
  if (out) {
    out->clear();
    for (const auto& l : lv) out->push_back({l.u, l.J});
  }
  return fields(k, x, lv, derivatives);
}

Jet LayeredMap::lift(int k, const SlowFields& sf, const CorrugationProfile& prof,
                     double theta) const {
  if (!sf.active) return {sf.u_prev, sf.J_prev};
  const auto& L = layer(k);
  auto g = prof.at(theta);
  Jet out;
  out.u = sf.u_prev + (g.g.first * sf.xi + g.g.second * sf.zeta) / L.lambda;
  Vec w = g.dt.first * sf.xi + g.dt.second * sf.zeta;
  Mat E = (g.ds.first * sf.xi + g.ds.second * sf.zeta) * sf.grad_s.transpose() +
          g.g.first * sf.dxi + g.g.second * sf.dzeta;
  out.J = sf.J_prev + w * L.nu.transpose() + E / L.lambda;
  return out;
}

StepTerms LayeredMap::step_terms(int k, const SlowFields& sf,
                                 const CorrugationProfile::Sample& g) const {
  const auto& L = layer(k);
  StepTerms t;
  t.combo = g.g.first * sf.xi + g.g.second * sf.zeta;
  Vec w = g.dt.first * sf.xi + g.dt.second * sf.zeta;
  t.M = sf.J_prev + w * L.nu.transpose();
  t.E = (g.ds.first * sf.xi + g.ds.second * sf.zeta) * sf.grad_s.transpose() +
        g.g.first * sf.dxi + g.g.second * sf.dzeta;
  double inc = sf.xi_tilde_norm > 0 ? sf.s * sf.s / (sf.xi_tilde_norm * sf.xi_tilde_norm) : 0.0;
  t.r0 = pullback_metric(t.M) - pullback_metric(sf.J_prev) - inc * L.nu * L.nu.transpose();
  Mat me = t.M.transpose() * t.E;
  t.A = me + me.transpose();
  t.B = pullback_metric(t.E);
  return t;
}

Jet LayeredMap::jet(const Vec& x, int level) const {
  level = resolve(level);
  if (level == 0) return {base_->eval(x), base_->jac(x)};
  std::vector<Level> lv;
  chain(x, level - 1, lv);
  SlowFields sf = fields(level, x, lv, true);
  if (!sf.active) return {std::move(sf.u_prev), std::move(sf.J_prev)};
  CorrugationProfile prof(sf.s);
  return lift(level, sf, prof, phase(level, x));
}

Vec LayeredMap::value(const Vec& x, int level) const {
  level = resolve(level);
  if (level == 0) return base_->eval(x);
  std::vector<Level> lv;
  chain(x, level - 1, lv);
  SlowFields sf = fields(level, x, lv, false);
  if (sf.s == 0.0) return sf.u_prev;
  CorrugationProfile prof(sf.s);
  auto g = prof.value(phase(level, x));
  return sf.u_prev + (g.first * sf.xi + g.second * sf.zeta) / layer(level).lambda;
}

Mat LayeredMap::jacobian(const Vec& x, int level) const { return jet(x, level).J; }

Mat LayeredMap::jacobian_fd(const Vec& x, int level) const {
  level = resolve(level);
  double lm = lambda_max(level);
  double h = pow2_step(lm > 0 ? std::min(1e-4, 1e-2 / lm) : 1e-4);
  Mat J = Mat::Zero(q(), n());
  for (int i = 0; i < n(); ++i) {
    Stencil st = derivative_stencil(*domain_, i, x, h);
    for (int c = 0; c < st.count; ++c) {
      Vec y = x;
      y[i] += st.off[c];
      J.col(i) += st.w[c] * value(y, level);
    }
  }
  return J;
}

LayeredMap LayeredMap::with_layer(CorrugationLayer layer) const {
  LayeredMap m = *this;
  m.layers_.push_back(std::move(layer));
  return m;
}

LayeredMap LayeredMap::prefix(int level) const {
  LayeredMap m = *this;
  m.layers_.resize(resolve(level));
  return m;
}

SymMatField defect_field(const LayeredMap& m, const SymMatField& g) {
  return {g.dim, [m, g](const Vec& x) -> Mat { return g(x) - pullback_metric(m.jacobian(x)); }};
}

}  // namespace corrint
