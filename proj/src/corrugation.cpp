#include "corrint/corrugation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace corrint {

namespace {

constexpr double kPi = std::numbers::pi;
/// Below this |s| the profile is the series f = √2 s (1 − 5s²/16) + O(s⁵).
constexpr double kSeriesS = 1e-6;
/// J_0 .. J_kOrders at x ≥ 0 by Miller's backward recurrence, normalized by J₀ + 2ΣJ_{2k} = 1.
/// Also returns 1 − J₀ = 2ΣJ_{2k} (k ≥ 1), free of cancellation.
double bessel_miller(double x, std::array<double, CorrugationProfile::kOrders + 1>& out) {
  constexpr int kStart = 32;
  if (x == 0.0) {
    out.fill(0.0);
    out[0] = 1.0;
    return 0.0;
  }
  if (x < 1e-5) {
    // Two-term power series; the recurrence would overflow at tiny x.
    const double h = 0.5 * x, h2 = h * h;
    double p = 1.0;
    for (int n = 0; n <= CorrugationProfile::kOrders; ++n) {
      out[n] = p * (1.0 - h2 / (n + 1));
      p *= h / (n + 1);
    }
    return h2 * (1.0 - 0.25 * h2);
  }
  double jp = 0.0, j = 1e-300, even = 0.0, norm = 0.0;
  const double inv = 2.0 / x;
  for (int n = kStart; n >= 1; --n) {
    double jm = n * inv * j - jp;
    jp = j;
    j = jm;
    // j now holds the unnormalized J_{n-1}
    if (n - 1 <= CorrugationProfile::kOrders) out[n - 1] = j;
    if ((n - 1) % 2 == 0 && n - 1 > 0) even += j;
    if (std::abs(j) > 1e250) {
      constexpr double sc = 1e-250;
      j *= sc;
      jp *= sc;
      even *= sc;
      for (int m = n - 1; m <= CorrugationProfile::kOrders; ++m) out[m] *= sc;
    }
  }
  norm = out[0] + 2.0 * even;
  for (auto& v : out) v /= norm;
  return 2.0 * even / norm;
}

/// (1 - J0(x), J1(x)).
Pair omj0_j1(double x) {
  std::array<double, CorrugationProfile::kOrders + 1> J;
  double a = bessel_miller(std::abs(x), J);
  return {a, x < 0 ? -J[1] : J[1]};
}

struct ProfileTable {
  static constexpr double kSMax = 64.0;
  static constexpr int kN = 1024;
  std::vector<double> f, fp;
};

double solve_f(double s, double seed);

const ProfileTable& profile_table() {
  static ProfileTable t;
  static std::once_flag once;
  std::call_once(once, [] {
    t.f.resize(ProfileTable::kN + 1);
    double mu = bessel_zero_mu();
    t.f[0] = 0.0;
    for (int i = 1; i <= ProfileTable::kN; ++i) {
      double s = ProfileTable::kSMax * i / ProfileTable::kN;
      double seed = std::min(t.f[i - 1] + std::sqrt(2.0) * ProfileTable::kSMax / ProfileTable::kN,
                             0.5 * (t.f[i - 1] + mu));
      t.f[i] = solve_f(s, seed);
    }
    t.fp.resize(ProfileTable::kN + 1);
    t.fp[0] = std::sqrt(2.0);
    for (int i = 1; i <= ProfileTable::kN; ++i) {
      double s = ProfileTable::kSMax * i / ProfileTable::kN;
      double R = std::sqrt(1.0 + s * s);
      t.fp[i] = s / (omj0_j1(t.f[i]).second * R * R * R);
    }
  });
  return t;
}

double solve_f(double s, double seed) {
  double R = std::sqrt(1.0 + s * s);
  double target = s * s / (R * (1.0 + R));
  double mu = bessel_zero_mu();
  auto fn = [target](double x) {
    auto [a, b] = omj0_j1(x);
    return std::make_pair(a - target, b);
  };
  std::uintmax_t iters = 100;
  return boost::math::tools::newton_raphson_iterate(fn, std::clamp(seed, 0.0, mu), 0.0, mu,
                                                    std::numeric_limits<double>::digits - 4,
                                                    iters);
}

}  // namespace

double bessel_j(int order, double x) {
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  int n = 2 * ((int)std::ceil(std::abs(x)) + 24 + order);
  n = (n + 3) / 4 * 4;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    double tau = 2.0 * kPi * j / n;
    acc += std::cos(order * tau - x * std::sin(tau));
  }
  return acc / n;
}

double one_minus_j0(double x) { return omj0_j1(x).first; }

double bessel_zero_mu() {
  static const double mu = [] {
    double lo = 2.0, hi = 3.0;
    while (hi - lo > 1e-15) {
      double mid = 0.5 * (lo + hi);
      if (bessel_j(0, mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }();
  return mu;
}

double profile_f(double s) {
  if (s == 0.0) return 0.0;
  double a = std::abs(s);
  if (a < kSeriesS) return std::sqrt(2.0) * s * (1.0 - 5.0 * s * s / 16.0);
  const auto& t = profile_table();
  double seed;
  double u = a / ProfileTable::kSMax * ProfileTable::kN;
  if (u >= ProfileTable::kN) {
    seed = t.f.back();
  } else {
    int i = (int)u;
    double w = u - i, h = ProfileTable::kSMax / ProfileTable::kN;
    double h00 = (1 + 2 * w) * (1 - w) * (1 - w), h10 = w * (1 - w) * (1 - w);
    double h01 = w * w * (3 - 2 * w), h11 = w * w * (w - 1);
    seed = h00 * t.f[i] + h10 * h * t.fp[i] + h01 * t.f[i + 1] + h11 * h * t.fp[i + 1];
  }
  double f = solve_f(a, seed);
  return s < 0 ? -f : f;
}

double profile_f_prime(double s) {
  if (s == 0.0) {
    const double h = 1e-3;
    double d = (-profile_f(2 * h) + 8 * profile_f(h) - 8 * profile_f(-h) + profile_f(-2 * h)) /
               (12 * h);
    return std::min(d, std::sqrt(2.0));
  }
  if (std::abs(s) < kSeriesS) return std::sqrt(2.0) * (1.0 - 15.0 * s * s / 16.0);
  double f = profile_f(s);
  double R2 = 1.0 + s * s;
  return s / (omj0_j1(f).second * R2 * std::sqrt(R2));
}

CorrugationProfile::CorrugationProfile(double s) : s_(s) {
  R_ = std::sqrt(1.0 + s * s);
  if (s == 0.0) {
    f_ = 0.0;
    fp_ = profile_f_prime(0.0);
  } else if (std::abs(s) < kSeriesS) {
    f_ = profile_f(s);
    fp_ = profile_f_prime(s);
  } else {
    f_ = profile_f(s);
    fp_ = s / (omj0_j1(f_).second * R_ * R_ * R_);
  }
  std::array<double, kOrders + 1> J;
  bessel_miller(std::abs(f_), J);
  if (f_ < 0)
    for (int n = 1; n <= kOrders; n += 2) J[n] = -J[n];
  for (int n = 1; n < kOrders; ++n) {
    double jp = 0.5 * (J[n - 1] - J[n + 1]);
    c_[n] = 2.0 * R_ * J[n] / n;
    dc_[n] = (2.0 * (s / R_) * J[n] + 2.0 * R_ * jp * fp_) / n;
  }
}

CorrugationProfile::Sample CorrugationProfile::at(double t) const {
  Sample out;
  double c1 = std::cos(t), s1 = std::sin(t);
  double ph = f_ * s1;
  double cp = std::cos(ph), sp = std::sin(ph);
  out.dt = {R_ * cp - 1.0, R_ * sp};
  double a = R_ * f_ * c1;
  out.dtt = {-a * sp, a * cp};
  double k = R_ * fp_ * s1;
  out.dst = {(s_ / R_) * cp - k * sp, (s_ / R_) * sp + k * cp};
  double cn = 1.0, sn = 0.0;
  double g1 = 0, g2 = 0, d1 = 0, d2 = 0;
  for (int n = 1; n < kOrders; ++n) {
    double cn1 = cn * c1 - sn * s1;
    sn = sn * c1 + cn * s1;
    cn = cn1;
    if (n % 2 == 0) {
      g1 += c_[n] * sn;
      d1 += dc_[n] * sn;
    } else {
      g2 += c_[n] * (1.0 - cn);
      d2 += dc_[n] * (1.0 - cn);
    }
  }
  out.g = {g1, g2};
  out.ds = {d1, d2};
  return out;
}

Pair CorrugationProfile::value(double t) const { return at(t).g; }
Pair CorrugationProfile::ds(double t) const { return at(t).ds; }

Pair CorrugationProfile::dt(double t) const {
  double ph = f_ * std::sin(t);
  return {R_ * std::cos(ph) - 1.0, R_ * std::sin(ph)};
}

Pair CorrugationProfile::dsdt(double t) const {
  double st = std::sin(t);
  double ph = f_ * st;
  double c = std::cos(ph), sn = std::sin(ph);
  double k = R_ * fp_ * st;
  return {(s_ / R_) * c - k * sn, (s_ / R_) * sn + k * c};
}

Pair gamma(double s, double t) { return CorrugationProfile(s).value(t); }
Pair gamma_dt(double s, double t) { return CorrugationProfile(s).dt(t); }
Pair gamma_ds(double s, double t) { return CorrugationProfile(s).ds(t); }
Pair gamma_dsdt(double s, double t) { return CorrugationProfile(s).dsdt(t); }

Pair gamma_adaptive(double s, double t, double tol) {
  double tr = t - 2.0 * kPi * std::floor(t / (2.0 * kPi));
  if (tr == 0.0) return {0.0, 0.0};
  double R = std::sqrt(1.0 + s * s);
  double f = profile_f(s);
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double g1 = GK::integrate([&](double u) { return R * std::cos(f * std::sin(u)) - 1.0; }, 0.0,
                            tr, 20, tol);
  double g2 =
      GK::integrate([&](double u) { return R * std::sin(f * std::sin(u)); }, 0.0, tr, 20, tol);
  return {g1, g2};
}

double CutoffProfile::sigma(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double CutoffProfile::operator()(double x) const {
  double h = 0.5 * ell;
  return sigma((x - h) / h);
}

}  // namespace corrint
