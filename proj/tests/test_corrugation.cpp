#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "corrint/corrugation.hpp"

using namespace corrint;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

/// Bisection for the root of bessel_j(0, x) = w on [lo, hi], J0 decreasing there.
double bisect_j0(double w, double lo, double hi) {
  while (hi - lo > 1e-15) {
    double mid = 0.5 * (lo + hi);
    (bessel_j(0, mid) > w ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("bessel values at zero") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(bessel_j(2, 0.0) == 0.0);
}

TEST_CASE("bessel_j against boost on [-10, 10]") {
  for (int order = 0; order <= 2; ++order)
    for (int i = 0; i <= 400; ++i) {
      double x = -10.0 + 20.0 * i / 400;
      REQUIRE(std::abs(bessel_j(order, x) - boost::math::cyl_bessel_j(order, x)) <= 1e-13);
    }
}

TEST_CASE("one_minus_j0 has no cancellation") {
  for (double x : {0.1, 1.0, 2.0, 2.4})
    CHECK(one_minus_j0(x) == doctest::Approx(1.0 - boost::math::cyl_bessel_j(0, x)).epsilon(1e-13));
  // Series 1 − J0(x) = x²/4 − x⁴/64 + …
  double x = 1e-4;
  CHECK(one_minus_j0(x) == doctest::Approx(x * x / 4 - std::pow(x, 4) / 64).epsilon(1e-14));
}

TEST_CASE("first zero of J0") {
  double mu = bessel_zero_mu();
  double ref = bisect_j0(0.0, 2.0, 3.0);
  CHECK(std::abs(mu - ref) <= 1e-14);
  CHECK(std::abs(bessel_j(0, mu)) <= 1e-13);
  CHECK(mu == doctest::Approx(2.4048).epsilon(1e-4));
}

TEST_CASE("profile f at zero and oddness") {
  CHECK(profile_f(0.0) == 0.0);
  for (double s : {1e-7, 1e-3, 0.5, 1.0, 7.0, 40.0}) CHECK(profile_f(s) + profile_f(-s) == 0.0);
}

TEST_CASE("profile f at s = 1 against bisection") {
  double ref = bisect_j0(1.0 / kSqrt2, 0.0, bessel_zero_mu());
  CHECK(std::abs(profile_f(1.0) - ref) <= 1e-12);
}

TEST_CASE("profile identity on log-spaced s") {
  double worst = 0.0;
  double mu = bessel_zero_mu();
  for (int i = 0; i < 10000; ++i) {
    double s = 1e-6 * std::pow(50.0 / 1e-6, i / 9999.0);
    double f = profile_f(s);
    REQUIRE(f > 0.0);
    REQUIRE(f < mu);
    worst = std::max(worst, std::abs(boost::math::cyl_bessel_j(0, f) * std::sqrt(1 + s * s) - 1));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("profile f is strictly increasing") {
  double prev = 0.0;
  for (int i = 1; i <= 2000; ++i) {
    double f = profile_f(0.025 * i);
    REQUIRE(f > prev);
    prev = f;
  }
}

TEST_CASE("profile derivative against finite differences") {
  double s = 1e-6, h = 1e-4;
  double fd = (profile_f(s + h) - profile_f(s - h)) / (2 * h);
  CHECK(profile_f_prime(s) == doctest::Approx(fd).epsilon(1e-6));
  for (double s2 : {0.3, 1.0, 4.0}) {
    double h2 = 1e-4;
    double d = (-profile_f(s2 + 2 * h2) + 8 * profile_f(s2 + h2) - 8 * profile_f(s2 - h2) +
                profile_f(s2 - 2 * h2)) /
               (12 * h2);
    CHECK(profile_f_prime(s2) == doctest::Approx(d).epsilon(1e-8));
  }
}

TEST_CASE("profile derivative bound and positivity") {
  for (int i = 0; i < 1000; ++i) {
    double s = -10.0 + 20.0 * i / 999;
    double fp = profile_f_prime(s);
    REQUIRE(fp > 0.0);
    REQUIRE(fp <= std::sqrt(2 + s * s) / (1 + s * s) + 1e-9);
  }
  CHECK(profile_f_prime(0.0) > 0.0);
  CHECK(profile_f_prime(0.0) == doctest::Approx(kSqrt2).epsilon(1e-8));
}

TEST_CASE("small-amplitude series joins the Newton branch") {
  for (double s : {0.999e-6, 1.001e-6})
    CHECK(boost::math::cyl_bessel_j(0, profile_f(s)) * std::sqrt(1 + s * s) ==
          doctest::Approx(1.0).epsilon(1e-15));
  CorrugationProfile tiny(4.3e-320);
  auto g = tiny.at(1.0);
  CHECK(std::isfinite(g.g.first));
  CHECK(std::isfinite(g.ds.second));
  CHECK(std::isfinite(g.dst.second));
}

TEST_CASE("bound chain of the profile") {
  double mu = bessel_zero_mu();
  for (int i = 0; i < 10000; ++i) {
    double s = 1e-4 + (50.0 - 1e-4) * i / 9999;
    double f = profile_f(s);
    double R = std::sqrt(1 + s * s);
    REQUIRE(f <= std::sqrt(2 * std::log(1 + s * s)) + 1e-9);
    REQUIRE(f >= 4 * std::sqrt(s * s / (8 + 5 * s * s)) - 1e-9);
    REQUIRE(std::abs(bessel_j(1, f)) >= f / (2 * R) - 1e-9);
    REQUIRE(std::abs(bessel_j(1, f) - 0.5 * f * (bessel_j(2, f) + 1 / R)) <= 1e-10);
  }
  for (int i = 0; i <= 1000; ++i) {
    double x = -mu + 2 * mu * i / 1000;
    double j2 = bessel_j(2, x);
    REQUIRE(j2 <= x * x / 8 + 1e-9);
    REQUIRE(j2 >= x * x / 8 - std::pow(x, 4) / 96 - 1e-9);
  }
}

TEST_CASE("gamma vanishes at zero amplitude and zero phase") {
  for (double t : {0.0, 0.4, 2.0, 5.5}) {
    CHECK(gamma(0.0, t) == Pair{0.0, 0.0});
    CHECK(gamma_dt(0.0, t) == Pair{0.0, 0.0});
  }
  for (double s : {0.3, 1.0, 9.0}) {
    CHECK(gamma(s, 0.0) == Pair{0.0, 0.0});
    CHECK(gamma_ds(s, 0.0) == Pair{0.0, 0.0});
  }
}

TEST_CASE("gamma is 2pi-periodic") {
  for (double s : {0.5, 1.0, 5.0}) {
    auto g = gamma(s, 2 * kPi);
    CHECK(std::abs(g.first) <= 1e-10);
    CHECK(std::abs(g.second) <= 1e-10);
    for (int i = 0; i < 100; ++i) {
      double t = 2 * kPi * i / 100;
      auto a = gamma(s, t), b = gamma(s, t + 2 * kPi);
      REQUIRE(std::hypot(a.first - b.first, a.second - b.second) <= 1e-10);
    }
  }
}

TEST_CASE("gamma matches adaptive quadrature of its integrand") {
  for (double s : {0.1, 0.5, 1.0, 3.0, 20.0})
    for (int i = 1; i <= 12; ++i) {
      double t = 0.55 * i;
      auto a = gamma(s, t), b = gamma_adaptive(s, t);
      REQUIRE(std::abs(a.first - b.first) <= 1e-11);
      REQUIRE(std::abs(a.second - b.second) <= 1e-11);
    }
}

TEST_CASE("gamma is the t-antiderivative of gamma_dt") {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  for (double s : {0.2, 1.0, 6.0})
    for (double t : {0.7, 2.5, 4.9}) {
      double q1 = GK::integrate([&](double u) { return gamma_dt(s, u).first; }, 0.0, t, 15, 1e-14);
      double q2 = GK::integrate([&](double u) { return gamma_dt(s, u).second; }, 0.0, t, 15, 1e-14);
      auto g = gamma(s, t);
      CHECK(std::abs(g.first - q1) <= 1e-9);
      CHECK(std::abs(g.second - q2) <= 1e-9);
    }
}

TEST_CASE("circle equation on a 100x100 grid") {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j) {
      double s = 10.0 * i / 99, t = 2 * kPi * j / 99;
      auto d = gamma_dt(s, t);
      worst = std::max(worst, std::abs(std::pow(d.first + 1, 2) + d.second * d.second - (1 + s * s)));
    }
  CHECK(worst <= 1e-10);
}

TEST_CASE("C1 estimate of the corrugation with optimal constant") {
  double sup_ratio = 0.0;
  for (int i = 1; i <= 400; ++i) {
    double s = std::pow(10.0, -6.0 + 7.0 * i / 400);
    for (int j = 0; j <= 200; ++j) {
      double t = kPi * j / 200;
      auto d = gamma_dt(s, t);
      double r = std::hypot(d.first, d.second) / s;
      REQUIRE(r <= kSqrt2 + 1e-9);
      sup_ratio = std::max(sup_ratio, r);
    }
  }
  CHECK(sup_ratio >= kSqrt2 - 1e-3);
}

TEST_CASE("mixed partial bound") {
  double sup = 0.0;
  for (int i = 0; i <= 300; ++i) {
    double s = i == 0 ? 0.0 : std::pow(10.0, -6.0 + 7.5 * i / 300);
    double fp = profile_f_prime(s);
    for (int j = 0; j <= 200; ++j) {
      double t = 2 * kPi * j / 200;
      auto m = gamma_dsdt(s, t);
      double sq = m.first * m.first + m.second * m.second;
      REQUIRE(sq <= s * s / (1 + s * s) + (1 + s * s) * fp * fp + 1e-12);
      REQUIRE(sq <= 2.0 + 1e-9);
      sup = std::max(sup, std::sqrt(sq));
    }
  }
  CHECK(sup >= kSqrt2 - 1e-3);
  CHECK(sup <= kSqrt2 + 1e-9);
}

TEST_CASE("mixed partials commute") {
  double worst = 0.0;
  const double h = 1e-4;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      double s = 0.05 + 5.0 * i / 49, t = 2 * kPi * j / 49;
      double a1 = (gamma_ds(s, t + h).first - gamma_ds(s, t - h).first) / (2 * h);
      double a2 = (gamma_ds(s, t + h).second - gamma_ds(s, t - h).second) / (2 * h);
      double b1 = (gamma_dt(s + h, t).first - gamma_dt(s - h, t).first) / (2 * h);
      double b2 = (gamma_dt(s + h, t).second - gamma_dt(s - h, t).second) / (2 * h);
      worst = std::max({worst, std::abs(a1 - b1), std::abs(a2 - b2)});
    }
  CHECK(worst <= 1e-7);
}

TEST_CASE("gamma_ds against differences of gamma") {
  const double h = 1e-5;
  for (double s : {0.3, 1.0, 4.0})
    for (double t : {0.8, 2.0, 3.9, 6.0}) {
      auto d = gamma_ds(s, t);
      double f1 = (gamma(s + h, t).first - gamma(s - h, t).first) / (2 * h);
      double f2 = (gamma(s + h, t).second - gamma(s - h, t).second) / (2 * h);
      CHECK(std::abs(d.first - f1) <= 1e-9);
      CHECK(std::abs(d.second - f2) <= 1e-9);
    }
}

TEST_CASE("profile sample bundles consistent derivatives") {
  CorrugationProfile p(0.8);
  const double h = 1e-5;
  for (double t : {0.3, 1.7, 4.4}) {
    auto a = p.at(t);
    auto dt = p.dt(t);
    CHECK(a.dt.first == doctest::Approx(dt.first).epsilon(1e-14));
    double dtt1 = (p.dt(t + h).first - p.dt(t - h).first) / (2 * h);
    double dtt2 = (p.dt(t + h).second - p.dt(t - h).second) / (2 * h);
    CHECK(std::abs(a.dtt.first - dtt1) <= 1e-8);
    CHECK(std::abs(a.dtt.second - dtt2) <= 1e-8);
    auto m = p.dsdt(t);
    CHECK(std::abs(a.dst.first - m.first) <= 1e-14);
    CHECK(std::abs(a.dst.second - m.second) <= 1e-14);
  }
}

TEST_CASE("cutoff profile") {
  CutoffProfile c{0.4};
  CHECK(c(-1.0) == 0.0);
  CHECK(c(0.2) == 0.0);
  CHECK(c(0.4) == 1.0);
  CHECK(c(3.0) == 1.0);
  double prev = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    double v = c(0.2 + 0.2 * i / 1000);
    REQUIRE(v >= prev);
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
    prev = v;
  }
  CHECK(c(0.3) == doctest::Approx(0.5));
}
