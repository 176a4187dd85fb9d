#pragma once

#include <array>
#include <utility>

namespace corrint {

using Pair = std::pair<double, double>;

/// J_order(x) by the periodic-trapezoid integral representation.
double bessel_j(int order, double x);
/// 1 - J0(x) without cancellation near x = 0.
double one_minus_j0(double x);
/// First positive zero of J0, located once by bisection on [2, 3].
double bessel_zero_mu();

double profile_f(double s);
double profile_f_prime(double s);

Pair gamma(double s, double t);
Pair gamma_dt(double s, double t);
Pair gamma_ds(double s, double t);
Pair gamma_dsdt(double s, double t);
/// Direct adaptive quadrature of the defining integral; slow, used as a reference.
Pair gamma_adaptive(double s, double t, double tol = 1e-13);

/// Γ and its first derivatives at a fixed amplitude s, for many phases t.
class CorrugationProfile {
 public:
  static constexpr int kOrders = 22;

  struct Sample {
    Pair g, dt, ds;
    Pair dtt, dst;  // ∂t²Γ and ∂s∂tΓ
  };

  explicit CorrugationProfile(double s);

  double s() const { return s_; }
  double f() const { return f_; }
  double f_prime() const { return fp_; }
  bool zero() const { return s_ == 0.0; }

  Sample at(double t) const;
  Pair value(double t) const;
  Pair dt(double t) const;
  Pair ds(double t) const;
  Pair dsdt(double t) const;

 private:
  double s_, R_, f_, fp_;
  // Sine coefficients of Γ₁ (even n), cosine coefficients of Γ₂ (odd n), and their s-derivatives.
  std::array<double, kOrders> c_{}, dc_{};
};

/// η̃(x) = σ((x − ℓ/2)/(ℓ/2)), exactly 0 for x ≤ ℓ/2 and exactly 1 for x ≥ ℓ.
struct CutoffProfile {
  double ell = 1.0;

  double operator()(double x) const;
  static double sigma(double t);
};

}  // namespace corrint
