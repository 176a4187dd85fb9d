#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "corrint/corrugation.hpp"
#include "corrint/geomcore.hpp"

namespace corrint {

struct BaseMap {
  int n = 1;
  int q = 2;
  std::function<Vec(const Vec&)> eval;
  std::function<Mat(const Vec&)> jac;
  bool analytic = true;
};

/// One corrugation: u_k = u_{k-1} + (1/λ)[Γ₁(s, λ⟨x,ν⟩)ξ + Γ₂(s, λ⟨x,ν⟩)ζ].
struct CorrugationLayer {
  double lambda = 1.0;
  Vec nu;
  double sqrt_one_minus_delta = 1.0;
  std::optional<CutoffProfile> cutoff;  // along the domain's boundary axis
  double tau_scale = 1.0;
  int start_level = 0;  // map whose defect defines a_k² (the stage start)
  std::function<double(const Mat&)> coeff;  // defect matrix ↦ a_k²
  int term = 0;
};

struct Jet {
  Vec u;
  Mat J;
};

/// Fields of layer k that vary on the scales of earlier layers only.
struct SlowFields {
  Vec u_prev;
  Mat J_prev;
  Vec xi, zeta;
  double xi_tilde_norm = 0.0;
  double a2 = 0.0;
  double eta = 0.0;
  double s = 0.0;
  Vec grad_s;
  Mat dxi, dzeta;  // columns are ∂_i ξ, ∂_i ζ
  bool active = false;
};

/// Expansion of the pullback of one step at fixed (x, θ): r = r0 + A/λ + B/λ².
struct StepTerms {
  Vec combo;  // Γ₁ξ + Γ₂ζ
  Mat M;      // ∇u_{k-1} + ∂tΓ-frame ⊗ ν
  Mat E;
  Mat r0, A, B;
};

class LayeredMap {
 public:
  LayeredMap(ChartDomain domain, BaseMap base, SymMatField metric);

  const ChartDomain& domain() const { return *domain_; }
  const BaseMap& base() const { return *base_; }
  const SymMatField& metric() const { return *metric_; }
  int levels() const { return (int)layers_.size(); }
  const CorrugationLayer& layer(int k) const { return layers_.at(k - 1); }
  int n() const { return base_->n; }
  int q() const { return base_->q; }

  Vec value(const Vec& x, int level = -1) const;
  Mat jacobian(const Vec& x, int level = -1) const;
  Jet jet(const Vec& x, int level = -1) const;
  /// 4th-order central differences of `value` (one-sided on non-periodic faces).
  Mat jacobian_fd(const Vec& x, int level = -1) const;

  /// Slow fields of layer k at x. If `chain` is given it receives the jets of levels 0..k-1.
  SlowFields slow_fields(int k, const Vec& x, bool derivatives = true,
                         std::vector<Jet>* chain = nullptr) const;
  Jet lift(int k, const SlowFields& sf, const CorrugationProfile& prof, double theta) const;
  StepTerms step_terms(int k, const SlowFields& sf, const CorrugationProfile::Sample& g) const;
  double phase(int k, const Vec& x) const;

  LayeredMap with_layer(CorrugationLayer layer) const;
  LayeredMap prefix(int level) const;
  /// Largest λ among layers 1..level (0 without layers).
  double lambda_max(int level = -1) const;
  /// Difference step used for the slow fields of layer k.
  double fd_step(int k) const;

 private:
  struct Pre {
    Vec xi, zeta;
    double xtn = 0, a2 = 0, eta = 0, s = 0;
  };
  /// Jet of one level with its second derivatives H[i] = ∂_i J.
  struct Level {
    Vec u;
    Mat J;
    std::array<Mat, kMaxDim> H;
  };
  Pre pre_fields(int k, const Vec& x, const Mat& J_prev, const Mat& J_start) const;
  void chain(const Vec& x, int upto, std::vector<Level>& lv) const;
  SlowFields fields(int k, const Vec& x, const std::vector<Level>& lv, bool derivatives) const;
  double eta_at(int k, const Vec& x, double offset = 0.0) const;
  int resolve(int level) const { return level < 0 ? levels() : level; }

  std::shared_ptr<const ChartDomain> domain_;
  std::shared_ptr<const BaseMap> base_;
  std::shared_ptr<const SymMatField> metric_;
  std::vector<CorrugationLayer> layers_;
};

SymMatField defect_field(const LayeredMap& m, const SymMatField& g);

/// Offsets and weights of the first-derivative stencil at x along an axis of `dom`.
struct Stencil {
  double off[5];
  double w[5];
  int count;
};
Stencil derivative_stencil(const ChartDomain& dom, int axis, const Vec& x, double h);

/// h rounded down to a power of two.
double pow2_step(double h);

}  // namespace corrint
