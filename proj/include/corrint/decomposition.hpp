#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "corrint/geomcore.hpp"

namespace corrint {

class DominanceViolated : public std::runtime_error {
 public:
  DominanceViolated(Vec x, Mat d)
      : std::runtime_error("decomposition: diagonal dominance violated"),
        x(std::move(x)),
        defect(std::move(d)) {}
  Vec x;
  Mat defect;
};

class NotPSD : public std::runtime_error {
 public:
  NotPSD(Vec x, double eig)
      : std::runtime_error("decomposition: defect not positive semidefinite"),
        x(std::move(x)),
        eigenvalue(eig) {}
  Vec x;
  double eigenvalue;
};

/// Sample counts per axis; periodic axes skip the hi endpoint.
struct GridSpec {
  std::vector<int> counts;
  void for_each(const ChartDomain& dom, const std::function<void(const Vec&)>& fn) const;
};

struct PrimitiveTerm {
  Vec nu;
  std::function<double(const Vec&)> coeff;  // a_k²(x)
};

struct PrimitiveDecomposition {
  int dim = 1;
  std::vector<PrimitiveTerm> terms;
  int m = 0;
  int m0_bound = 0;
  std::vector<bool> active;
  Mat rotation;  // constant chart rotation (identity unless pre-rotated)
};

constexpr double kActiveThreshold = 1e-12;

int term_count(int dim);
/// Fixed direction of term k in the unrotated chart.
Vec term_direction(int dim, int k);
/// Closed-form coefficient of term k for a symmetric matrix (clamped at 0).
double coefficient(int dim, int k, const Mat& d);
/// max_i (Σ_{j≠i}|d_ij| − d_ii); ≤ 0 means dominant.
double dominance_violation(const Mat& d);

PrimitiveDecomposition decompose_fixed(const SymMatField& defect, const ChartDomain& dom,
                                       const GridSpec& samples, bool prerotate = false);
Mat reconstruct(const PrimitiveDecomposition& dec, const Vec& x);

}  // namespace corrint
