#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace corrint {

constexpr int kMaxDim = 4;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

/// Axis-aligned chart box. The lo-face of `boundary_axis` is B.
struct ChartDomain {
  int dim = 1;
  std::vector<double> lo, hi;
  std::optional<int> boundary_axis;
  std::vector<int> periodic_axes;

  void validate() const;
  bool is_periodic(int axis) const;
  double extent(int axis) const { return hi[axis] - lo[axis]; }
  /// Chart distance to B (coordinate along the boundary axis), +inf without B.
  double boundary_distance(const Vec& x) const;
  bool on_boundary(const Vec& x) const;
};

struct SymMatField {
  int dim = 1;
  std::function<Mat(const Vec&)> eval;

  Mat operator()(const Vec& x) const { return eval(x); }
};

struct Frame {
  Vec xi;
  Vec zeta;
  double xi_tilde_norm = 0.0;
};

class ImmersionLost : public std::runtime_error {
 public:
  explicit ImmersionLost(const std::string& what, Vec where = Vec())
      : std::runtime_error(what), where_(std::move(where)) {}
  const Vec& where() const { return where_; }

 private:
  Vec where_;
};

/// ∇uᵀ∇u. If `rank` is given it receives the numerical column rank.
Mat pullback_metric(const Mat& jac, int* rank = nullptr);

/// Generalized cross product of the columns of `partials` ((n+1)×n).
Vec hodge_normal(const Mat& partials);

Frame corr_frame(const Mat& jac, const Vec& nu);

double sym_min_eigenvalue(const Mat& a);
double sym_max_eigenvalue(const Mat& a);
/// Spectral norm of a symmetric matrix.
double sym_norm(const Mat& a);
/// Spectral norm of a general small matrix.
double op_norm(const Mat& a);

/// Γ^k_ij of a metric by 4th-order central differences; entry k is the matrix (i, j).
std::vector<Mat> christoffel_fd(const SymMatField& g, const Vec& x, double h = 1e-3);

}  // namespace corrint
