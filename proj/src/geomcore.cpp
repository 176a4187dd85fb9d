#include "corrint/geomcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace corrint {

void ChartDomain::validate() const {
  if (dim < 1 || dim > kMaxDim - 1) throw std::invalid_argument("domain: dim out of range");
  if ((int)lo.size() != dim || (int)hi.size() != dim)
    throw std::invalid_argument("domain: box size does not match dim");
  for (int i = 0; i < dim; ++i)
    if (!(lo[i] < hi[i])) throw std::invalid_argument("domain: lo must be < hi");
  for (int a : periodic_axes)
    if (a < 0 || a >= dim) throw std::invalid_argument("domain: periodic axis out of range");
  if (boundary_axis) {
    if (*boundary_axis < 0 || *boundary_axis >= dim)
      throw std::invalid_argument("domain: boundary axis out of range");
    if (is_periodic(*boundary_axis))
      throw std::invalid_argument("domain: boundary axis cannot be periodic");
  }
}

bool ChartDomain::is_periodic(int axis) const {
  return std::find(periodic_axes.begin(), periodic_axes.end(), axis) != periodic_axes.end();
}

double ChartDomain::boundary_distance(const Vec& x) const {
  if (!boundary_axis) return std::numeric_limits<double>::infinity();
  return x[*boundary_axis] - lo[*boundary_axis];
}

bool ChartDomain::on_boundary(const Vec& x) const {
  return boundary_axis && x[*boundary_axis] == lo[*boundary_axis];
}

Mat pullback_metric(const Mat& jac, int* rank) {
  const int n = (int)jac.cols();
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = jac.col(i).dot(jac.col(j));
      g(i, j) = v;
      g(j, i) = v;
    }
  if (rank) {
    Eigen::JacobiSVD<Mat> svd(jac);
    auto sv = svd.singularValues();
    double tol = std::max(jac.rows(), jac.cols()) * 1e-14 * (sv.size() ? sv[0] : 0.0);
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv[i] > tol) ++r;
    *rank = r;
  }
  return g;
}

namespace {

// Leibniz sum with row-ordered products and the positive and negative parts
// accumulated separately in sorted order, so a column swap negates the result
// bit for bit.
double alternating_det(const Mat& m) {
  const int n = (int)m.rows();
  if (n > 3) return m.determinant();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> pos, neg;
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inv += perm[i] > perm[j];
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= m(i, perm[i]);
    if (inv % 2) p = -p;
    (p >= 0 ? pos : neg).push_back(std::abs(p));
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  double sp = 0.0, sn = 0.0;
  for (double v : pos) sp += v;
  for (double v : neg) sn += v;
  return sp - sn;
}

}  // namespace

Vec hodge_normal(const Mat& partials) {
  const int q = (int)partials.rows();
  const int n = (int)partials.cols();
  if (q != n + 1) throw std::invalid_argument("hodge_normal: need n vectors in R^(n+1)");
  Vec z(q);
  Mat minor(n, n);
  for (int i = 0; i < q; ++i) {
    for (int r = 0, rr = 0; r < q; ++r) {
      if (r == i) continue;
      minor.row(rr++) = partials.row(r);
    }
    double d = n == 1 ? minor(0, 0) : alternating_det(minor);
    z[i] = ((i + n) % 2 == 0 ? 1.0 : -1.0) * d;
  }
  return z;
}

Frame corr_frame(const Mat& jac, const Vec& nu) {
  Mat g = pullback_metric(jac);
  const int n = (int)g.rows();
  double scale = g.diagonal().maxCoeff();
  Vec xt;
  if (n <= 2) {
    double det = n == 1 ? g(0, 0) : g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
    if (!(scale > 0) || !(det > 1e-14 * scale * scale))
      throw ImmersionLost("corr_frame: singular pullback metric");
    Vec y(n);
    if (n == 1)
      y[0] = nu[0] / g(0, 0);
    else
      y << (g(1, 1) * nu[0] - g(0, 1) * nu[1]) / det, (g(0, 0) * nu[1] - g(0, 1) * nu[0]) / det;
    xt = jac * y;
  } else {
    Eigen::LDLT<Mat> ldlt(g);
    if (ldlt.info() != Eigen::Success || !(scale > 0) ||
        ldlt.vectorD().minCoeff() <= 1e-14 * scale)
      throw ImmersionLost("corr_frame: singular pullback metric");
    xt = jac * ldlt.solve(nu);
  }
  Vec zt = hodge_normal(jac);
  double xn = xt.norm();
  double zn = zt.norm();
  if (!(zn > 0) || !(xn > 0)) throw ImmersionLost("corr_frame: degenerate Jacobian");
  Frame fr;
  fr.xi_tilde_norm = xn;
  fr.xi = xt / (xn * xn);
  fr.zeta = zt / (zn * xn);
  return fr;
}

namespace {

void eig2(const Mat& a, double& lo, double& hi) {
  double m = 0.5 * (a(0, 0) + a(1, 1));
  double d = 0.5 * (a(0, 0) - a(1, 1));
  double r = std::hypot(d, a(0, 1));
  lo = m - r;
  hi = m + r;
}

}  // namespace

double sym_min_eigenvalue(const Mat& a) {
  if (a.rows() == 1) return a(0, 0);
  if (a.rows() == 2) {
    double lo, hi;
    eig2(a, lo, hi);
    return lo;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double sym_max_eigenvalue(const Mat& a) {
  if (a.rows() == 1) return a(0, 0);
  if (a.rows() == 2) {
    double lo, hi;
    eig2(a, lo, hi);
    return hi;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double sym_norm(const Mat& a) {
  return std::max(std::abs(sym_min_eigenvalue(a)), std::abs(sym_max_eigenvalue(a)));
}

double op_norm(const Mat& a) {
  if (a.cols() == 1) return a.col(0).norm();
  Mat g = pullback_metric(a);
  return std::sqrt(std::max(0.0, sym_max_eigenvalue(g)));
}

std::vector<Mat> christoffel_fd(const SymMatField& g, const Vec& x, double h) {
  const int n = g.dim;
  std::vector<Mat> dg(n);
  for (int l = 0; l < n; ++l) {
    Vec a = x, b = x, c = x, d = x;
    a[l] -= 2 * h;
    b[l] -= h;
    c[l] += h;
    d[l] += 2 * h;
    dg[l] = (g(a) - 8 * g(b) + 8 * g(c) - g(d)) / (12 * h);
  }
  Mat ginv = g(x).inverse();
  std::vector<Mat> gam(n, Mat::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l)
          acc += ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        gam[k](i, j) = 0.5 * acc;
      }
  return gam;
}

}  // namespace corrint
