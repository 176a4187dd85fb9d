#include "corrint/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace corrint {

void GridSpec::for_each(const ChartDomain& dom,
                        const std::function<void(const Vec&)>& fn) const {
  const int n = dom.dim;
  std::vector<int> idx(n, 0);
  Vec x(n);
  while (true) {
    for (int i = 0; i < n; ++i) {
      int c = counts[i];
      double t = dom.is_periodic(i) ? double(idx[i]) / c : (c > 1 ? double(idx[i]) / (c - 1) : 0.0);
      x[i] = dom.lo[i] + t * dom.extent(i);
    }
    fn(x);
    int a = 0;
    while (a < n && ++idx[a] == counts[a]) idx[a++] = 0;
    if (a == n) break;
  }
}

int term_count(int dim) { return dim + dim * (dim - 1); }

namespace {

// Term k ↦ (i, j, sign): diagonal terms have i == j.
void term_index(int dim, int k, int& i, int& j, int& sign) {
  i = j = sign = 0;
  if (k < dim) {
    i = j = k;
    sign = 0;
    return;
  }
  int r = k - dim;
  int pair = r / 2;
  sign = r % 2 == 0 ? 1 : -1;
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b)
      if (pair-- == 0) {
        i = a;
        j = b;
        return;
      }
}

}  // namespace

Vec term_direction(int dim, int k) {
  int i, j, sg;
  term_index(dim, k, i, j, sg);
  Vec v = Vec::Zero(dim);
  if (i == j) {
    v[i] = 1.0;
  } else {
    v[i] = 1.0 / std::sqrt(2.0);
    v[j] = sg / std::sqrt(2.0);
  }
  return v;
}

double coefficient(int dim, int k, const Mat& d) {
  int i, j, sg;
  term_index(dim, k, i, j, sg);
  double c;
  if (i == j) {
    c = d(i, i);
    for (int b = 0; b < dim; ++b)
      if (b != i) c -= std::abs(d(i, b));
  } else {
    c = 2.0 * std::max(sg * d(i, j), 0.0);
  }
  return std::max(c, 0.0);
}

double dominance_violation(const Mat& d) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < d.rows(); ++i) {
    double off = 0.0;
    for (int b = 0; b < d.cols(); ++b)
      if (b != i) off += std::abs(d(i, b));
    worst = std::max(worst, off - d(i, i));
  }
  return worst;
}

PrimitiveDecomposition decompose_fixed(const SymMatField& defect, const ChartDomain& dom,
                                       const GridSpec& samples, bool prerotate) {
  const int n = defect.dim;
  PrimitiveDecomposition dec;
  dec.dim = n;
  dec.rotation = Mat::Identity(n, n);
  if (prerotate && n > 1) {
    Mat avg = Mat::Zero(n, n);
    int cnt = 0;
    samples.for_each(dom, [&](const Vec& x) {
      avg += defect(x);
      ++cnt;
    });
    Eigen::SelfAdjointEigenSolver<Mat> es(avg / std::max(cnt, 1));
    dec.rotation = es.eigenvectors();
  }
  const Mat Q = dec.rotation;
  const int K = term_count(n);
  std::vector<double> sup(K, 0.0);
  samples.for_each(dom, [&](const Vec& x) {
    Mat d = Q.transpose() * defect(x) * Q;
    double e = sym_min_eigenvalue(d);
    if (n > 1 && d.diagonal().minCoeff() >= -1e-10 && dominance_violation(d) > 1e-12)
      throw DominanceViolated(x, d);
    if (e < -1e-10) throw NotPSD(x, e);
    int live = 0;
    for (int k = 0; k < K; ++k) {
      double c = coefficient(n, k, d);
      sup[k] = std::max(sup[k], c);
      if (c > kActiveThreshold) ++live;
    }
    dec.m0_bound = std::max(dec.m0_bound, live);
  });
  auto field = defect;
  for (int k = 0; k < K; ++k) {
    PrimitiveTerm t;
    t.nu = Q * term_direction(n, k);
    t.coeff = [field, Q, n, k](const Vec& x) {
      return coefficient(n, k, Q.transpose() * field(x) * Q);
    };
    dec.terms.push_back(std::move(t));
    dec.active.push_back(sup[k] > kActiveThreshold);
    if (sup[k] > kActiveThreshold) ++dec.m;
  }
  return dec;
}

Mat reconstruct(const PrimitiveDecomposition& dec, const Vec& x) {
  Mat r = Mat::Zero(dec.dim, dec.dim);
  for (const auto& t : dec.terms) r += t.coeff(x) * t.nu * t.nu.transpose();
  return r;
}

}  // namespace corrint
