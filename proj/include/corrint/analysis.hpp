#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrint/evaluation.hpp"
#include "corrint/models.hpp"

namespace corrint {

class ShootingDiverged : public std::runtime_error {
 public:
  ShootingDiverged(const std::string& what, double residual)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

/// Metric on a 2D chart with its Christoffel symbols.
struct GeodesicModel {
  SymMatField metric;
  std::function<std::vector<Mat>(const Vec&)> christoffel;  // empty: differences of the metric
  double tol = 1e-13;

  std::vector<Mat> gamma(const Vec& x) const;

  static GeodesicModel euclidean();
  /// Unit sphere in the chart (ρ, φ) with g = diag(1, sin²ρ).
  static GeodesicModel round_sphere();
};

struct GeodesicEnd {
  Vec x, v;
  double speed_drift = 0;  // max relative change of |v|_g along the path
};
/// Integrates the geodesic from p with initial velocity v for unit time.
GeodesicEnd shoot(const GeodesicModel& gm, const Vec& p, const Vec& v);

struct GeodesicDistance {
  double length = 0;
  double residual = 0;
  double speed_drift = 0;
  int iterations = 0;
};
GeodesicDistance geodesic_solve(const GeodesicModel& gm, const Vec& p, const Vec& q);
double geodesic_distance(const GeodesicModel& gm, const Vec& p, const Vec& q);

struct ExpansionFit {
  double c3 = 0, c4 = 0;
  double expected = 0;  // −k_g²/24
  double rel_error = 0;
  std::vector<double> t, d;
};
/// Fits d(p, γ(t)) − t = c₃t³ + c₄t⁴ on t ∈ {T, T/2, T/4, T/8}, p = γ(0).
ExpansionFit expansion_check(const GeodesicModel& gm, const std::function<Vec(double)>& curve,
                             double k_g);

struct DirectionMargin {
  Vec v;
  double h = 0, abar = 0, margin = 0;
};
struct ObstructionReport {
  Vec x;
  std::vector<DirectionMargin> directions;
  double max_margin = 0;
  bool obstructed = false;
  std::string verdict;
};
/// Compares |h(v,v)| with |Ā(v,v)| at the boundary point x for g-normalized directions.
ObstructionReport obstruction_verdict(const BoundaryData& bd, const Vec& x,
                                      const std::vector<Vec>& directions);

struct LengthComparison {
  double intrinsic = 0, extrinsic = 0;
};
/// ∫|γ̇|_g by the midpoint rule on chords and the polyline length of u∘γ on a uniform parameter grid.
LengthComparison length_comparison(const LayeredMap& m, const SymMatField& g,
                                   const std::function<Vec(double)>& curve, double t0, double t1,
                                   int samples);

}  // namespace corrint
