#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrint/evaluation.hpp"

namespace corrint {

class HypothesisFailed : public std::runtime_error {
 public:
  HypothesisFailed(Vec x, double eig)
      : std::runtime_error("normal data: h - <Abar, nubar> is not positive definite"),
        x(std::move(x)),
        eigenvalue(eig) {}
  Vec x;
  double eigenvalue;
};

class PhiRangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Boundary immersion with normal data. B is charted by `boundary_domain` (dimension n-1);
/// the collar coordinate t is axis 0 of the extension chart.
struct BoundaryData {
  int n = 2;
  ChartDomain boundary_domain;
  std::function<Vec(const Vec&)> f;
  std::function<Mat(const Vec&)> f_jac;
  std::function<Vec(const Vec&)> nubar;
  std::function<Mat(const Vec&)> nubar_jac;
  std::function<Mat(const Vec&)> h_field;
  /// Metric of M in the chart (t, x).
  std::function<Mat(const Vec&)> metric;
};

/// ⟨∂_i∂_j f, ν̄⟩ by differences of f_jac.
Mat abar_normal(const BoundaryData& bd, const Vec& x);
/// Normal part of ∂_i∂_j f contracted twice with v.
Vec abar_vector(const BoundaryData& bd, const Vec& x, const Vec& v);

struct ModelSpec {
  std::string name;
  ChartDomain domain;
  SymMatField metric;
  BaseMap base;
  std::optional<SymMatField> closed_defect;
  std::map<std::string, double> info;
  std::vector<std::string> warnings;

  LayeredMap map() const { return LayeredMap(domain, base, metric); }
};

struct DefectCheck {
  double max_on_boundary = 0;
  double min_eig = 0;
  double min_eig_interior = 0;  // distance ≥ 0.05·band width
  double max_closed_form_error = 0;
  std::size_t samples = 0;
};
/// Sampled defect validation on a uniform grid.
DefectCheck check_model(const ModelSpec& m, int per_axis);

ModelSpec short_map_from_normal_data(const BoundaryData& bd, double eps_band);

ModelSpec model_circle();
ModelSpec model_sphere_band(double eps_geom, int side, double theta_max = 1.2);

double coin_length(double a);
double coin_constant(double a);
ModelSpec model_coin(double a, double eps_band);
double coin_diameter(double a, int samples = 2048);

ModelSpec model_dirichlet_disk(const std::function<double(const Vec&)>& phi, const BaseMap& u_embed,
                               const ChartDomain& domain);
/// Polar annulus chart x₀ = 1 − ρ ∈ [0, 0.5] with φ = 1 − c(1 − ρ²) and the flat disk embedding.
ModelSpec model_dirichlet_default(double c = 0.3);

BoundaryData equator_boundary_data(bool outward_normal);
BoundaryData flat_segment_boundary_data();

double psi_value(double psi1, double r);
BoundaryData psi_boundary_data(double psi1, int n);

struct ObstructionModelReport {
  int n = 2;
  double psi1 = 0;
  Mat margin, expected;
  double max_error = 0;
  double min_margin_eig = 0;
  bool obstructed = false;
  std::string verdict;
};
ObstructionModelReport model_obstruction_metric(double psi1, int n = 2);

std::vector<std::string> model_names();
/// Builds a model from its CLI name and numeric parameters.
ModelSpec model_by_name(const std::string& name, const std::map<std::string, double>& params);

}  // namespace corrint
