#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "jang/fit.hpp"
#include "jang/grid.hpp"
#include "jang/harmonics.hpp"
#include "jang/initial_data.hpp"
#include "jang/jang.hpp"

namespace jang {

/// f and its coordinate derivatives at a point; dddf[k][i][j] = d_k d_i d_j f.
struct GraphJet {
  double f = 0.0;
  Vec3 df{};
  Mat3 ddf{};
  std::array<Mat3, 3> dddf{};
};

/// f = phi(r) + psi(theta, phi) with phi known (with three derivatives) at
/// the nodes of a radial grid. Radial Jang graphs have psi = 0.
class GraphFunction {
 public:
  GraphFunction(RadialGrid grid, std::vector<std::array<double, 4>> radial, HarmonicCoeffs psi = HarmonicCoeffs(0));

  [[nodiscard]] const RadialGrid& grid() const { return grid_; }
  [[nodiscard]] const HarmonicCoeffs& psi() const { return psi_; }
  [[nodiscard]] const std::array<double, 4>& radial(std::size_t i) const { return radial_[i]; }
  [[nodiscard]] GraphJet jet(std::size_t i, double theta, double phi) const;
  /// Node index of r; throws std::out_of_range unless r is a grid node (relative 1e-12).
  [[nodiscard]] std::size_t node(double r) const;

  /// Same function plus a constant.
  [[nodiscard]] GraphFunction shifted(double c) const;

 private:
  RadialGrid grid_;
  std::vector<std::array<double, 4>> radial_;
  HarmonicCoeffs psi_;
};

GraphFunction graph_from_radial(const RadialGraph& graph);
GraphFunction graph_from_profile(const ProfileFn& phi, const RadialGrid& grid, const HarmonicCoeffs& psi);

struct MetricJet {
  Mat3 g{};
  Deriv3 dg{};
  Deriv33 ddg{};
};

/// The induced metric g + df df of a graph over initial data, in the base polar chart.
class GraphMetric {
 public:
  GraphMetric(const InitialData& data, GraphFunction f);

  [[nodiscard]] const InitialData& data() const { return *data_; }
  [[nodiscard]] const GraphFunction& function() const { return f_; }
  [[nodiscard]] const RadialGrid& grid() const { return f_.grid(); }

  [[nodiscard]] Mat3 metric(std::size_t i, double theta, double phi) const;
  /// g^{ij} - f^i f^j / (1 + |df|^2_g), the rank-one update of the base inverse.
  [[nodiscard]] Mat3 inverse(std::size_t i, double theta, double phi) const;
  /// Analytic first and second derivatives from the data jets and f up to third order.
  [[nodiscard]] MetricJet jet(std::size_t i, double theta, double phi) const;

 private:
  const InitialData* data_;
  GraphFunction f_;
};

GraphMetric induced_metric(const InitialData& data, GraphFunction f);

struct SecondFundamentalForm {
  Mat3 A{};
  double H = 0.0;
  double A_norm2 = 0.0;        // |A|^2 in the graph metric
  double A_minus_K_norm2 = 0.0;
};

/// A_ij = Hess^g_ij f / sqrt(1 + |df|^2_g).
SecondFundamentalForm second_fundamental_form(const GraphMetric& m, std::size_t i, double theta, double phi);

/// q_i = f^j (A_ij - K_ij) / sqrt(1 + |df|^2_g).
Vec3 q_oneform(const GraphMetric& m, std::size_t i, double theta, double phi);

/// div^gbar q by finite differences: radial three-point stencil on the grid
/// (interior node i) and central differences of step `dang` in the angles.
double divergence_q(const GraphMetric& m, std::size_t i, double theta, double phi, double dang);

struct SchoenYauTerms {
  double mu_minus_Jw = 0.0;  // mu - J(w), w^i = f^i / sqrt(1 + |df|^2_g)
  double A_minus_K_norm2 = 0.0;
  double q_norm2 = 0.0;
  double div_q = 0.0;
  double total = 0.0;        // 2(mu - J(w)) + |A-K|^2 + 2|q|^2 - 2 div q
};

SchoenYauTerms scalar_curvature_sy(const GraphMetric& m, std::size_t i, double theta, double phi, double dang);

/// Scalar curvature of a metric given pointwise, with radial derivatives from
/// the three radii (rm, r0, rp) and angular derivatives by central differences.
using MetricValueFn = std::function<Mat3(double r, double theta, double phi)>;
double scalar_curvature_fd(const MetricValueFn& g, double rm, double r0, double rp, double theta, double phi,
                           double dang);

/// Direct route: finite-difference curvature of gbar at interior node i.
double scalar_curvature_direct(const GraphMetric& m, std::size_t i, double theta, double phi, double dang);
/// Scalar curvature from the analytic jet of gbar.
double scalar_curvature_exact(const GraphMetric& m, std::size_t i, double theta, double phi);

// ---- ADM mass --------------------------------------------------------------

struct FirstJet {
  Mat3 g{};
  Deriv3 dg{};
};
using MetricField = std::function<FirstJet(double r, double theta, double phi)>;

struct AdmRow {
  double R = 0.0;
  double mass = 0.0;
};

struct AdmMass {
  double mass = 0.0;
  std::vector<AdmRow> rows;
  Extrapolation fit;       // mass(R) = limit + c/R
  Extrapolation free_fit;  // fitted rate
  bool divergence_warning = false;
  std::string warning;
};

/// (1/16 pi) of the flux of div e - d tr e, e = g - delta, through r = R in the
/// polar chart, extrapolated in 1/R.
AdmMass adm_mass(const MetricField& g, const std::vector<double>& radii, int sphere_degree = 8,
                 double residual_threshold = 1e-3);
/// Same over the grid nodes of a graph metric in [r_lo, r_hi] (at most `count`, log-spaced).
AdmMass adm_mass(const GraphMetric& m, double r_lo, double r_hi, std::size_t count = 24, int sphere_degree = 8);

/// (1 + m/2r)^4 (dr^2 + r^2 sigma).
MetricField schwarzschild_metric(double m);
/// Polar Euclidean metric dr^2 + r^2 sigma.
MetricField flat_metric();

// ---- report -----------------------------------------------------------------

struct GeometrySample {
  double r = 0.0, theta = 0.0, phi = 0.0;
  double H = 0.0, A_norm2 = 0.0, A_minus_K_norm2 = 0.0;
  Vec3 q{};
  double div_q = 0.0;
  double scal_sy = 0.0, scal_direct = 0.0, scal_exact = 0.0;
};

struct GraphGeometryReport {
  std::vector<GeometrySample> samples;  // [node][sphere point]
  double max_route_discrepancy = 0.0;   // max |scal_sy - scal_direct|
  double angular_step = 0.0;
  AdmMass adm;
};

/// Samples the geometry on the interior grid nodes with r in [r_lo, r_hi].
/// The angular step defaults to the logarithmic grid step.
GraphGeometryReport geometry_report(const GraphMetric& m, const SphereGrid& sphere, double r_lo, double r_hi,
                                    double adm_lo, double adm_hi, double dang = 0.0);

}  // namespace jang
