#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jang/fit.hpp"
#include "jang/grid.hpp"
#include "jang/harmonics.hpp"
#include "jang/tensor.hpp"

namespace jang {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// g, K and their coordinate derivatives at one point of the polar chart.
struct DataPoint {
  Mat3 g{};
  Deriv3 dg{};
  Deriv33 ddg{};
  Mat3 K{};
  Deriv3 dK{};
};

/// Deviations from the hyperboloid: e = g - b, eta = K - g, with de = d(g - b).
/// Evaluated directly (not by subtraction) when the data family allows it,
/// because the mass functional is a sum of individually growing terms.
struct DeviationPoint {
  Mat3 e{};
  Deriv3 de{};
  Mat3 eta{};
};

/// Spherically symmetric data g = a dr^2 + G sigma, K = Krr dr^2 + P sigma.
struct RadialSample {
  double a = 0.0, da = 0.0, dda = 0.0;
  double G = 0.0, dG = 0.0, ddG = 0.0;
  double Krr = 0.0, dKrr = 0.0;
  double P = 0.0, dP = 0.0;

  // Deviations from the hyperbolic profile: a - 1/(1+r^2), G - r^2, G' - 2r,
  // Krr - 1/(1+r^2), P - r^2. Builders fill them without cancellation; when
  // has_deviation is false, deviation_filled() forms them by subtraction.
  bool has_deviation = false;
  double a_dev = 0.0, G_dev = 0.0, dG_dev = 0.0, Krr_dev = 0.0, P_dev = 0.0;

  [[nodiscard]] RadialSample deviation_filled(double r) const;
};
using RadialProfile = std::function<RadialSample(double r)>;

/// A symmetric 2-tensor on the sphere in the basis
///   sigma    : A sigma
///   tf_plus  : B (dtheta^2 - sin^2 theta dphi^2)
///   tf_cross : C sin theta (dtheta dphi + dphi dtheta)
/// with A, B, C expanded in real harmonics. The trace is tr^sigma = 2A.
struct SymTensorField {
  HarmonicCoeffs sigma{0};
  HarmonicCoeffs tf_plus{0};
  HarmonicCoeffs tf_cross{0};
  /// Coefficients of the area form; any nonzero entry makes the tensor
  /// non-symmetric and fails validation.
  HarmonicCoeffs antisym{0};

  [[nodiscard]] HarmonicCoeffs trace() const { return sigma.scaled(2.0); }
  /// Only a constant multiple of sigma.
  [[nodiscard]] bool is_spherical(double tol = 0.0) const;
  [[nodiscard]] int degree() const;

  /// Angular components (theta theta, theta phi, phi phi) with derivatives up to second order.
  struct Components {
    AngularJet tt, tp, pp;
  };
  [[nodiscard]] Components components(double theta, double phi) const;

  static SymTensorField multiple_of_sigma(double c);
};

struct WangRemainders {
  double g_angular = 0.0;  // adds c * r^-4 relative to r^2 sigma in g
  double k_angular = 0.0;  // same for K
};

struct WangDataSpec {
  std::string name = "wang";
  SymTensorField m;
  SymTensorField p;
  WangRemainders remainders;

  /// Throws ValidationError for non-symmetric or non-finite input.
  void validate() const;
  [[nodiscard]] bool is_spherical() const { return m.is_spherical() && p.is_spherical(); }
  [[nodiscard]] WangDataSpec rotated_z(double angle) const;
};

class InitialData {
 public:
  using PointFn = std::function<DataPoint(double r, double theta, double phi)>;
  using DeviationFn = std::function<DeviationPoint(double r, double theta, double phi)>;

  InitialData(std::string name, PointFn point, double r_min);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] double r_min() const { return r_min_; }
  [[nodiscard]] DataPoint at(double r, double theta, double phi) const { return point_(r, theta, phi); }
  /// Deviation from (b, b); uses the direct evaluator when present.
  [[nodiscard]] DeviationPoint deviation_at(double r, double theta, double phi) const;
  [[nodiscard]] bool has_direct_deviation() const { return static_cast<bool>(deviation_); }

  /// Step used for finite-difference derivatives (0 for analytic data).
  [[nodiscard]] double fd_step() const { return fd_step_; }
  [[nodiscard]] const std::optional<RadialProfile>& radial() const { return radial_; }
  [[nodiscard]] bool spherically_symmetric() const { return radial_.has_value(); }
  [[nodiscard]] const std::optional<WangDataSpec>& spec() const { return spec_; }
  /// True when the data is smooth at r = 0 (radial solves may start near the center).
  [[nodiscard]] bool regular_center() const { return regular_center_; }

  InitialData& with_deviation(DeviationFn fn);
  InitialData& with_radial(RadialProfile profile);
  InitialData& with_spec(WangDataSpec spec);
  InitialData& with_fd_step(double h);
  InitialData& with_regular_center(bool regular);

 private:
  std::string name_;
  PointFn point_;
  DeviationFn deviation_;
  double r_min_;
  double fd_step_ = 0.0;
  bool regular_center_ = false;
  std::optional<RadialProfile> radial_;
  std::optional<WangDataSpec> spec_;
};

/// Point data of a spherically symmetric profile.
DataPoint radial_point(const RadialSample& s, double theta);

InitialData make_hyperboloid_data();
InitialData make_wang_data(const WangDataSpec& spec);
/// Spherically symmetric data from a profile; the deviation is formed by subtraction.
InitialData make_radial_data(std::string name, RadialProfile profile, double r_min, bool regular_center);
/// Umbilic data K = g in the areal chart, g = dr^2/(1 + r^2 - 2M(r)/r) + r^2 sigma with
/// M(r) = E r^3/(1+r^2)^{3/2}. Regular center, mu = 2M'/r^2 >= 0, J = 0, energy E.
InitialData make_areal_mass_data(double energy);
/// g = b, K = c b with c chosen so that mu = mu0 (and J = 0). Needs mu0 > -3.
InitialData make_planted_mu_data(double mu0);
/// Black-box data: derivatives by central differences with step h * max(1, r).
InitialData make_fd_data(std::string name, std::function<Mat3(double, double, double)> metric,
                         std::function<Mat3(double, double, double)> curvature, double r_min, double h = 1e-4);

/// The hyperbolic metric with derivatives.
void hyperbolic_metric(double r, double theta, Mat3& b, Deriv3& db, Deriv33* ddb = nullptr);

// ---- constraints ---------------------------------------------------------

struct Constraints {
  double mu = 0.0;
  Vec3 J{};
  double J_norm = 0.0;
  double scal = 0.0;
  double trK = 0.0;
  double K_norm2 = 0.0;
};

/// 2 mu = Scal + (tr K)^2 - |K|^2,  J = div K - d tr K.
Constraints compute_constraints(const DataPoint& p);
Constraints compute_constraints(const InitialData& data, double r, double theta, double phi);

struct ConstraintReport {
  std::vector<double> radii;
  std::size_t sphere_points = 0;
  // flattened [radius][sphere node]
  std::vector<double> mu, J_norm, margin;
  double min_margin = 0.0;
  double min_r = 0.0, min_theta = 0.0, min_phi = 0.0;
  bool violated = false;
};

ConstraintReport dec_report(const InitialData& data, const RadialGrid& radii, const SphereGrid& sphere);

// ---- energy and mass -----------------------------------------------------

/// E = (1/16 pi) int (tr m + 2 tr p) dmu^sigma, by quadrature.
double energy_wang(const WangDataSpec& spec, int sphere_degree = 16);

/// Integrand of the mass functional against the outward normal sqrt(1+r^2) d_r,
/// per unit sphere area (includes r^2 from dmu^b). Vjet = (V, dV/dr, dV/dtheta, dV/dphi).
double mass_functional_density(const DeviationPoint& d, double r, double theta, const std::array<double, 4>& Vjet);

struct MassRow {
  double R = 0.0;
  double E = 0.0;
  Vec3 P{};
};

struct MassVector {
  double E = 0.0;
  Vec3 P{};
  std::vector<MassRow> rows;
  Extrapolation fit;           // fixed rate 1
  Extrapolation free_fit;      // fitted truncation rate (needs >= 4 radii)
  bool divergence_warning = false;
  std::string warning;
};

/// Surface integrals of H(V_(0..3)) / 16 pi at each radius, extrapolated with
/// value(R) = limit + c/R.
MassVector mass_vector(const InitialData& data, const std::vector<double>& radii, int sphere_degree = 16,
                       double residual_threshold = 1e-3);

// ---- trapping ------------------------------------------------------------

/// min over the sphere of H - |tr K| for the coordinate sphere r = R
/// with the outward normal.
double trapping_margin(const InitialData& data, double R, int sphere_degree = 8);

}  // namespace jang
