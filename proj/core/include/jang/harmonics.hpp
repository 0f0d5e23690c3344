#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "jang/grid.hpp"

namespace jang {

/// Value and angular derivatives of a scalar function on the sphere at one point.
struct AngularJet {
  double v = 0.0;
  double t = 0.0, p = 0.0;                     // d/dtheta, d/dphi
  double tt = 0.0, tp = 0.0, pp = 0.0;         // second derivatives
  double ttt = 0.0, ttp = 0.0, tpp = 0.0, ppp = 0.0;  // third derivatives

  AngularJet& operator+=(const AngularJet& o);
  AngularJet& operator*=(double s);
};

AngularJet operator+(AngularJet a, const AngularJet& b);
AngularJet operator-(AngularJet a, const AngularJet& b);
AngularJet operator*(double s, AngularJet a);

/// Product w(theta) * j where w is known with its theta-derivatives up to third order.
AngularJet multiply_theta(double w, double wt, double wtt, double wttt, const AngularJet& j);

class UnsolvableRhsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Orthonormal real spherical harmonics:
///   Y_l0 = Pbar_l0(cos t),  Y_lm = sqrt2 Pbar_lm cos(m p),  Y_l,-m = sqrt2 Pbar_lm sin(m p)
/// with Pbar normalized so that the integral of Y^2 over the sphere is one
/// (no Condon-Shortley phase).
class HarmonicCoeffs {
 public:
  HarmonicCoeffs() = default;
  explicit HarmonicCoeffs(int degree);

  static std::size_t index(int l, int m) { return static_cast<std::size_t>(l * l + l + m); }

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] double get(int l, int m) const;
  void set(int l, int m, double value);
  void add(int l, int m, double value);
  [[nodiscard]] const std::vector<double>& data() const { return c_; }

  /// Coefficients of Delta_{S^2} applied to this function.
  [[nodiscard]] HarmonicCoeffs laplacian() const;
  [[nodiscard]] HarmonicCoeffs scaled(double s) const;
  /// Degree raised to at least `degree` (zero padded).
  [[nodiscard]] HarmonicCoeffs padded(int degree) const;
  [[nodiscard]] bool is_zero(double tol = 0.0) const;
  /// True when only the (0,0) coefficient is nonzero.
  [[nodiscard]] bool is_constant(double tol = 0.0) const;
  [[nodiscard]] double max_abs_coefficient() const;

  [[nodiscard]] double evaluate(double theta, double phi) const;
  /// Value with derivatives up to third order. theta must avoid the poles.
  [[nodiscard]] AngularJet jet(double theta, double phi) const;

  [[nodiscard]] std::vector<double> synthesize(const SphereGrid& grid) const;
  static HarmonicCoeffs analyze(const SphereGrid& grid, std::span<const double> samples, int degree);

  /// Rigid rotation about the polar axis: returns g with g(theta, phi) = f(theta, phi - angle).
  [[nodiscard]] HarmonicCoeffs rotated_z(double angle) const;

  HarmonicCoeffs& operator+=(const HarmonicCoeffs& o);

 private:
  int degree_ = 0;
  std::vector<double> c_ = std::vector<double>(1, 0.0);
};

HarmonicCoeffs operator+(HarmonicCoeffs a, const HarmonicCoeffs& b);

/// Normalized associated Legendre values Pbar_lm(cos theta) for 0 <= m <= l <= L,
/// stored at HarmonicCoeffs::index(l, m).
std::vector<double> normalized_legendre(int degree, double theta);

/// Sample of the real harmonic Y_lm at a point.
double real_harmonic(int l, int m, double theta, double phi);

/// Solve Delta_{S^2} psi = rhs with mean-zero psi. Throws UnsolvableRhsError when the
/// (0,0) coefficient of rhs exceeds `tolerance` in magnitude.
HarmonicCoeffs solve_sphere_poisson(const HarmonicCoeffs& rhs, double tolerance = 1e-10);

/// Pointwise Delta_{S^2} f = f_tt + cot(t) f_t + f_pp / sin^2 t from a jet.
double sphere_laplacian(const AngularJet& j, double theta);

}  // namespace jang
