#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jang/grid.hpp"
#include "jang/harmonics.hpp"
#include "jang/initial_data.hpp"

namespace jang {

enum class BarrierSide { upper, lower };

class BarrierFailureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BarrierDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class OrderingError : public std::runtime_error {
 public:
  OrderingError(const std::string& what, double r, double gap) : std::runtime_error(what), r(r), gap(gap) {}
  double r;    // worst point
  double gap;  // f_+ - f_- there (negative)
};

struct BarrierODEParams {
  std::array<double, 8> C{};  // C[0] = C1, ..., C[7] = C8
  double alpha = 0.0;
  double r0 = 1.0;

  /// Throws ValidationError on negative constants or r0 <= 0.
  void validate() const;
  /// The solution leaves k = -1 (upper) or k = +1 (lower) immediately at r0.
  [[nodiscard]] bool sign_condition(BarrierSide side) const;
};

/// k' from the barrier ODE of the given side (upper carries -C terms on the
/// right-hand side, lower carries +C terms and the C7/C8 bracket).
double ode_rhs(BarrierSide side, double r, double k, const BarrierODEParams& params);

/// The C-correction terms at (r, k), summed (always >= 0), excluding the C7/C8 bracket.
double ode_correction(double r, double k, const BarrierODEParams& params);

struct BarrierIvpOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double series_fraction = 1e-3;       // first step = series_fraction * r0
  std::optional<double> initial_k;     // replaces the singular start k(r0) = -/+1
  double normalization_radius = 1e4;   // phi normalized over [R/10, R], R = max(this, last node)
};

struct BarrierIvpResult {
  std::vector<double> r;
  std::vector<double> k;
  std::vector<double> phi;   // normalized: phi - sqrt(1+r^2) - alpha ln r -> 0
  std::vector<double> dphi;  // phi' (infinite at a singular start)
  double normalization = 0.0;  // constant subtracted from the raw integral
};

/// Integrates the side's ODE from r0 and samples k and phi at `nodes` (sorted, >= r0).
/// Throws BarrierFailureError when the sign condition fails or k reaches +-1 beyond r0.
BarrierIvpResult solve_barrier_ivp(BarrierSide side, const BarrierODEParams& params, const std::vector<double>& nodes,
                                   const BarrierIvpOptions& options = {});

/// phi from sampled k by quadrature of phi' = k / sqrt((1-k^2)(1+r^2)), with a
/// square-root model on the first interval when |k(r0)| = 1, normalized over the
/// last decade of the grid.
std::vector<double> integrate_phi(const std::vector<double>& k, const RadialGrid& grid, double alpha);

/// Sup-norm constants for the barrier ODEs from Wang data (see README for the mapping).
BarrierODEParams constants_from_data(const InitialData& data, const RadialGrid& tail, int sphere_degree = 16);

/// Right-hand side of the psi equation, (1/2) tr m + tr p - alpha, as harmonic coefficients.
HarmonicCoeffs psi_rhs(const WangDataSpec& spec, double alpha);
/// Mean-zero psi solving Delta psi = (1/2) tr m + tr p - alpha with alpha = 2E.
HarmonicCoeffs solve_psi(const WangDataSpec& spec);

struct BarrierSolution {
  RadialGrid grid;
  std::vector<double> k_plus, k_minus;
  std::vector<double> phi_plus, phi_minus;
  HarmonicCoeffs psi{0};
  BarrierODEParams params;
  BarrierIvpOptions options;
  int retries = 0;

  [[nodiscard]] double f_plus(std::size_t i, double theta, double phi) const;
  [[nodiscard]] double f_minus(std::size_t i, double theta, double phi) const;

  /// phi_+ and phi_- re-integrated at arbitrary nodes (>= r0), same normalization.
  struct Samples {
    std::vector<double> phi_plus, phi_minus;
  };
  [[nodiscard]] Samples sample(const std::vector<double>& nodes) const;
};

struct BarrierGridSpec {
  double r_max = 1e4;
  std::size_t nodes = 400;
};

/// Builds f_+- = phi_+- + psi. Doubles r0 (up to `max_retries` times) on
/// barrier failure. Throws OrderingError if f_- <= f_+ fails on the grid.
BarrierSolution assemble_barriers(BarrierODEParams params, const WangDataSpec& spec, const BarrierGridSpec& grid,
                                  const BarrierIvpOptions& options = {}, int max_retries = 6);

struct BarrierAsymptotics {
  double alpha_plus = 0.0, alpha_minus = 0.0;  // fitted r^-3 coefficients of k_+- - r/sqrt(1+r^2)
  double residual_plus = 0.0, residual_minus = 0.0;
  double exponent_plus = 0.0, exponent_minus = 0.0;  // free log-log exponent (NaN when the tail changes sign)
};

/// Least squares r^3 (k - r/sqrt(1+r^2)) = alpha + c/r + c' ln r / r over the nodes in [r_lo, r_hi].
BarrierAsymptotics fit_barrier_asymptotics(const BarrierSolution& barriers, double r_lo = 1e2, double r_hi = 1e4);

}  // namespace jang
