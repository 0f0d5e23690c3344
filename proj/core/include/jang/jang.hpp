#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jang/barriers.hpp"
#include "jang/grid.hpp"
#include "jang/harmonics.hpp"
#include "jang/initial_data.hpp"

namespace jang {

// ---- pointwise operator --------------------------------------------------
//
// The graph inverse g^{ij} - f^i f^j / (1 + |df|^2) is evaluated as the
// cofactor inverse of g + df df (the same matrix); the explicit difference
// loses all digits at large r where g^{rr} ~ r^2.

/// H_g(f) = (g^{ij} - f^i f^j/(1+|df|^2)) Hess_ij f / sqrt(1+|df|^2).
double mean_curvature_of_graph(const DataPoint& p, const Vec3& df, const Mat3& ddf);
/// tr_g(K)(f) = (g^{ij} - f^i f^j/(1+|df|^2)) K_ij.
double trace_K_of_graph(const DataPoint& p, const Vec3& df);
/// H_g(f) - tr_g(K)(f).
double jang_operator(const DataPoint& p, const Vec3& df, const Mat3& ddf);

/// Closed form of the Jang operator for spherically symmetric data and radial f.
double radial_jang_operator(const RadialSample& s, double r, double df, double ddf);

/// H - tr K - tau f at the interior nodes (size n - 2) of a radial grid, with
/// three-point derivatives. Needs spherically symmetric data.
std::vector<double> jang_residual(const InitialData& data, const RadialGrid& grid, const std::vector<double>& f,
                                  double tau);

/// Radial profile with derivatives: returns {phi, phi', phi'', phi'''}.
using ProfileFn = std::function<std::array<double, 4>(double r)>;

/// H - tr K - tau f for f = phi(r) + psi(theta, phi) on radii x sphere nodes,
/// flattened [radius][sphere node]; angular derivatives analytic.
std::vector<double> jang_residual_ansatz(const InitialData& data, const ProfileFn& phi, const HarmonicCoeffs& psi,
                                         const std::vector<double>& radii, const SphereGrid& sphere, double tau = 0.0);

/// max |jang_residual(phi) - sqrt(1+r^2)[k' + (2/r)(k - r/sqrt(1+r^2)) - (1-k^2)/sqrt(1+r^2)]|
/// on exact hyperbolic data with k from the k-substitution.
double kform_identity_check(const ProfileFn& phi, const RadialGrid& grid);

struct ModeFit {
  int l = 0, m = 0;
  double constant = 0.0;  // harmonic coefficient of the constant part
  double log = 0.0;       // harmonic coefficient of the ln r part
};

struct AnsatzFit {
  double constant_part = 0.0;  // signed value of the fitted constant function where it is largest
  double log_part = 0.0;
  double constant_sup = 0.0;   // sup over the sphere
  double log_sup = 0.0;
  std::vector<ModeFit> modes;
};

/// Fits r^3 J(f) = a + b ln r + c/r per harmonic mode over the radii.
AnsatzFit ansatz_leading_coefficient(const InitialData& data, const ProfileFn& phi, const HarmonicCoeffs& psi,
                                     const std::vector<double>& radii, const SphereGrid& sphere);

// ---- radial geometric solution --------------------------------------------

/// Solution of the tau = 0 radial Jang equation, written as a first-order
/// ODE in v = f'/sqrt(g_rr + f'^2), started with v = 0 at r_start (or the
/// regular-center series when the data has a smooth center).
struct RadialGraph {
  std::vector<double> r, f, df, ddf, dddf, v;
  double r_start = 0.0;
};

RadialGraph radial_jang_graph(const InitialData& data, const std::vector<double>& nodes, double r_start);

// ---- regularized boundary value problem -----------------------------------

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual(last_residual) {}
  double last_residual;
};

class TrappingError : public std::runtime_error {
 public:
  TrappingError(const std::string& what, double r, double violation)
      : std::runtime_error(what), r(r), violation(violation) {}
  double r, violation;
};

struct JangProblem {
  const InitialData* data = nullptr;
  RadialGrid grid;
  double tau = 0.0;
  double boundary_value = 0.0;
};

enum class InitialGuess {
  shooting,  // tau = 0 radial solution from the inner node, shifted to the boundary value
  midpoint,  // (f_+ + f_-)/2, constant below r0
};

struct JangSolveOptions {
  double tolerance = 1e-6;     // on max |H - tr K - tau f|; the roundoff floor near r = 0 is ~1e-8
  int max_iterations = 200;
  double initial_pseudo_step = 1e8;  // first pseudo-time step of the continuation (scaled rows)
  double trap_abort = 1e-6;    // Newton iterates may not leave the barrier slab by more than this * max(1, max|f|)
  double trap_rel_tol = 1e-8;  // trapped: f_- - tol <= f <= f_+ + tol, tol = this * max|f|
  InitialGuess guess = InitialGuess::shooting;  // falls back to midpoint if the shot blows up
  std::vector<double> initial_guess;  // overrides `guess` when non-empty
};

struct JangSolution {
  RadialGrid grid;
  double tau = 0.0;
  double boundary_value = 0.0;
  std::vector<double> f, df, residual;  // residual at interior nodes (ends 0)
  std::vector<double> f_plus, f_minus;  // barriers at nodes >= r0 (NaN below)
  double residual_norm = 0.0;
  int newton_iterations = 0;
  std::vector<double> newton_history;  // scaled residual norms
  bool trapped = false;
  double trap_violation = 0.0;         // max(f_- - f, f - f_+, 0) over nodes >= r0
  double tau_max_f = 0.0;              // tau max|f|
  double apriori_bound = 0.0;          // max(sup|tr K|, tau |boundary value|)
  bool apriori_ok = false;
};

/// Damped Newton (pseudo-transient continuation) on the three-point
/// discretization with Neumann data at the inner node and Dirichlet data at R.
JangSolution solve_regularized_bvp(const JangProblem& problem, const BarrierSolution& barriers,
                                   const JangSolveOptions& options = {});

struct ScheduleStep {
  double R = 0.0;
  double tau = 0.0;
};

/// R_n = R0 2^{n/2}, tau_n = tau0 2^{-n}, n = 0..steps-1.
std::vector<ScheduleStep> default_schedule(double R0, double tau0, int steps = 6);

struct GeometricLimitOptions {
  double r_inner = 0.0;        // 0: barrier r0 (or 1e-2 for data with a regular center)
  double log_step = 0.0;       // ln of the grid ratio; 0: 400 nodes per the first domain
  double inner_lo = 5.0, inner_hi = 50.0;
  JangSolveOptions solve;
};

struct GeometricLimitReport {
  std::vector<JangSolution> solves;
  std::vector<ScheduleStep> schedule;
  std::vector<double> inner_r;
  std::vector<double> sup_diff;   // between consecutive iterates on the inner region
  std::vector<double> ratios;     // sup_diff[i] / sup_diff[i+1]
  bool cauchy = true;
  std::string message;
  // Tail verification of the final iterate.
  double log_coefficient = 0.0;   // beta in f - sqrt(1+r^2) = C + beta ln r + c/r
  double remainder_exponent = 0.0;
  double remainder_constant = 0.0;
};

/// Runs the schedule (each step continues from the previous solution when the
/// grids nest) and reports the Cauchy behaviour on the fixed inner region.
/// Solver failures propagate.
GeometricLimitReport geometric_limit(const InitialData& data, const BarrierSolution& barriers,
                                     const std::vector<ScheduleStep>& schedule,
                                     const GeometricLimitOptions& options = {});

}  // namespace jang
