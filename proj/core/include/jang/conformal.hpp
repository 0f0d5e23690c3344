#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "jang/graph.hpp"

namespace jang {

class ConformalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MassInconsistencyError : public std::runtime_error {
 public:
  MassInconsistencyError(const std::string& what, double formula, double quadrature)
      : std::runtime_error(what), formula(formula), quadrature(quadrature) {}
  double formula, quadrature;
};

/// Scalar curvature of a spherically symmetric graph metric at every node (analytic jets).
std::vector<double> scalar_curvature_profile(const GraphMetric& m);

struct ExpansionFit {
  double A = 0.0;
  double c = 0.0;
  double residual = 0.0;  // max |r(u - 1) - A - c/r| over the tail
  bool warning = false;
};

/// Least-squares fit of r(u - 1) = A + c/r over the nodes with r in [r_lo, r_hi].
ExpansionFit extract_A(const std::vector<double>& r, const std::vector<double>& u, double r_lo, double r_hi,
                       double residual_threshold = 1e-4);

struct ConformalOptions {
  double tail_fraction = 0.01;  // A is fitted over [tail_fraction R, R]
  double decay_margin = 0.05;   // u - 1 must decay with exponent >= 1 - margin
  bool richardson = true;       // combine with the every-other-node solve when the node count allows
};

struct ConformalSolve {
  RadialGrid grid;
  std::vector<double> u, du;
  double A = 0.0;
  ExpansionFit fit;
  double boundary_radius = 0.0;
  double bound = 1.0;            // c with 1/c <= u <= c
  double scal_decay_rate = 0.0;  // fitted tail rate of Scal (infinity when Scal vanishes)
  double u_decay_rate = 0.0;     // fitted tail rate of u - 1 (infinity when u = 1)
  std::string warning;
};

/// -Delta u + Scal u / 8 = 0 on the nodes of the graph grid with r <= R, with
/// u' = 0 at the inner node and u' + (u - 1)/r = 0 at the outer node.
/// Scal must be sampled on the graph grid.
ConformalSolve solve_conformal_factor(const GraphMetric& m, const std::vector<double>& scal, double outer_radius,
                                      const ConformalOptions& options = {});

struct ConformalMass {
  double alpha = 0.0;      // ADM mass of gbar over the window
  double formula = 0.0;    // alpha + 2A
  double quadrature = 0.0; // ADM mass of u^4 gbar
  AdmMass graph_adm, conformal_adm;
  double discrepancy = 0.0;  // |formula - quadrature| / max(|alpha|, |formula|, |quadrature|, mass_floor)
};

/// Both routes to the mass of u^4 gbar, extrapolated over the nodes in [adm_lo, adm_hi].
/// Throws MassInconsistencyError when they differ by more than `inconsistency` on the mass scale,
/// which is never taken below `mass_floor` so that massless data is not judged on roundoff.
ConformalMass conformal_mass(const GraphMetric& m, const ConformalSolve& u, double adm_lo, double adm_hi,
                             double inconsistency = 0.05, double mass_floor = 1e-6);

struct MassChain {
  double E = 0.0;
  double alpha = 0.0;      // 2E
  double M_bar = 0.0;      // ADM mass of gbar
  double A = 0.0;
  double M_conf = 0.0;     // alpha + 2A
  double M_conf_adm = 0.0; // quadrature route
  double margin_pmt = 0.0; // E - M_conf
  double margin_A = 0.0;   // -alpha/4 - A
  bool pmt_ok = false;
  bool A_ok = false;
  bool nonnegative = false;  // M_conf >= -tol; reported only
};

MassChain mass_chain_report(double energy, const ConformalSolve& u, const ConformalMass& mass, double tolerance = 1e-2);

}  // namespace jang
