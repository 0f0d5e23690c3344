#include "jang/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SparseLU>

#include "jang/finite_difference.hpp"
#include "jang/fit.hpp"
#include "jang/parallel.hpp"

namespace jang {

namespace {

constexpr double kEquator = std::numbers::pi / 2;

struct RadialCoefficients {
  std::vector<double> r, drift, potential;  // u'' + drift u' - potential u = 0
};

std::vector<double> solve_linear(const RadialCoefficients& c, std::size_t stride) {
  std::vector<double> r, drift, pot;
  for (std::size_t i = 0; i < c.r.size(); i += stride) {
    r.push_back(c.r[i]);
    drift.push_back(c.drift[i]);
    pot.push_back(c.potential[i]);
  }
  const std::size_t n = r.size();
  if (n < 3) throw ConformalError("conformal solve needs at least three nodes");
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  const auto id = [](std::size_t i) { return static_cast<int>(i); };

  // Neumann row, one-sided second order.
  const double x0[3] = {r[0], r[1], r[2]};
  const auto w0 = fornberg_weights(r[0], x0, 1);
  for (int j = 0; j < 3; ++j) trip.emplace_back(0, j, w0[1][j]);

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const ThreePoint w = three_point(r[i - 1], r[i], r[i + 1]);
    for (int j = 0; j < 3; ++j) {
      double v = w.d2[j] + drift[i] * w.d1[j];
      if (j == 1) v -= pot[i];
      trip.emplace_back(id(i), id(i - 1 + j), v);
    }
  }

  // Robin row u' + (u - 1)/R = 0, one-sided second order.
  const double R = r[n - 1];
  const double xN[3] = {r[n - 3], r[n - 2], r[n - 1]};
  const auto wN = fornberg_weights(R, xN, 1);
  for (int j = 0; j < 3; ++j) trip.emplace_back(id(n - 1), id(n - 3 + j), wN[1][j] + (j == 2 ? 1.0 / R : 0.0));
  rhs[static_cast<Eigen::Index>(n - 1)] = 1.0 / R;

  Eigen::SparseMatrix<double> M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  M.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) throw ConformalError("conformal system is singular");
  const Eigen::VectorXd u = lu.solve(rhs);
  return {u.data(), u.data() + u.size()};
}

// Tail decay rate of y, or infinity when y vanishes to `zero` there, or NaN
// when the samples change sign.
double tail_rate(const std::vector<double>& r, const std::vector<double>& y, double lo, double hi, double zero) {
  std::vector<double> rr, yy;
  double peak = 0.0;
  bool pos = false, neg = false;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= lo && r[i] <= hi) {
      rr.push_back(r[i]);
      yy.push_back(y[i]);
      peak = std::max(peak, std::abs(y[i]));
      pos = pos || y[i] > 0.0;
      neg = neg || y[i] < 0.0;
    }
  if (peak <= zero) return std::numeric_limits<double>::infinity();
  if ((pos && neg) || rr.size() < 10) return std::numeric_limits<double>::quiet_NaN();
  return fit_decay_tail(rr, yy).p;
}

}  // namespace

std::vector<double> scalar_curvature_profile(const GraphMetric& m) {
  std::vector<double> out(m.grid().size());
  parallel_for(out.size(), [&](std::size_t i) { out[i] = scalar_curvature_exact(m, i, kEquator, 0.0); });
  return out;
}

ExpansionFit extract_A(const std::vector<double>& r, const std::vector<double>& u, double r_lo, double r_hi,
                       double residual_threshold) {
  std::vector<double> one, inv, y;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= r_lo && r[i] <= r_hi) {
      one.push_back(1.0);
      inv.push_back(1.0 / r[i]);
      y.push_back(r[i] * (u[i] - 1.0));
    }
  if (y.size() < 3) throw FitInputError("expansion fit needs at least three tail nodes");
  ExpansionFit out;
  const std::vector<double> b = least_squares({one, inv}, y, &out.residual);
  out.A = b[0];
  out.c = b[1];
  out.warning = out.residual > residual_threshold * std::max(1.0, std::abs(out.A));
  return out;
}

ConformalSolve solve_conformal_factor(const GraphMetric& m, const std::vector<double>& scal, double outer_radius,
                                      const ConformalOptions& options) {
  const RadialGrid& grid = m.grid();
  if (scal.size() != grid.size()) throw std::invalid_argument("Scal must be sampled on the graph grid");
  std::size_t n = 0;
  while (n < grid.size() && grid[n] <= outer_radius * (1.0 + 1e-12)) ++n;
  if (n < 5) throw ConformalError("fewer than five nodes inside the outer radius");

  RadialCoefficients c;
  c.r.assign(grid.nodes().begin(), grid.nodes().begin() + static_cast<std::ptrdiff_t>(n));
  c.drift.resize(n);
  c.potential.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const MetricJet j = m.jet(i, kEquator, 0.0);
    const double A = j.g[0][0], dA = j.dg[0][0][0];
    const double G = j.g[1][1], dG = j.dg[0][1][1];
    c.drift[i] = dG / G - dA / (2.0 * A);
    c.potential[i] = A * scal[i] / 8.0;
  }

  ConformalSolve out;
  out.boundary_radius = c.r.back();
  const double R = out.boundary_radius;
  const double tail_lo = options.tail_fraction * R;

  std::vector<double> r3s(n);
  for (std::size_t i = 0; i < n; ++i) r3s[i] = std::pow(c.r[i], 3) * scal[i];
  // r^3 Scal below 1e-9 is roundoff on a scalar-flat graph.
  out.scal_decay_rate = 3.0 + tail_rate(c.r, r3s, tail_lo, R, 1e-9);
  if (std::isnan(out.scal_decay_rate)) {
    // Mixed signs: r^3 Scal must still shrink across the tail.
    const double split = std::sqrt(tail_lo * R);
    double head = 0.0, end = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (c.r[i] < tail_lo) continue;
      double& slot = c.r[i] < split ? head : end;
      slot = std::max(slot, std::abs(r3s[i]));
    }
    if (end > head) throw ConformalError("Scal does not decay faster than r^-3");
  } else if (out.scal_decay_rate <= 3.0) {
    throw ConformalError("Scal decays at fitted rate " + std::to_string(out.scal_decay_rate) + " <= 3");
  }

  std::vector<double> u = solve_linear(c, 1);
  if (options.richardson && (n - 1) % 2 == 0 && n >= 7) {
    const std::vector<double> coarse = solve_linear(c, 2);
    std::vector<double> delta(n);
    for (std::size_t k = 0; k < coarse.size(); ++k) delta[2 * k] = (u[2 * k] - coarse[k]) / 3.0;
    for (std::size_t i = 1; i < n; i += 2) delta[i] = 0.5 * (delta[i - 1] + delta[i + 1]);
    for (std::size_t i = 0; i < n; ++i) u[i] += delta[i];
  }

  double umin = u[0], umax = u[0];
  for (double x : u) {
    umin = std::min(umin, x);
    umax = std::max(umax, x);
  }
  if (!(umin > 0.0)) throw ConformalError("conformal factor is not positive");
  out.bound = std::max(umax, 1.0 / umin);

  out.grid = RadialGrid(c.r, grid.mode());
  out.du = fd_derivative(c.r, u, 1, 3);
  std::vector<double> um1(n);
  for (std::size_t i = 0; i < n; ++i) um1[i] = u[i] - 1.0;
  out.u = std::move(u);
  out.u_decay_rate = tail_rate(c.r, um1, tail_lo, R, 1e-10);
  if (!std::isnan(out.u_decay_rate) && out.u_decay_rate < 1.0 - options.decay_margin)
    out.warning = "u - 1 decays with exponent " + std::to_string(out.u_decay_rate);

  out.fit = extract_A(c.r, out.u, tail_lo, R);
  out.A = out.fit.A;
  if (out.fit.warning) {
    if (!out.warning.empty()) out.warning += "; ";
    out.warning += "expansion fit residual above threshold";
  }
  return out;
}

ConformalMass conformal_mass(const GraphMetric& m, const ConformalSolve& u, double adm_lo, double adm_hi,
                             double inconsistency, double mass_floor) {
  if (adm_hi > u.boundary_radius * (1.0 + 1e-12)) throw std::invalid_argument("ADM window exceeds the solve domain");
  ConformalMass out;
  out.graph_adm = adm_mass(m, adm_lo, adm_hi);
  out.alpha = out.graph_adm.mass;
  out.formula = out.alpha + 2.0 * u.A;

  std::vector<double> radii;
  for (const AdmRow& row : out.graph_adm.rows) radii.push_back(row.R);
  const MetricField field = [&](double r, double th, double ph) {
    const std::size_t i = m.function().node(r);
    const MetricJet j = m.jet(i, th, ph);
    const double ui = u.u.at(i), dui = u.du.at(i);
    const double u4 = std::pow(ui, 4), du4 = 4.0 * std::pow(ui, 3) * dui;
    FirstJet out_j;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        out_j.g[a][b] = u4 * j.g[a][b];
        for (int k = 0; k < 3; ++k) out_j.dg[k][a][b] = u4 * j.dg[k][a][b] + (k == 0 ? du4 * j.g[a][b] : 0.0);
      }
    return out_j;
  };
  out.conformal_adm = adm_mass(field, radii);
  out.quadrature = out.conformal_adm.mass;

  const double scale = std::max({std::abs(out.alpha), std::abs(out.formula), std::abs(out.quadrature), mass_floor});
  out.discrepancy = std::abs(out.formula - out.quadrature) / scale;
  if (out.discrepancy > inconsistency)
    throw MassInconsistencyError("conformal mass routes disagree", out.formula, out.quadrature);
  return out;
}

MassChain mass_chain_report(double energy, const ConformalSolve& u, const ConformalMass& mass, double tolerance) {
  MassChain out;
  out.E = energy;
  out.alpha = 2.0 * energy;
  out.M_bar = mass.alpha;
  out.A = u.A;
  out.M_conf = mass.formula;
  out.M_conf_adm = mass.quadrature;
  out.margin_pmt = out.E - out.M_conf;
  out.margin_A = -out.alpha / 4.0 - out.A;
  out.pmt_ok = out.margin_pmt >= -tolerance;
  out.A_ok = out.margin_A >= -tolerance;
  out.nonnegative = out.M_conf >= -tolerance;
  return out;
}

}  // namespace jang
