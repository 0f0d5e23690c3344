#include "jang/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "jang/fit.hpp"
#include "jang/parallel.hpp"

namespace jang {

namespace {

double k_hyp(double r) { return r / std::sqrt(1.0 + r * r); }

double correction_terms(double r, double k, double d, double omk2, const BarrierODEParams& p) {
  const auto& C = p.C;
  const double r2 = r * r, r3 = r2 * r, r5 = r3 * r2;
  const double root = std::sqrt(omk2 / (1.0 + r2));
  return C[0] / r2 * std::abs(root - 3.0 * k / r2 + 2.0 / r2) + C[1] / r2 * std::abs(root - 1.0 / r2) +
         C[2] / r3 * std::abs(d) + C[3] / r3 * std::abs(k) * omk2 + C[4] / r3 * omk2 + C[5] / r5;
}

double bracket_term(double r, double k, double omk2, const BarrierODEParams& p) {
  const double C7 = p.C[6], C8 = p.C[7];
  if (C7 == 0.0) return 0.0;
  return C7 * (3.0 - k * k) / r * (std::pow(1.0 + C8 * omk2 / (r * r), 1.5) - 1.0);
}

// k' - k0' written so that no O(1) terms cancel: k = k0 + d, omk2 = 1 - k^2.
double dd_dr(BarrierSide side, double r, double d, double omk2, const BarrierODEParams& p) {
  const double q = std::sqrt(1.0 + r * r);
  const double k0 = r / q;
  const double k = k0 + d;
  double v = -2.0 / r * d + (-2.0 * k0 * d - d * d) / q + p.alpha * std::sqrt(omk2) / (r * r * q);
  const double corr = correction_terms(r, k, d, omk2, p);
  if (side == BarrierSide::upper)
    v -= corr;
  else
    v += corr + bracket_term(r, k, omk2, p);
  return v;
}

double start_value(BarrierSide side) { return side == BarrierSide::upper ? -1.0 : 1.0; }

using State = std::array<double, 2>;

}  // namespace

void BarrierODEParams::validate() const {
  for (double c : C)
    if (!(c >= 0.0) || !std::isfinite(c)) throw ValidationError("barrier constants must be finite and non-negative");
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw ValidationError("barrier r0 must be positive");
  if (!std::isfinite(alpha)) throw ValidationError("alpha must be finite");
}

bool BarrierODEParams::sign_condition(BarrierSide side) const {
  const double kp = ode_rhs(side, r0, start_value(side), *this);
  return side == BarrierSide::upper ? kp > 0.0 : kp < 0.0;
}

double ode_correction(double r, double k, const BarrierODEParams& params) {
  const double omk2 = 1.0 - k * k;
  return correction_terms(r, k, k - k_hyp(r), std::max(0.0, omk2), params);
}

double ode_rhs(BarrierSide side, double r, double k, const BarrierODEParams& params) {
  if (std::abs(k) > 1.0) throw BarrierDomainError("barrier ODE evaluated with |k| > 1");
  const double q = std::sqrt(1.0 + r * r);
  const double omk2 = 1.0 - k * k;
  double v = -2.0 / r * (k - r / q) + omk2 / q + params.alpha * std::sqrt(omk2) / (r * r * q);
  const double corr = correction_terms(r, k, k - r / q, omk2, params);
  if (side == BarrierSide::upper)
    v -= corr;
  else
    v += corr + bracket_term(r, k, omk2, params);
  return v;
}

BarrierIvpResult solve_barrier_ivp(BarrierSide side, const BarrierODEParams& params, const std::vector<double>& nodes,
                                   const BarrierIvpOptions& options) {
  namespace odeint = boost::numeric::odeint;
  params.validate();
  if (nodes.empty()) throw std::invalid_argument("no output nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] < params.r0 * (1.0 - 1e-14)) throw std::invalid_argument("barrier nodes must lie beyond r0");
    if (i > 0 && !(nodes[i] > nodes[i - 1])) throw std::invalid_argument("barrier nodes must increase");
  }
  const double r0 = params.r0;
  const double alpha = params.alpha;
  const bool singular = !options.initial_k.has_value();
  if (singular && !params.sign_condition(side))
    throw BarrierFailureError("sign condition fails at r0; increase r0");

  // Start of the smooth integration, after the series step when needed.
  double r_start = r0, k_start = 0.0, phi_start = 0.0, kp0 = 0.0;
  if (singular) {
    kp0 = ode_rhs(side, r0, start_value(side), params);
    const double h = options.series_fraction * r0;
    r_start = r0 + h;
    k_start = start_value(side) + kp0 * h;
    // 1 - k^2 ~ 2|k'(r0)|(r - r0) near r0, so phi' ~ +-1/sqrt(2|k'|(r - r0)(1 + r0^2)).
    phi_start = (side == BarrierSide::upper ? -1.0 : 1.0) * std::sqrt(2.0 * h / (std::abs(kp0) * (1.0 + r0 * r0)));
  } else {
    k_start = *options.initial_k;
    if (!(std::abs(k_start) < 1.0)) throw BarrierDomainError("initial k must satisfy |k| < 1");
  }
  auto chi_of = [alpha](double r, double phi) { return phi - std::sqrt(1.0 + r * r) - alpha * std::log(r); };

  const double r_far = std::max(options.normalization_radius, nodes.back());
  std::vector<double> norm_nodes(41);
  for (std::size_t i = 0; i < norm_nodes.size(); ++i)
    norm_nodes[i] = r_far * std::pow(10.0, -1.0 + static_cast<double>(i) / 40.0);
  norm_nodes.back() = r_far;

  std::vector<double> times{r_start};
  for (double r : nodes)
    if (r > r_start) times.push_back(r);
  for (double r : norm_nodes)
    if (r > r_start) times.push_back(r);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  auto system = [&](const State& x, State& dxdt, double r) {
    const double q2 = 1.0 + r * r;
    const double d = x[0] / (r * r * r);
    const double k0 = r / std::sqrt(q2);
    const double omk2 = std::max(0.0, 1.0 / q2 - 2.0 * k0 * d - d * d);
    dxdt[0] = 3.0 * r * r * d + r * r * r * dd_dr(side, r, d, omk2, params);
    const double k = k0 + d;
    const double dphi = omk2 > 0.0 ? k / std::sqrt(omk2 * q2) : std::copysign(1e300, k);
    dxdt[1] = (dphi - k0) - alpha / r;
  };

  std::vector<double> obs_r, obs_y, obs_chi;
  obs_r.reserve(times.size());
  auto observer = [&](const State& x, double r) {
    obs_r.push_back(r);
    obs_y.push_back(x[0]);
    obs_chi.push_back(x[1]);
  };

  State x{r_start * r_start * r_start * (k_start - k_hyp(r_start)), chi_of(r_start, phi_start)};
  auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_times(stepper, system, x, times.begin(), times.end(), 1e-3 * r_start, observer);

  // Lookup of observed states.
  auto find = [&](double r) {
    const auto it = std::lower_bound(obs_r.begin(), obs_r.end(), r);
    return static_cast<std::size_t>(it - obs_r.begin());
  };

  for (std::size_t i = 0; i < obs_r.size(); ++i) {
    const double r = obs_r[i];
    const double d = obs_y[i] / (r * r * r);
    const double omk2 = 1.0 / (1.0 + r * r) - 2.0 * k_hyp(r) * d - d * d;
    if (!(omk2 > 0.0) || !std::isfinite(omk2))
      throw BarrierFailureError("barrier solution reached |k| = 1 beyond r0; increase r0");
  }

  std::vector<double> chi_far;
  for (double r : norm_nodes) chi_far.push_back(obs_chi[find(r)]);
  const double L = extrapolate_limit(norm_nodes, chi_far, 1.0).limit;

  BarrierIvpResult out;
  out.normalization = L;
  for (double r : nodes) {
    double k, phi_raw, dphi;
    if (r < r_start) {
      // Inside the series step (only possible for the singular start).
      k = start_value(side) + kp0 * (r - r0);
      phi_raw = (side == BarrierSide::upper ? -1.0 : 1.0) *
                std::sqrt(2.0 * std::max(0.0, r - r0) / (std::abs(kp0) * (1.0 + r0 * r0)));
      dphi = r == r0 ? std::copysign(std::numeric_limits<double>::infinity(), k)
                     : k / std::sqrt((1.0 - k * k) * (1.0 + r * r));
      out.r.push_back(r);
      out.k.push_back(k);
      out.phi.push_back(phi_raw - L);
      out.dphi.push_back(dphi);
      continue;
    }
    const std::size_t j = find(r);
    const double d = obs_y[j] / (r * r * r);
    const double q2 = 1.0 + r * r;
    const double omk2 = 1.0 / q2 - 2.0 * k_hyp(r) * d - d * d;
    k = k_hyp(r) + d;
    dphi = k / std::sqrt(omk2 * q2);
    out.r.push_back(r);
    out.k.push_back(k);
    out.phi.push_back(obs_chi[j] - L + std::sqrt(q2) + alpha * std::log(r));
    out.dphi.push_back(dphi);
  }
  return out;
}

std::vector<double> integrate_phi(const std::vector<double>& k, const RadialGrid& grid, double alpha) {
  const std::size_t n = grid.size();
  if (k.size() != n) throw std::invalid_argument("k samples do not match the grid");
  for (std::size_t i = 1; i < n; ++i)
    if (!(std::abs(k[i]) < 1.0)) throw BarrierFailureError("k reaches +-1 away from r0; phi' is not integrable");

  auto dchi = [&](std::size_t i) {
    const double r = grid[i];
    return k[i] / std::sqrt((1.0 - k[i] * k[i]) * (1.0 + r * r)) - r / std::sqrt(1.0 + r * r) - alpha / r;
  };
  std::vector<double> chi(n, 0.0);
  chi[0] = -std::sqrt(1.0 + grid[0] * grid[0]) - alpha * std::log(grid[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double h = grid[i] - grid[i - 1];
    if (i == 1 && std::abs(k[0]) >= 1.0) {
      const double s = (1.0 - k[1] * k[1]) / h;
      const double r0 = grid[0];
      const double jump = std::copysign(2.0 * std::sqrt(h / (s * (1.0 + r0 * r0))), k[1]);
      chi[1] = jump - std::sqrt(1.0 + grid[1] * grid[1]) - alpha * std::log(grid[1]);
    } else {
      chi[i] = chi[i - 1] + 0.5 * h * (dchi(i - 1) + dchi(i));
    }
  }

  double L = chi.back();
  const double r_hi = grid.back();
  std::vector<double> rr, cc;
  for (std::size_t i = 0; i < n; ++i)
    if (grid[i] >= r_hi / 10.0) {
      rr.push_back(grid[i]);
      cc.push_back(chi[i]);
    }
  if (rr.size() >= 3 && grid.front() <= r_hi / 10.0) L = extrapolate_limit(rr, cc, 1.0).limit;

  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i)
    phi[i] = chi[i] - L + std::sqrt(1.0 + grid[i] * grid[i]) + alpha * std::log(grid[i]);
  return phi;
}

HarmonicCoeffs psi_rhs(const WangDataSpec& spec, double alpha) {
  HarmonicCoeffs rhs = spec.m.sigma + spec.p.sigma.scaled(2.0);
  rhs.add(0, 0, -alpha * 2.0 * std::sqrt(std::numbers::pi));
  return rhs;
}

HarmonicCoeffs solve_psi(const WangDataSpec& spec) {
  return solve_sphere_poisson(psi_rhs(spec, 2.0 * energy_wang(spec)), 1e-10);
}

BarrierODEParams constants_from_data(const InitialData& data, const RadialGrid& tail, int sphere_degree) {
  if (!data.spec()) throw ValidationError("constants_from_data needs Wang data with a known spec");
  const WangDataSpec& spec = *data.spec();
  const int L = std::max({sphere_degree, spec.m.degree(), spec.p.degree()});
  const SphereGrid sphere(L);
  const HarmonicCoeffs psi = solve_psi(spec);

  double sup_trm = 0.0, sup_trp = 0.0, sup_dpsi2 = 0.0;
  for (std::size_t k = 0; k < sphere.size(); ++k) {
    const double th = sphere.theta_at(k), ph = sphere.phi_at(k);
    sup_trm = std::max(sup_trm, std::abs(2.0 * spec.m.sigma.evaluate(th, ph)));
    sup_trp = std::max(sup_trp, std::abs(2.0 * spec.p.sigma.evaluate(th, ph)));
    if (!psi.is_constant()) {
      const AngularJet j = psi.jet(th, ph);
      const double s = std::sin(th);
      sup_dpsi2 = std::max(sup_dpsi2, j.t * j.t + j.p * j.p / (s * s));
    }
  }
  double sup_crr = 0.0;
  for (double r : tail.nodes())
    for (std::size_t k = 0; k < sphere.size(); ++k) {
      const DeviationPoint d = data.deviation_at(r, sphere.theta_at(k), sphere.phi_at(k));
      sup_crr = std::max(sup_crr, std::pow(r, 5) * std::abs(d.eta[0][0]));
    }

  BarrierODEParams p;
  p.alpha = 2.0 * energy_wang(spec, L);
  p.C[0] = sup_trm / 2.0;
  p.C[1] = sup_trp;
  p.C[2] = 2.0 * sup_dpsi2;
  p.C[3] = 3.0 * sup_dpsi2;
  p.C[4] = 2.0 * sup_dpsi2 + sup_crr;
  // The r^-4 angular remainders enter the error of the radial reduction at
  // order r^-5 with weights 6 (metric) and 2 (second fundamental form); both
  // are approached from below as r grows.
  p.C[5] = sup_crr + 6.0 * std::abs(spec.remainders.g_angular) + 2.0 * std::abs(spec.remainders.k_angular);
  p.C[6] = psi.is_constant(1e-14) ? 0.0 : 1.0;
  p.C[7] = sup_dpsi2;
  return p;
}

double BarrierSolution::f_plus(std::size_t i, double theta, double phi) const {
  return phi_plus[i] + psi.evaluate(theta, phi);
}

double BarrierSolution::f_minus(std::size_t i, double theta, double phi) const {
  return phi_minus[i] + psi.evaluate(theta, phi);
}

BarrierSolution::Samples BarrierSolution::sample(const std::vector<double>& nodes) const {
  Samples s;
  s.phi_plus = solve_barrier_ivp(BarrierSide::upper, params, nodes, options).phi;
  s.phi_minus = solve_barrier_ivp(BarrierSide::lower, params, nodes, options).phi;
  return s;
}

BarrierSolution assemble_barriers(BarrierODEParams params, const WangDataSpec& spec, const BarrierGridSpec& grid,
                                  const BarrierIvpOptions& options, int max_retries) {
  params.validate();
  spec.validate();
  const double alpha = 2.0 * energy_wang(spec);
  if (std::abs(params.alpha - alpha) > 1e-9 * std::max(1.0, std::abs(alpha)))
    throw ValidationError("barrier alpha must equal 2E of the data");

  BarrierSolution sol;
  sol.psi = solve_psi(spec);
  sol.options = options;
  sol.options.normalization_radius = std::max(options.normalization_radius, grid.r_max);

  for (int attempt = 0;; ++attempt) {
    if (!(grid.r_max > 10.0 * params.r0)) throw ValidationError("barrier grid must extend a decade beyond r0");
    const RadialGrid rg = RadialGrid::logarithmic(params.r0, grid.r_max, grid.nodes);
    try {
      BarrierIvpResult res[2];
      parallel_for(2, [&](std::size_t s) {
        res[s] = solve_barrier_ivp(s == 0 ? BarrierSide::upper : BarrierSide::lower, params, rg.nodes(), sol.options);
      });
      sol.grid = rg;
      sol.k_plus = res[0].k;
      sol.phi_plus = res[0].phi;
      sol.k_minus = res[1].k;
      sol.phi_minus = res[1].phi;
      sol.retries = attempt;
      break;
    } catch (const BarrierFailureError&) {
      if (attempt >= max_retries) throw;
      params.r0 *= 2.0;
    }
  }
  sol.params = params;

  double worst = std::numeric_limits<double>::infinity();
  std::size_t worst_i = 0;
  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    const double gap = sol.phi_plus[i] - sol.phi_minus[i];
    const double tol = 1e-9 * std::max(1.0, std::abs(sol.phi_plus[i]));
    if (gap + tol < worst) {
      worst = gap + tol;
      worst_i = i;
    }
  }
  if (worst < 0.0)
    throw OrderingError("barrier ordering f_- <= f_+ violated", sol.grid[worst_i],
                        sol.phi_plus[worst_i] - sol.phi_minus[worst_i]);
  return sol;
}

BarrierAsymptotics fit_barrier_asymptotics(const BarrierSolution& barriers, double r_lo, double r_hi) {
  BarrierAsymptotics out;
  const auto fit_side = [&](const std::vector<double>& k, double& alpha, double& residual, double& exponent) {
    std::vector<double> one, inv, loginv, y, rr, dev;
    for (std::size_t i = 0; i < barriers.grid.size(); ++i) {
      const double r = barriers.grid[i];
      if (r < r_lo || r > r_hi) continue;
      const double d = k[i] - r / std::sqrt(1.0 + r * r);
      one.push_back(1.0);
      inv.push_back(1.0 / r);
      loginv.push_back(std::log(r) / r);
      y.push_back(r * r * r * d);
      rr.push_back(r);
      dev.push_back(d);
    }
    if (y.size() < 10) throw FitInputError("barrier tail holds fewer than ten nodes");
    alpha = least_squares({one, inv, loginv}, y, &residual)[0];
    const bool one_signed = std::all_of(dev.begin(), dev.end(), [](double v) { return v > 0.0; }) ||
                            std::all_of(dev.begin(), dev.end(), [](double v) { return v < 0.0; });
    exponent = one_signed ? fit_decay_tail(rr, dev).p : std::numeric_limits<double>::quiet_NaN();
  };
  fit_side(barriers.k_plus, out.alpha_plus, out.residual_plus, out.exponent_plus);
  fit_side(barriers.k_minus, out.alpha_minus, out.residual_minus, out.exponent_minus);
  return out;
}

}  // namespace jang
