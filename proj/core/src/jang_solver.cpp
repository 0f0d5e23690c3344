#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "jang/finite_difference.hpp"
#include "jang/fit.hpp"
#include "jang/jang.hpp"

namespace jang {

namespace {

struct Derivs {
  double J, dJ1, dJ2;  // operator value and its partials in f', f''
};

Derivs radial_operator_with_partials(const RadialSample& s, double f1, double f2) {
  const double b = 0.5 * s.da / s.a;
  const double c = s.dG / (s.a * s.G);
  const double D = s.a + f1 * f1;
  const double W = std::sqrt(D / s.a);
  const double N = (f2 - b * f1) / D + c * f1;
  Derivs d;
  d.J = N / W - s.Krr / D - 2.0 * s.P / s.G;
  d.dJ2 = 1.0 / (D * W);
  const double dN = -b / D - 2.0 * f1 * (f2 - b * f1) / (D * D) + c;
  d.dJ1 = dN / W - N * f1 / (s.a * W * W * W) + 2.0 * f1 * s.Krr / (D * D);
  return d;
}

struct Discretization {
  std::vector<double> x;
  std::vector<ThreePoint> stencil;  // interior nodes (index i-1)
  double neumann[3];
  std::vector<RadialSample> samples;
};

Discretization discretize(const InitialData& data, const RadialGrid& grid) {
  Discretization d;
  d.x = grid.nodes();
  const std::size_t n = d.x.size();
  const auto w = fornberg_weights(d.x[0], std::span<const double>(d.x.data(), 3), 1);
  for (int j = 0; j < 3; ++j) d.neumann[j] = w[1][j];
  d.stencil.reserve(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) d.stencil.push_back(three_point(d.x[i - 1], d.x[i], d.x[i + 1]));
  d.samples.reserve(n);
  for (double r : d.x) d.samples.push_back((*data.radial())(r));
  return d;
}

// Scaled residual (rows normalized by the f'' diagonal weight) and, optionally, the Jacobian.
struct System {
  std::vector<double> F;         // scaled
  std::vector<double> raw;       // unscaled interior residual (ends 0)
  Eigen::SparseMatrix<double> Jac;
};

// Row scales are computed when `scales` is empty and reused otherwise, so that
// the merit function of a line search is the one the Newton step linearizes.
System assemble(const Discretization& d, const std::vector<double>& f, double tau, double bv, bool jacobian,
                std::vector<double>& scales) {
  const std::size_t n = d.x.size();
  System s;
  s.F.assign(n, 0.0);
  s.raw.assign(n, 0.0);
  std::vector<Eigen::Triplet<double>> trip;
  if (jacobian) trip.reserve(3 * n + 3);
  const bool fresh = scales.empty();
  if (fresh) scales.assign(n, 1.0);

  const double nscale = 1.0 / std::max({std::abs(d.neumann[0]), std::abs(d.neumann[1]), std::abs(d.neumann[2])});
  s.F[0] = nscale * (d.neumann[0] * f[0] + d.neumann[1] * f[1] + d.neumann[2] * f[2]);
  if (jacobian)
    for (int j = 0; j < 3; ++j) trip.emplace_back(0, j, nscale * d.neumann[j]);

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const ThreePoint& w = d.stencil[i - 1];
    const double dm = f[i - 1] - f[i], dp = f[i + 1] - f[i];
    const double f1 = w.d1[0] * dm + w.d1[2] * dp;
    const double f2 = w.d2[0] * dm + w.d2[2] * dp;
    const Derivs op = radial_operator_with_partials(d.samples[i], f1, f2);
    const double value = op.J - tau * f[i];
    if (fresh) scales[i] = 1.0 / std::abs(op.dJ2 * w.d2[1]);
    const double scale = scales[i];
    s.raw[i] = value;
    s.F[i] = scale * value;
    if (jacobian) {
      for (int j = 0; j < 3; ++j) {
        double a = op.dJ1 * w.d1[j] + op.dJ2 * w.d2[j];
        if (j == 1) a -= tau;
        trip.emplace_back(static_cast<int>(i), static_cast<int>(i) - 1 + j, scale * a);
      }
    }
  }
  s.F[n - 1] = f[n - 1] - bv;
  if (jacobian) {
    trip.emplace_back(static_cast<int>(n - 1), static_cast<int>(n - 1), 1.0);
    s.Jac.resize(static_cast<int>(n), static_cast<int>(n));
    s.Jac.setFromTriplets(trip.begin(), trip.end());
  }
  return s;
}

double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Slab {
  std::vector<double> plus, minus;  // NaN below r0
  std::size_t first = 0;            // first node >= r0
};

Slab barrier_slab(const BarrierSolution& barriers, const RadialGrid& grid) {
  Slab s;
  const std::size_t n = grid.size();
  s.plus.assign(n, std::numeric_limits<double>::quiet_NaN());
  s.minus = s.plus;
  const double r0 = barriers.params.r0;
  s.first = grid.lower_index(r0 * (1.0 - 1e-14));
  if (s.first >= n) throw std::invalid_argument("solver grid lies entirely inside the barrier radius");
  std::vector<double> nodes(grid.nodes().begin() + static_cast<std::ptrdiff_t>(s.first), grid.nodes().end());
  nodes.front() = std::max(nodes.front(), r0);
  const auto smp = barriers.sample(nodes);
  for (std::size_t i = s.first; i < n; ++i) {
    s.plus[i] = smp.phi_plus[i - s.first];
    s.minus[i] = smp.phi_minus[i - s.first];
  }
  return s;
}

// Largest amount by which f leaves the slab; reports the radius.
double slab_violation(const Slab& s, const std::vector<double>& f, const std::vector<double>& x, double* where) {
  double worst = 0.0;
  for (std::size_t i = s.first; i < f.size(); ++i) {
    const double v = std::max({s.minus[i] - f[i], f[i] - s.plus[i], 0.0});
    if (v > worst) {
      worst = v;
      if (where) *where = x[i];
    }
  }
  return worst;
}

}  // namespace

JangSolution solve_regularized_bvp(const JangProblem& problem, const BarrierSolution& barriers,
                                   const JangSolveOptions& options) {
  if (!problem.data) throw std::invalid_argument("problem has no data");
  const InitialData& data = *problem.data;
  if (!data.radial()) throw std::invalid_argument("the regularized solver needs spherically symmetric data");
  const RadialGrid& grid = problem.grid;
  const std::size_t n = grid.size();
  if (n < 4) throw std::invalid_argument("solver grid needs at least four nodes");
  if (!(problem.tau > 0.0 && problem.tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
  if (grid.front() < barriers.params.r0 * (1.0 - 1e-12) && !data.regular_center())
    throw std::invalid_argument("r_inner must not lie below the barrier radius r0");
  const double R = grid.back();
  if (!(trapping_margin(data, R) > 0.0))
    throw ValidationError("the sphere r = R is not untrapped (H - |tr K| <= 0)");

  const Slab slab = barrier_slab(barriers, grid);
  const double bv = problem.boundary_value;
  {
    const double tol = 1e-12 * std::max(1.0, std::abs(bv));
    if (bv < slab.minus[n - 1] - tol || bv > slab.plus[n - 1] + tol)
      throw ValidationError("boundary value must lie between f_-(R) and f_+(R)");
  }

  const Discretization disc = discretize(data, grid);
  std::vector<double> f(n);
  const double mid0 = 0.5 * (slab.plus[slab.first] + slab.minus[slab.first]);
  auto midpoint = [&] {
    for (std::size_t i = 0; i < n; ++i) f[i] = i < slab.first ? mid0 : 0.5 * (slab.plus[i] + slab.minus[i]);
  };
  if (!options.initial_guess.empty()) {
    if (options.initial_guess.size() != n) throw std::invalid_argument("initial guess has the wrong size");
    f = options.initial_guess;
  } else if (options.guess == InitialGuess::shooting) {
    try {
      const RadialGraph shot = radial_jang_graph(data, grid.nodes(), grid.front());
      for (std::size_t i = 0; i < n; ++i) f[i] = shot.f[i] - shot.f[n - 1] + bv;
    } catch (const SolverError&) {
      midpoint();
    }
  } else {
    midpoint();
  }
  f[n - 1] = bv;

  JangSolution out;
  out.grid = grid;
  out.tau = problem.tau;
  out.boundary_value = bv;

  std::vector<double> scales;
  System sys = assemble(disc, f, problem.tau, bv, true, scales);
  double norm = l2(sys.F);
  out.newton_history.push_back(norm);
  bool converged = false;
  // Pseudo-transient continuation: the step solves (J - I/dt) s = F on the
  // interior rows; dt grows as the residual falls (switched evolution
  // relaxation), so the iteration ends as plain Newton.
  double dt = options.initial_pseudo_step;
  int rejections = 0;
  for (int it = 0; it < options.max_iterations; ++it) {
    Eigen::SparseMatrix<double> M = sys.Jac;
    const bool newton = !(dt < 1e14);
    if (!newton)
      for (std::size_t i = 1; i + 1 < n; ++i) M.coeffRef(static_cast<int>(i), static_cast<int>(i)) -= 1.0 / dt;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success) throw SolverError("singular Newton matrix", max_abs(sys.raw));
    const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(sys.F.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd step = lu.solve(rhs);

    std::vector<double> trial(n);
    for (std::size_t i = 0; i < n; ++i) trial[i] = f[i] - step[static_cast<Eigen::Index>(i)];
    double trap_r = 0.0;
    const double viol = slab_violation(slab, trial, disc.x, &trap_r);
    const double trap_limit = options.trap_abort * std::max(1.0, max_abs(trial));
    System next = assemble(disc, trial, problem.tau, bv, false, scales);
    const double nn = l2(next.F);
    if (viol > trap_limit || !std::isfinite(nn) || nn > 2.0 * norm) {
      if (++rejections > 40) {
        if (viol > trap_limit)
          throw TrappingError("Newton iterate leaves the barrier slab near r = " + std::to_string(trap_r), trap_r,
                              viol);
        if (max_abs(sys.raw) <= options.tolerance) {
          converged = true;
          break;
        }
        throw SolverError("Newton step rejected repeatedly", max_abs(sys.raw));
      }
      dt = std::min(dt, 1e14) * 0.25;
      continue;
    }
    if (nn > 0.5 * norm && max_abs(sys.raw) <= options.tolerance) {
      converged = true;  // roundoff floor: keep the current iterate
      break;
    }
    f = trial;
    out.newton_iterations = it + 1;
    const double step_norm = step.cwiseAbs().maxCoeff();
    scales.clear();
    sys = assemble(disc, f, problem.tau, bv, true, scales);
    const double old = norm;
    norm = l2(sys.F);
    out.newton_history.push_back(norm);
    dt = std::min(1e15, dt * old / std::max(norm, 1e-300));
    if (newton && (step_norm <= 1e-13 * (1.0 + max_abs(f)) || norm <= 1e-15 * (1.0 + max_abs(f)))) {
      converged = true;
      break;
    }
  }
  out.residual = sys.raw;
  out.residual_norm = max_abs(sys.raw);
  if (!converged || out.residual_norm > options.tolerance)
    throw SolverError("Newton did not converge (residual " + std::to_string(out.residual_norm) + ")",
                      out.residual_norm);

  out.f = f;
  out.df = fd_derivative(disc.x, f, 1, 3);
  out.df[0] = 0.0;
  out.f_plus = slab.plus;
  out.f_minus = slab.minus;

  double trap_r = 0.0;
  out.trap_violation = slab_violation(slab, f, disc.x, &trap_r);
  if (out.trap_violation > options.trap_abort * std::max(1.0, max_abs(f)))
    throw TrappingError("solution leaves the barrier slab near r = " + std::to_string(trap_r), trap_r,
                        out.trap_violation);
  out.trapped = out.trap_violation <= options.trap_rel_tol * std::max(1.0, max_abs(f));

  double sup_trK = 0.0;
  for (const auto& s : disc.samples) sup_trK = std::max(sup_trK, std::abs(s.Krr / s.a + 2.0 * s.P / s.G));
  out.tau_max_f = problem.tau * max_abs(f);
  out.apriori_bound = std::max(sup_trK, problem.tau * std::abs(bv));
  out.apriori_ok = out.tau_max_f <= out.apriori_bound + 1e-8;
  return out;
}

std::vector<ScheduleStep> default_schedule(double R0, double tau0, int steps) {
  std::vector<ScheduleStep> s;
  for (int k = 0; k < steps; ++k) s.push_back({R0 * std::pow(2.0, 0.5 * k), tau0 * std::pow(2.0, -k)});
  return s;
}

GeometricLimitReport geometric_limit(const InitialData& data, const BarrierSolution& barriers,
                                     const std::vector<ScheduleStep>& schedule, const GeometricLimitOptions& options) {
  if (schedule.empty()) throw std::invalid_argument("empty schedule");
  for (std::size_t k = 1; k < schedule.size(); ++k)
    if (schedule[k].R < schedule[k - 1].R || schedule[k].tau > schedule[k - 1].tau)
      throw std::invalid_argument("schedule needs non-decreasing R and non-increasing tau");

  const double r_in = options.r_inner > 0.0 ? options.r_inner : (data.regular_center() ? 1e-2 : barriers.params.r0);
  const double h = options.log_step > 0.0 ? options.log_step : std::log(schedule.front().R / r_in) / 399.0;

  GeometricLimitReport rep;
  rep.schedule = schedule;
  std::vector<double> prev;
  for (const auto& step : schedule) {
    const auto n = static_cast<std::size_t>(std::llround(std::log(step.R / r_in) / h)) + 1;
    std::vector<double> nodes(n);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = r_in * std::exp(h * static_cast<double>(i));
    const RadialGrid grid(nodes, Spacing::logarithmic);

    const auto ends = barriers.sample({grid.back()});
    JangProblem prob{&data, grid, step.tau, 0.5 * (ends.phi_plus[0] + ends.phi_minus[0])};
    JangSolveOptions so = options.solve;
    if (!prev.empty() && so.initial_guess.empty()) {
      // Continue from the previous iterate on the shared nodes; extend it by the barrier midpoint beyond.
      const Slab slab = barrier_slab(barriers, grid);
      so.initial_guess.resize(n);
      const std::size_t m = std::min(prev.size(), n);
      for (std::size_t i = 0; i < m; ++i) so.initial_guess[i] = prev[i];
      for (std::size_t i = m; i < n; ++i) {
        const double mid = 0.5 * (slab.plus[i] + slab.minus[i]);
        const double mid_last = 0.5 * (slab.plus[m - 1] + slab.minus[m - 1]);
        so.initial_guess[i] = prev[m - 1] + (mid - mid_last);
      }
    }
    rep.solves.push_back(solve_regularized_bvp(prob, barriers, so));
    prev = rep.solves.back().f;
  }

  const auto [lo, hi] = rep.solves.front().grid.index_range(options.inner_lo, options.inner_hi);
  for (std::size_t i = lo; i < hi; ++i) rep.inner_r.push_back(rep.solves.front().grid[i]);
  for (std::size_t k = 1; k < rep.solves.size(); ++k) {
    double sup = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sup = std::max(sup, std::abs(rep.solves[k].f[i] - rep.solves[k - 1].f[i]));
    rep.sup_diff.push_back(sup);
  }
  for (std::size_t k = 1; k < rep.sup_diff.size(); ++k) {
    rep.ratios.push_back(rep.sup_diff[k - 1] / rep.sup_diff[k]);
    if (!(rep.sup_diff[k] < rep.sup_diff[k - 1])) {
      rep.cauchy = false;
      rep.message = "sup-differences stop decreasing at step " + std::to_string(k + 1);
    }
  }
  if (rep.cauchy) rep.message = "sup-differences decrease monotonically";

  // Tail of the final iterate: f - sqrt(1+r^2) = C + beta ln r + c/r over [R/20, R/2].
  const JangSolution& last = rep.solves.back();
  const auto [a, b] = last.grid.index_range(last.grid.back() / 20.0, last.grid.back() / 2.0);
  std::vector<double> rr, y, rem;
  for (std::size_t i = a; i < b; ++i) {
    const double r = last.grid[i];
    rr.push_back(r);
    y.push_back(last.f[i] - std::sqrt(1.0 + r * r));
    rem.push_back(y.back() - barriers.params.alpha * std::log(r));
  }
  if (rr.size() >= 4) {
    std::vector<std::vector<double>> cols(3, std::vector<double>(rr.size()));
    for (std::size_t i = 0; i < rr.size(); ++i) {
      cols[0][i] = 1.0;
      cols[1][i] = std::log(rr[i]);
      cols[2][i] = 1.0 / rr[i];
    }
    rep.log_coefficient = least_squares(cols, y)[1];
    const Extrapolation ex = extrapolate_free_rate(rr, rem);
    rep.remainder_exponent = ex.rate;
    rep.remainder_constant = ex.c;
  }
  return rep;
}

}  // namespace jang
