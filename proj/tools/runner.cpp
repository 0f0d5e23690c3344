#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fmt/format.h>

#include "jang/parallel.hpp"

#ifndef JANG_VERSION
#define JANG_VERSION "unknown"
#endif

namespace jang::cli {

namespace fs = std::filesystem;

namespace {

std::string g17(double x) { return fmt::format("{:.17g}", x); }

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json extrapolation_json(const Extrapolation& e) {
  return {{"limit", finite_or_null(e.limit)},
          {"c", finite_or_null(e.c)},
          {"rate", finite_or_null(e.rate)},
          {"residual", finite_or_null(e.residual)},
          {"converged", e.converged}};
}

std::vector<double> log_nodes(double lo, double hi, std::size_t n) { return RadialGrid::logarithmic(lo, hi, n).nodes(); }

// sup |a - b - C| over the samples with the optimal constant C (the midrange of a - b).
double sup_modulo_constant(const std::vector<double>& a, const std::vector<double>& b) {
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < a.size(); ++i) {
    lo = std::min(lo, a[i] - b[i]);
    hi = std::max(hi, a[i] - b[i]);
  }
  return a.empty() ? 0.0 : 0.5 * (hi - lo);
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"constraints", "barriers", "solve",      "geometry",
                                              "conformal",   "pipeline", "convergence"};
  return names;
}

Runner::Runner(PipelineConfig cfg, RunOptions options)
    : cfg_(std::move(cfg)), options_(std::move(options)), family_(make_family(cfg_)) {
  out_ = options_.out_dir.value_or(cfg_.output_dir);
  if (options_.tolerance) cfg_.tolerance = *options_.tolerance;
  worker_limit().store(options_.jobs);
}

// ---- output -----------------------------------------------------------------------

void Runner::write_csv(const std::string& name, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
  std::ofstream out(fs::path(out_) / name);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << g17(row[i]);
    out << '\n';
  }
  artifacts_.push_back(name);
}

void Runner::write_json(const std::string& name, const json& doc) {
  std::ofstream(fs::path(out_) / name) << doc.dump(2) << '\n';
  artifacts_.push_back(name);
}

void Runner::write_text(const std::string& name, const std::string& text) {
  std::ofstream(fs::path(out_) / name) << text;
  artifacts_.push_back(name);
}

void Runner::write_manifest(const std::string& subcommand, const std::string& status, const std::string& error) {
  json m;
  m["tool"] = "jang";
  m["subcommand"] = subcommand;
  m["status"] = status;
  if (!error.empty()) m["error"] = error;
  m["family"] = cfg_.family;
  m["config"] = cfg_.source;
  m["config_hash"] = fmt::format("{:016x}", config_hash(cfg_.source));
  m["seed"] = options_.seed;
  m["jobs"] = options_.jobs;
  m["tolerance"] = cfg_.tolerance;
  m["versions"] = {{"jang", JANG_VERSION},
                   {"compiler", __VERSION__},
                   {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
                   {"boost", BOOST_LIB_VERSION}};
  m["artifacts"] = artifacts_;
  m["summary"] = summary_;
  std::ofstream(fs::path(out_) / "manifest.json") << m.dump(2) << '\n';
}

// ---- run --------------------------------------------------------------------------

int Runner::run(const std::string& subcommand) {
  const auto& names = subcommands();
  if (std::find(names.begin(), names.end(), subcommand) == names.end())
    throw ConfigError("unknown subcommand '" + subcommand + "'");
  fs::create_directories(out_);
  std::string current = subcommand;
  try {
    if (subcommand == "constraints") {
      stage_constraints();
    } else if (subcommand == "barriers") {
      current = "barriers";
      stage_barriers();
    } else if (subcommand == "solve") {
      stage_solve();
    } else if (subcommand == "geometry") {
      stage_solve();
      current = "geometry";
      stage_geometry();
    } else if (subcommand == "conformal") {
      stage_solve();
      current = "geometry";
      stage_geometry();
      current = "conformal";
      stage_conformal();
    } else if (subcommand == "pipeline") {
      if (cfg_.stages.constraints) {
        current = "constraints";
        stage_constraints();
      }
      if (cfg_.stages.barriers) {
        current = "barriers";
        stage_barriers();
      }
      if (cfg_.stages.solve) {
        current = "solve";
        stage_solve();
      }
      if (cfg_.stages.geometry) {
        current = "geometry";
        stage_geometry();
      }
      if (cfg_.stages.conformal) {
        current = "conformal";
        stage_conformal();
      }
    } else {
      stage_convergence();
    }
  } catch (const std::exception& e) {
    const std::string msg = current + " stage failed: " + e.what();
    write_manifest(subcommand, "failed", msg);
    throw;
  }
  write_manifest(subcommand, "ok", "");
  return 0;
}

// ---- constraints --------------------------------------------------------------------

void Runner::stage_constraints() {
  const InitialData& data = family_.data;
  const double lo = std::max(1.0, data.r_min());
  const double hi = std::min(cfg_.grid.R, 1e4);
  const RadialGrid radii = RadialGrid::logarithmic(lo, hi, 48);
  const SphereGrid sphere(cfg_.sphere_degree);
  const ConstraintReport rep = dec_report(data, radii, sphere);

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rep.radii.size(); ++i)
    for (std::size_t k = 0; k < rep.sphere_points; ++k) {
      const std::size_t j = i * rep.sphere_points + k;
      rows.push_back({rep.radii[i], sphere.theta_at(k), sphere.phi_at(k), rep.mu[j], rep.J_norm[j], rep.margin[j]});
    }
  write_csv("constraints.csv", {"r", "theta", "phi", "mu", "J_norm", "margin"}, rows);

  const MassVector mv = mass_vector(data, log_nodes(1e2, 1e4, 16), std::max(cfg_.sphere_degree, 16));
  rows.clear();
  for (const MassRow& r : mv.rows) rows.push_back({r.R, r.E, r.P[0], r.P[1], r.P[2]});
  write_csv("mass.csv", {"R", "E", "P1", "P2", "P3"}, rows);

  json doc = {{"min_margin", rep.min_margin},
              {"min_location", {rep.min_r, rep.min_theta, rep.min_phi}},
              {"dec_violated", rep.violated},
              {"energy_formula", family_.energy},
              {"energy_extrapolated", mv.E},
              {"momentum", {mv.P[0], mv.P[1], mv.P[2]}},
              {"fit", extrapolation_json(mv.fit)},
              {"free_fit", extrapolation_json(mv.free_fit)},
              {"warning", mv.warning}};
  write_json("constraints.json", doc);
  summary_["constraints"] = {{"min_margin", rep.min_margin}, {"energy", mv.E}};
}

// ---- barriers -----------------------------------------------------------------------

void Runner::ensure_barriers() {
  if (barriers_ || !cfg_.stages.barriers) return;
  const InitialData& data = family_.data;
  if (!data.spec()) throw ConfigError("barriers need Wang data");
  const RadialGrid tail = RadialGrid::logarithmic(cfg_.barriers.tail_lo, cfg_.barriers.tail_hi, 60);
  BarrierODEParams params = constants_from_data(data, tail, std::max(cfg_.sphere_degree, 16));
  if (cfg_.barriers.C) params.C = *cfg_.barriers.C;
  if (cfg_.barriers.alpha) params.alpha = *cfg_.barriers.alpha;
  if (cfg_.barriers.r0) params.r0 = *cfg_.barriers.r0;
  barriers_ = assemble_barriers(params, *data.spec(), {cfg_.barriers.r_max, cfg_.barriers.nodes}, {},
                                cfg_.barriers.max_retries);
}

void Runner::stage_barriers() {
  ensure_barriers();
  const BarrierSolution& b = *barriers_;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < b.grid.size(); ++i)
    rows.push_back({b.grid[i], b.k_plus[i], b.k_minus[i], b.phi_plus[i], b.phi_minus[i]});
  write_csv("barriers.csv", {"r", "k_plus", "k_minus", "phi_plus", "phi_minus"}, rows);

  const BarrierAsymptotics fit = fit_barrier_asymptotics(b, cfg_.barriers.tail_lo, cfg_.barriers.tail_hi);
  const double alpha_fit = 0.5 * (fit.alpha_plus + fit.alpha_minus);
  const double expected = 2.0 * family_.energy;
  json doc = {{"C", b.params.C},
              {"alpha", b.params.alpha},
              {"r0", b.params.r0},
              {"retries", b.retries},
              {"energy", family_.energy},
              {"alpha_expected", expected},
              {"alpha_fit", alpha_fit},
              {"alpha_fit_plus", fit.alpha_plus},
              {"alpha_fit_minus", fit.alpha_minus},
              {"fit_residual_plus", fit.residual_plus},
              {"fit_residual_minus", fit.residual_minus},
              {"exponent_plus", finite_or_null(fit.exponent_plus)},
              {"exponent_minus", finite_or_null(fit.exponent_minus)},
              {"relative_error", expected != 0.0 ? json(std::abs(alpha_fit - expected) / expected) : json(nullptr)}};
  write_json("barriers.json", doc);
  summary_["barriers"] = {{"alpha_fit", alpha_fit}, {"r0", b.params.r0}};
}

// ---- solve --------------------------------------------------------------------------

double Runner::graph_start() const {
  if (family_.data.regular_center()) return cfg_.grid.r_inner > 0.0 ? cfg_.grid.r_inner : 1e-2;
  if (!barriers_) throw ConfigError("data without a regular center needs the barriers stage");
  return std::max(cfg_.grid.r_inner, barriers_->params.r0);
}

RadialGrid Runner::graph_grid(std::size_t nodes) const {
  const double lo = graph_start();
  if (cfg_.grid.mode == Spacing::uniform) return RadialGrid::uniform(lo, cfg_.grid.R, nodes);
  return RadialGrid::logarithmic(lo, cfg_.grid.R, nodes);
}

void Runner::ensure_graph() {
  if (graph_) return;
  ensure_barriers();
  const RadialGrid grid = graph_grid(cfg_.grid.nodes);
  graph_ = radial_jang_graph(family_.data, grid.nodes(), grid.front());
}

void Runner::stage_solve() {
  if (!family_.data.spherically_symmetric())
    throw ConfigError("the solve stage needs spherically symmetric data");
  ensure_graph();
  const RadialGraph& g = *graph_;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < g.r.size(); ++i) rows.push_back({g.r[i], g.f[i], g.df[i], g.ddf[i], g.v[i]});
  write_csv("graph.csv", {"r", "f", "df", "ddf", "v"}, rows);

  // f - sqrt(1 + r^2) = C + beta ln r + c/r over the upper part of the domain.
  const double R = g.r.back();
  std::vector<double> one, lg, inv, y;
  for (std::size_t i = 0; i < g.r.size(); ++i)
    if (g.r[i] >= R / 1000.0 && g.r[i] <= R / 10.0) {
      one.push_back(1.0);
      lg.push_back(std::log(g.r[i]));
      inv.push_back(1.0 / g.r[i]);
      y.push_back(g.f[i] - std::sqrt(1.0 + g.r[i] * g.r[i]));
    }
  json doc;
  if (y.size() >= 3) {
    const std::vector<double> b = least_squares({one, lg, inv}, y);
    doc["graph_log_coefficient"] = b[1];
  }
  doc["graph_start"] = g.r_start;
  doc["alpha_expected"] = 2.0 * family_.energy;

  if (barriers_) {
    const std::vector<ScheduleStep> schedule =
        cfg_.schedule.explicit_steps.empty() ? default_schedule(cfg_.schedule.R0, cfg_.schedule.tau0, cfg_.schedule.steps)
                                             : cfg_.schedule.explicit_steps;
    GeometricLimitOptions opt;
    opt.r_inner = cfg_.grid.r_inner;
    opt.inner_lo = cfg_.schedule.inner_lo;
    opt.inner_hi = cfg_.schedule.inner_hi;
    opt.solve.tolerance = cfg_.tolerance;
    const GeometricLimitReport rep = geometric_limit(family_.data, *barriers_, schedule, opt);

    rows.clear();
    for (std::size_t n = 0; n < rep.solves.size(); ++n) {
      const JangSolution& s = rep.solves[n];
      rows.push_back({static_cast<double>(n), s.grid.back(), s.tau, static_cast<double>(s.newton_iterations),
                      s.residual_norm, s.trapped ? 1.0 : 0.0, s.trap_violation, s.tau_max_f, s.apriori_bound,
                      n == 0 ? NAN : rep.sup_diff[n - 1]});
    }
    write_csv("schedule.csv",
              {"step", "R", "tau", "iterations", "residual_norm", "trapped", "trap_violation", "tau_max_f",
               "apriori_bound", "sup_diff"},
              rows);

    const JangSolution& last = rep.solves.back();
    rows.clear();
    for (std::size_t i = 0; i < last.grid.size(); ++i)
      rows.push_back({last.grid[i], last.f[i], last.df[i], last.residual[i], last.f_plus[i], last.f_minus[i]});
    write_csv("solution.csv", {"r", "f", "df", "residual", "f_plus", "f_minus"}, rows);

    // Final iterate against the tau = 0 graph on the inner region.
    std::vector<double> inner_r, fa;
    for (std::size_t i = 0; i < last.grid.size(); ++i)
      if (last.grid[i] >= cfg_.schedule.inner_lo && last.grid[i] <= cfg_.schedule.inner_hi) {
        inner_r.push_back(last.grid[i]);
        fa.push_back(last.f[i]);
      }
    if (inner_r.size() >= 2) {
      const RadialGraph ref = radial_jang_graph(family_.data, inner_r, g.r_start);
      doc["final_vs_graph"] = sup_modulo_constant(fa, ref.f);
    }
    doc["schedule"] = json::array();
    for (const auto& s : rep.schedule) doc["schedule"].push_back({{"R", s.R}, {"tau", s.tau}});
    doc["sup_diff"] = rep.sup_diff;
    doc["ratios"] = rep.ratios;
    doc["cauchy"] = rep.cauchy;
    doc["message"] = rep.message;
    doc["log_coefficient"] = rep.log_coefficient;
    doc["remainder_exponent"] = rep.remainder_exponent;
    bool trapped = true, apriori = true;
    for (const auto& s : rep.solves) {
      trapped = trapped && s.trapped;
      apriori = apriori && s.apriori_ok;
    }
    doc["all_trapped"] = trapped;
    doc["all_apriori"] = apriori;
  }
  write_json("solve.json", doc);
  summary_["solve"] = doc.contains("graph_log_coefficient") ? json{{"log_coefficient", doc["graph_log_coefficient"]}}
                                                            : json::object();
}

// ---- geometry -----------------------------------------------------------------------

void Runner::ensure_metric() {
  if (metric_) return;
  ensure_graph();
  metric_.emplace(family_.data, graph_from_radial(*graph_));
}

void Runner::stage_geometry() {
  ensure_metric();
  const GraphMetric& m = *metric_;
  const double adm_hi = cfg_.geometry.adm_hi > 0.0 ? cfg_.geometry.adm_hi : cfg_.grid.R / 2.0;
  const GraphGeometryReport rep = geometry_report(m, SphereGrid(cfg_.sphere_degree), cfg_.geometry.r_lo,
                                                  cfg_.geometry.r_hi, cfg_.geometry.adm_lo, adm_hi);
  std::vector<std::vector<double>> rows;
  for (const GeometrySample& s : rep.samples)
    rows.push_back({s.r, s.theta, s.phi, s.H, s.A_norm2, s.A_minus_K_norm2, s.q[0], s.q[1], s.q[2], s.div_q, s.scal_sy,
                    s.scal_direct, s.scal_exact});
  write_csv("geometry.csv",
            {"r", "theta", "phi", "H", "A_norm2", "A_minus_K_norm2", "q_r", "q_theta", "q_phi", "div_q", "scal_sy",
             "scal_direct", "scal_exact"},
            rows);
  rows.clear();
  for (const AdmRow& row : rep.adm.rows) rows.push_back({row.R, row.mass, rep.adm.mass});
  write_csv("adm.csv", {"R", "mass_integral", "extrapolated"}, rows);

  json doc = {{"adm_mass", rep.adm.mass},
              {"alpha_expected", 2.0 * family_.energy},
              {"fit", extrapolation_json(rep.adm.fit)},
              {"free_fit", extrapolation_json(rep.adm.free_fit)},
              {"warning", rep.adm.warning},
              {"max_route_discrepancy", rep.max_route_discrepancy},
              {"angular_step", rep.angular_step}};
  write_json("geometry.json", doc);
  summary_["geometry"] = {{"adm_mass", rep.adm.mass}, {"max_route_discrepancy", rep.max_route_discrepancy}};
}

// ---- conformal ------------------------------------------------------------------------

std::string format_mass_chain(const MassChain& c) {
  std::string s = fmt::format("{:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}\n", "E", "alpha", "M_bar", "A",
                              "M_conf", "margin_PMT", "margin_A");
  s += fmt::format("{:>12.6f} {:>12.6f} {:>12.6f} {:>12.6f} {:>12.6f} {:>12.6f} {:>12.6f}\n", c.E, c.alpha, c.M_bar,
                   c.A, c.M_conf, c.margin_pmt, c.margin_A);
  s += fmt::format("M_conf (ADM quadrature) {:.6f}; E >= M_conf: {}; A <= -alpha/4: {}; M_conf >= 0: {}\n",
                   c.M_conf_adm, c.pmt_ok ? "yes" : "no", c.A_ok ? "yes" : "no", c.nonnegative ? "yes" : "no");
  return s;
}

void Runner::stage_conformal() {
  ensure_metric();
  const GraphMetric& m = *metric_;
  const std::vector<double> scal = scalar_curvature_profile(m);
  const double R = cfg_.conformal.outer_radius > 0.0 ? cfg_.conformal.outer_radius : cfg_.grid.R;
  ConformalOptions opt;
  opt.tail_fraction = cfg_.conformal.tail_fraction;
  const ConformalSolve sol = solve_conformal_factor(m, scal, R, opt);

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < sol.u.size(); ++i) rows.push_back({sol.grid[i], sol.u[i], sol.du[i], scal[i]});
  write_csv("conformal.csv", {"r", "u", "du", "scal"}, rows);

  const double lo = cfg_.conformal.adm_lo > 0.0 ? cfg_.conformal.adm_lo : sol.boundary_radius / 100.0;
  const double hi = cfg_.conformal.adm_hi > 0.0 ? cfg_.conformal.adm_hi : sol.boundary_radius / 2.0;
  const ConformalMass cm = conformal_mass(m, sol, lo, hi);
  const MassChain chain = mass_chain_report(family_.energy, sol, cm);
  std::string warning = sol.warning;
  if (!family_.data.regular_center()) {
    if (!warning.empty()) warning += "; ";
    warning += "inner boundary r = " + std::to_string(sol.grid.front()) +
               " is not a smooth center, so u' = 0 there is only a proxy and the chain is not a test of the inequalities";
  }

  json doc = {{"E", chain.E},
              {"alpha", chain.alpha},
              {"M_bar", chain.M_bar},
              {"A", chain.A},
              {"M_conf", chain.M_conf},
              {"M_conf_adm", chain.M_conf_adm},
              {"margin_PMT", chain.margin_pmt},
              {"margin_A", chain.margin_A},
              {"pmt_ok", chain.pmt_ok},
              {"A_ok", chain.A_ok},
              {"nonnegative", chain.nonnegative},
              {"route_discrepancy", cm.discrepancy},
              {"u_bound", sol.bound},
              {"boundary_radius", sol.boundary_radius},
              {"scal_decay_rate", finite_or_null(sol.scal_decay_rate)},
              {"u_decay_rate", finite_or_null(sol.u_decay_rate)},
              {"warning", warning}};
  write_json("mass_chain.json", doc);
  write_text("mass_chain.txt", format_mass_chain(chain) + (warning.empty() ? "" : "warning: " + warning + "\n"));
  summary_["conformal"] = {{"A", chain.A}, {"M_conf", chain.M_conf}, {"M_conf_adm", chain.M_conf_adm}};
}

// ---- convergence -----------------------------------------------------------------------

void Runner::stage_convergence() {
  if (!family_.data.spherically_symmetric())
    throw ConfigError("the convergence study needs spherically symmetric data");
  ensure_barriers();
  std::vector<std::vector<double>> rows;  // study, level, parameter, value, order
  json doc;

  // Curvature routes under grid refinement (the angular step follows the grid).
  std::vector<double> disc;
  std::size_t nodes = cfg_.grid.nodes;
  for (int level = 0; level < 3; ++level) {
    const RadialGrid grid = graph_grid(nodes);
    const GraphMetric m(family_.data, graph_from_radial(radial_jang_graph(family_.data, grid.nodes(), grid.front())));
    const double h = std::log(grid[1] / grid[0]);
    const auto [first, last] = grid.index_range(cfg_.geometry.r_lo, cfg_.geometry.r_hi);
    std::vector<double> err(last - first);
    parallel_for(err.size(), [&](std::size_t a) {
      const std::size_t i = std::clamp<std::size_t>(first + a, 1, grid.size() - 2);
      err[a] = std::abs(scalar_curvature_sy(m, i, 1.1, 0.3, h).total - scalar_curvature_direct(m, i, 1.1, 0.3, h));
    });
    disc.push_back(err.empty() ? 0.0 : *std::max_element(err.begin(), err.end()));
    const double order = level == 0 ? NAN : std::log2(disc[level - 1] / disc[level]);
    rows.push_back({0.0, static_cast<double>(level), h, disc.back(), order});
    nodes = 2 * nodes - 1;
  }
  doc["curvature_routes"] = {{"discrepancy", disc},
                             {"order", std::log2(disc[disc.size() - 2] / disc.back())}};

  // Conformal coefficient A under doubling of the outer radius.
  ensure_metric();
  const std::vector<double> scal = scalar_curvature_profile(*metric_);
  std::vector<double> As;
  for (int level = 0; level < 3; ++level) {
    const double R = cfg_.grid.R / std::pow(2.0, 2 - level);
    const ConformalSolve sol = solve_conformal_factor(*metric_, scal, R);
    As.push_back(sol.A);
    double order = NAN;
    if (level == 2 && As[1] != As[0] && As[2] != As[1]) order = std::log2(std::abs(As[1] - As[0]) / std::abs(As[2] - As[1]));
    rows.push_back({1.0, static_cast<double>(level), sol.boundary_radius, sol.A, order});
  }
  doc["conformal_A"] = As;

  // Regularization schedule: consecutive sup-differences on the inner region.
  if (barriers_) {
    const std::vector<ScheduleStep> schedule =
        cfg_.schedule.explicit_steps.empty() ? default_schedule(cfg_.schedule.R0, cfg_.schedule.tau0, cfg_.schedule.steps)
                                             : cfg_.schedule.explicit_steps;
    GeometricLimitOptions opt;
    opt.r_inner = cfg_.grid.r_inner;
    opt.inner_lo = cfg_.schedule.inner_lo;
    opt.inner_hi = cfg_.schedule.inner_hi;
    opt.solve.tolerance = cfg_.tolerance;
    const GeometricLimitReport rep = geometric_limit(family_.data, *barriers_, schedule, opt);
    for (std::size_t n = 0; n < rep.sup_diff.size(); ++n) {
      const double order = n == 0 ? NAN : std::log2(rep.sup_diff[n - 1] / rep.sup_diff[n]);
      rows.push_back({2.0, static_cast<double>(n + 1), rep.schedule[n + 1].tau, rep.sup_diff[n], order});
    }
    doc["schedule_sup_diff"] = rep.sup_diff;
    doc["schedule_cauchy"] = rep.cauchy;
  }
  write_csv("convergence.csv", {"study", "level", "parameter", "value", "order"}, rows);
  doc["studies"] = {"0: curvature routes vs log step", "1: conformal A vs outer radius", "2: schedule vs tau"};
  write_json("convergence.json", doc);
  summary_["convergence"] = {{"curvature_order", doc["curvature_routes"]["order"]}};
}

}  // namespace jang::cli
