#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "jang/finite_difference.hpp"
#include "jang/fit.hpp"
#include "jang/jang.hpp"
#include "jang/parallel.hpp"

namespace jang {

namespace {

Mat3 graph_metric_inverse(const Mat3& g, const Vec3& df) {
  Mat3 gbar = g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gbar[i][j] += df[i] * df[j];
  return inverse_spd(gbar);
}

double gradient_factor(const Mat3& ginv, const Vec3& df) { return std::sqrt(1.0 + dot(ginv, df, df)); }

const RadialProfile& require_radial(const InitialData& data) {
  if (!data.radial()) throw std::invalid_argument("radial Jang evaluation needs spherically symmetric data");
  return *data.radial();
}

}  // namespace

double mean_curvature_of_graph(const DataPoint& p, const Vec3& df, const Mat3& ddf) {
  const Mat3 ginv = inverse_spd(p.g);
  const Christoffel gamma = christoffel_symbols(p.g, ginv, p.dg);
  Mat3 hess = ddf;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) hess[i][j] -= gamma[k][i][j] * df[k];
  return trace_with(graph_metric_inverse(p.g, df), hess) / gradient_factor(ginv, df);
}

double trace_K_of_graph(const DataPoint& p, const Vec3& df) {
  return trace_with(graph_metric_inverse(p.g, df), p.K);
}

double jang_operator(const DataPoint& p, const Vec3& df, const Mat3& ddf) {
  return mean_curvature_of_graph(p, df, ddf) - trace_K_of_graph(p, df);
}

double radial_jang_operator(const RadialSample& s, double /*r*/, double df, double ddf) {
  const double denom = s.a + df * df;
  const double W = std::sqrt(denom / s.a);
  const double H = ((ddf - 0.5 * s.da / s.a * df) / denom + s.dG * df / (s.a * s.G)) / W;
  const double trK = s.Krr / denom + 2.0 * s.P / s.G;
  return H - trK;
}

std::vector<double> jang_residual(const InitialData& data, const RadialGrid& grid, const std::vector<double>& f,
                                  double tau) {
  const auto& profile = require_radial(data);
  if (f.size() != grid.size()) throw std::invalid_argument("f must be sampled on the grid");
  if (grid.size() < 3) throw std::invalid_argument("need at least three nodes");
  std::vector<double> out(grid.size() - 2);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const ThreePoint w = three_point(grid[i - 1], grid[i], grid[i + 1]);
    // Difference form: the weights sum to zero, and f -> f + c leaves the
    // differences (hence the tau = 0 residual) unchanged bit for bit.
    const double dm = f[i - 1] - f[i], dp = f[i + 1] - f[i];
    const double f1 = w.d1[0] * dm + w.d1[2] * dp;
    const double f2 = w.d2[0] * dm + w.d2[2] * dp;
    out[i - 1] = radial_jang_operator(profile(grid[i]), grid[i], f1, f2) - tau * f[i];
  }
  return out;
}

std::vector<double> jang_residual_ansatz(const InitialData& data, const ProfileFn& phi, const HarmonicCoeffs& psi,
                                         const std::vector<double>& radii, const SphereGrid& sphere, double tau) {
  const std::size_t ns = sphere.size();
  std::vector<double> out(radii.size() * ns);
  parallel_for(radii.size(), [&](std::size_t i) {
    const double r = radii[i];
    const auto ph = phi(r);
    for (std::size_t k = 0; k < ns; ++k) {
      const double th = sphere.theta_at(k), ph_ang = sphere.phi_at(k);
      const AngularJet j = psi.jet(th, ph_ang);
      const DataPoint p = data.at(r, th, ph_ang);
      const Vec3 df{ph[1], j.t, j.p};
      const Mat3 ddf{{{ph[2], 0.0, 0.0}, {0.0, j.tt, j.tp}, {0.0, j.tp, j.pp}}};
      out[i * ns + k] = jang_operator(p, df, ddf) - tau * (ph[0] + j.v);
    }
  });
  return out;
}

double kform_identity_check(const ProfileFn& phi, const RadialGrid& grid) {
  const InitialData hyp = make_hyperboloid_data();
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = phi(grid[i])[0];
  const std::vector<double> res = jang_residual(hyp, grid, f, 0.0);

  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double r = grid[i];
    const auto p = phi(r);
    const double q = std::sqrt(1.0 + r * r);
    const double u = p[1] * q;
    const double du = p[2] * q + p[1] * r / q;
    const double k = u / std::sqrt(1.0 + u * u);
    const double dk = du / std::pow(1.0 + u * u, 1.5);
    const double k0 = r / q;
    const double kform = q * (dk + (2.0 / r) * (k - k0) - (1.0 - k * k) / q);
    worst = std::max(worst, std::abs(res[i - 1] - kform));
  }
  return worst;
}

AnsatzFit ansatz_leading_coefficient(const InitialData& data, const ProfileFn& phi, const HarmonicCoeffs& psi,
                                     const std::vector<double>& radii, const SphereGrid& sphere) {
  if (radii.size() < 4) throw FitInputError("ansatz fit needs at least four radii");
  const std::vector<double> J = jang_residual_ansatz(data, phi, psi, radii, sphere, 0.0);
  const std::size_t ns = sphere.size();
  const int L = sphere.degree() / 2;

  std::vector<HarmonicCoeffs> per_radius;
  per_radius.reserve(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    std::vector<double> scaled(ns);
    const double r3 = radii[i] * radii[i] * radii[i];
    for (std::size_t k = 0; k < ns; ++k) scaled[k] = r3 * J[i * ns + k];
    per_radius.push_back(HarmonicCoeffs::analyze(sphere, scaled, L));
  }

  std::vector<std::vector<double>> cols(3, std::vector<double>(radii.size()));
  for (std::size_t i = 0; i < radii.size(); ++i) {
    cols[0][i] = 1.0;
    cols[1][i] = std::log(radii[i]);
    cols[2][i] = 1.0 / radii[i];
  }

  AnsatzFit out;
  HarmonicCoeffs constant(L), logpart(L);
  for (int l = 0; l <= L; ++l) {
    for (int m = -l; m <= l; ++m) {
      std::vector<double> y(radii.size());
      for (std::size_t i = 0; i < radii.size(); ++i) y[i] = per_radius[i].get(l, m);
      const auto beta = least_squares(cols, y);
      constant.set(l, m, beta[0]);
      logpart.set(l, m, beta[1]);
      out.modes.push_back({l, m, beta[0], beta[1]});
    }
  }

  auto signed_sup = [&](const HarmonicCoeffs& c, double& value, double& sup) {
    const std::vector<double> s = c.synthesize(sphere);
    std::size_t at = 0;
    for (std::size_t k = 1; k < s.size(); ++k)
      if (std::abs(s[k]) > std::abs(s[at])) at = k;
    value = s[at];
    sup = std::abs(s[at]);
  };
  signed_sup(constant, out.constant_part, out.constant_sup);
  signed_sup(logpart, out.log_part, out.log_sup);
  return out;
}

// ---- radial geometric solution --------------------------------------------

RadialGraph radial_jang_graph(const InitialData& data, const std::vector<double>& nodes, double r_start) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;
  const auto& profile = require_radial(data);
  if (!(r_start > 0.0)) throw std::invalid_argument("radial Jang graph needs r_start > 0");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] < r_start * (1.0 - 1e-14) || (i > 0 && !(nodes[i] > nodes[i - 1])))
      throw std::invalid_argument("nodes must increase and lie beyond r_start");

  auto k0_of = [](double r) { return r / std::sqrt(1.0 + r * r); };
  // y = (1+r^2)^{3/2} (v - k0) keeps the relative precision of the O(r^-3) deviation.
  auto scale_of = [](double r) { return std::pow(1.0 + r * r, 1.5); };

  // 1 - v^2 with v = k0 + d, free of cancellation where v -> 1.
  auto omv2_of = [&](double r, double d) {
    const double k0 = k0_of(r);
    return 1.0 / (1.0 + r * r) - 2.0 * k0 * d - d * d;
  };
  // v' - k0' as a function of (r, d), regrouped against the hyperbolic
  // identities so that no O(1/r) terms cancel. Also returns d/dd of it.
  auto dev_rhs = [&](double r, double d, double* d_dd = nullptr) {
    const double q2 = 1.0 + r * r;
    const double q = std::sqrt(q2);
    const double v = k0_of(r) + d;
    const double omv2 = std::max(omv2_of(r, d), std::numeric_limits<double>::min());
    const RadialSample s = profile(r).deviation_filled(r);
    const double sa = std::sqrt(s.a);
    const double t1 = s.Krr / sa * omv2 - 1.0 / (q2 * q);
    const double t2 = 2.0 * (s.a_dev / (sa + 1.0 / q) * s.P / s.G + (s.P_dev - s.G_dev) / (q * s.G));
    const double t3 = ((r * s.dG_dev - 2.0 * s.G_dev) * v + 2.0 * s.G * d) / (s.G * r);
    if (d_dd)
      *d_dd = -2.0 * s.Krr / sa * v - ((r * s.dG_dev - 2.0 * s.G_dev) + 2.0 * s.G) / (s.G * r);
    return t1 + t2 - t3;
  };

  auto system = [&](const State& x, State& dxdt, double r) {
    const double q2 = 1.0 + r * r;
    const double sc = scale_of(r);
    const double d = x[0] / sc;
    const double v = k0_of(r) + d;
    const double omv2 = std::max(omv2_of(r, d), std::numeric_limits<double>::min());
    dxdt[0] = 3.0 * r * std::sqrt(q2) * d + sc * dev_rhs(r, d);
    dxdt[1] = std::sqrt(profile(r).a) * v / std::sqrt(omv2) - k0_of(r);
  };

  double v_start = 0.0;
  if (data.regular_center()) {
    const RadialSample s = profile(r_start);
    v_start = std::sqrt(s.a) * (s.Krr / s.a + 2.0 * s.P / s.G) / 3.0 * r_start;
  }

  std::vector<double> times{r_start};
  for (double r : nodes)
    if (r > r_start) times.push_back(r);

  std::vector<double> obs_r, obs_y, obs_xi;
  auto observer = [&](const State& x, double r) {
    obs_r.push_back(r);
    obs_y.push_back(x[0]);
    obs_xi.push_back(x[1]);
  };
  State x{scale_of(r_start) * (v_start - k0_of(r_start)), 0.0};
  if (times.size() > 1) {
    auto stepper = odeint::make_dense_output(1e-14, 1e-12, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, system, x, times.begin(), times.end(), 1e-3 * r_start, observer);
  } else {
    observer(x, r_start);
  }

  RadialGraph out;
  out.r_start = r_start;
  for (double r : nodes) {
    const auto it = std::lower_bound(obs_r.begin(), obs_r.end(), r * (1.0 - 1e-14));
    const std::size_t j = static_cast<std::size_t>(it - obs_r.begin());
    const double q2 = 1.0 + r * r;
    const double d = obs_y[j] / scale_of(r);
    const double v = k0_of(r) + d;
    const double omv2 = omv2_of(r, d);
    if (!(omv2 > 0.0))
      throw SolverError("radial Jang solution blows up (|v| reached 1) near r = " + std::to_string(r), omv2);
    const RadialSample s = profile(r);
    const double sa = std::sqrt(s.a);
    const double dsa = 0.5 * s.da / sa;
    const double ddsa = 0.5 * s.dda / sa - 0.25 * s.da * s.da / (s.a * sa);
    double d_dd = 0.0;
    const double dd = dev_rhs(r, d, &d_dd);
    const double dv = std::pow(q2, -1.5) + dd;
    // v'' = k0'' + d/dr [dd(r, d(r))], the explicit r-dependence by central differences.
    const double hr = 1e-4 * r;
    const double dd_r = (dev_rhs(r + hr, d) - dev_rhs(r - hr, d)) / (2.0 * hr);
    const double ddv = -3.0 * r * std::pow(q2, -2.5) + dd_r + d_dd * dd;

    const double rt = std::sqrt(omv2);
    const double w1 = v / rt;                // v / sqrt(1-v^2)
    const double w2 = 1.0 / (omv2 * rt);     // (1-v^2)^{-3/2}
    const double w3 = 3.0 * v / (omv2 * omv2 * rt);
    out.r.push_back(r);
    out.v.push_back(v);
    out.f.push_back(obs_xi[j] + std::sqrt(q2));
    out.df.push_back(sa * w1);
    out.ddf.push_back(dsa * w1 + sa * dv * w2);
    out.dddf.push_back(ddsa * w1 + 2.0 * dsa * dv * w2 + sa * (ddv * w2 + dv * dv * w3));
  }
  return out;
}

}  // namespace jang
