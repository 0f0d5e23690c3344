#include <cmath>
#include <numbers>

#include "jang/initial_data.hpp"
#include "jang/parallel.hpp"

namespace jang {

double energy_wang(const WangDataSpec& spec, int sphere_degree) {
  const int L = std::max({sphere_degree, spec.m.degree(), spec.p.degree()});
  const SphereGrid grid(L);
  const HarmonicCoeffs integrand = spec.m.trace() + spec.p.trace().scaled(2.0);
  return sphere_integrate(grid, integrand.synthesize(grid)) / (16.0 * std::numbers::pi);
}

double mass_functional_density(const DeviationPoint& d, double r, double theta, const std::array<double, 4>& Vjet) {
  Mat3 b{};
  Deriv3 db{};
  hyperbolic_metric(r, theta, b, db);
  const Mat3 binv = inverse_spd(b);
  const Christoffel gam = christoffel_symbols(b, binv, db);
  const Deriv3 ne = covariant_derivative(d.e, d.de, gam);

  double div_r = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) div_r += binv[i][k] * ne[k][i][0];

  const double tr_e = trace_with(binv, d.e);
  double dtr_r = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double dbinv = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) dbinv -= binv[i][a] * db[0][a][c] * binv[c][j];
      dtr_r += dbinv * d.e[i][j] + binv[i][j] * d.de[0][i][j];
    }

  const Vec3 dV{Vjet[1], Vjet[2], Vjet[3]};
  const Vec3 gradV = raise(binv, dV);
  double shear = 0.0;
  for (int j = 0; j < 3; ++j) shear += (d.e[0][j] + 2.0 * d.eta[0][j]) * gradV[j];

  const double flux = Vjet[0] * (div_r - dtr_r) + tr_e * Vjet[1] - shear;
  return flux * std::sqrt(1.0 + r * r) * r * r;
}

MassVector mass_vector(const InitialData& data, const std::vector<double>& radii, int sphere_degree,
                       double residual_threshold) {
  const SphereGrid sphere(sphere_degree);
  MassVector out;
  out.rows.resize(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) {
    const double r = radii[i];
    const double q = std::sqrt(1.0 + r * r);
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < sphere.size(); ++k) {
      const double th = sphere.theta_at(k), ph = sphere.phi_at(k);
      const DeviationPoint d = data.deviation_at(r, th, ph);
      const double s = std::sin(th), c = std::cos(th);
      const double x[3] = {s * std::cos(ph), s * std::sin(ph), c};
      const double xt[3] = {c * std::cos(ph), c * std::sin(ph), -s};
      const double xp[3] = {-s * std::sin(ph), s * std::cos(ph), 0.0};
      const double w = sphere.weight_at(k);
      acc[0] += w * mass_functional_density(d, r, th, {q, r / q, 0.0, 0.0});
      for (int a = 0; a < 3; ++a)
        acc[a + 1] += w * mass_functional_density(d, r, th, {x[a] * r, x[a], r * xt[a], r * xp[a]});
    }
    const double norm = 16.0 * std::numbers::pi;
    out.rows[i] = MassRow{r, acc[0] / norm, {acc[1] / norm, acc[2] / norm, acc[3] / norm}};
  });

  if (radii.size() < 3) {
    out.E = out.rows.empty() ? 0.0 : out.rows.back().E;
    if (!out.rows.empty()) out.P = out.rows.back().P;
    out.divergence_warning = true;
    out.warning = "fewer than three radii; no extrapolation";
    return out;
  }
  std::vector<double> e(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) e[i] = out.rows[i].E;
  out.fit = extrapolate_limit(radii, e, 1.0);
  out.E = out.fit.limit;
  for (int a = 0; a < 3; ++a) {
    std::vector<double> pa(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) pa[i] = out.rows[i].P[a];
    out.P[a] = extrapolate_limit(radii, pa, 1.0).limit;
  }
  if (radii.size() >= 4) out.free_fit = extrapolate_free_rate(radii, e);
  if (out.fit.residual > residual_threshold * std::max(1.0, std::abs(out.E))) {
    out.divergence_warning = true;
    out.fit.converged = false;
    out.warning = "surface integrals do not follow limit + c/R within the residual threshold";
  }
  return out;
}

}  // namespace jang
