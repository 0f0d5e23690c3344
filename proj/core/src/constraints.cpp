#include <cmath>
#include <limits>

#include "jang/initial_data.hpp"
#include "jang/parallel.hpp"

namespace jang {

Constraints compute_constraints(const DataPoint& p) {
  const Mat3 ginv = inverse_spd(p.g);
  const Christoffel gam = christoffel_symbols(p.g, ginv, p.dg);
  Constraints c;
  c.scal = trace_with(ginv, ricci_tensor(p.g, p.dg, p.ddg));
  c.trK = trace_with(ginv, p.K);
  double k2 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) k2 += ginv[i][a] * ginv[j][b] * p.K[i][j] * p.K[a][b];
  c.K_norm2 = k2;
  c.mu = 0.5 * (c.scal + c.trK * c.trK - k2);

  const Vec3 divK = divergence(ginv, covariant_derivative(p.K, p.dK, gam));
  for (int k = 0; k < 3; ++k) {
    double dtr = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double dginv = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) dginv -= ginv[i][a] * p.dg[k][a][b] * ginv[b][j];
        dtr += dginv * p.K[i][j] + ginv[i][j] * p.dK[k][i][j];
      }
    c.J[k] = divK[k] - dtr;
  }
  c.J_norm = std::sqrt(std::max(0.0, dot(ginv, c.J, c.J)));
  return c;
}

Constraints compute_constraints(const InitialData& data, double r, double theta, double phi) {
  return compute_constraints(data.at(r, theta, phi));
}

ConstraintReport dec_report(const InitialData& data, const RadialGrid& radii, const SphereGrid& sphere) {
  ConstraintReport rep;
  rep.radii = radii.nodes();
  rep.sphere_points = sphere.size();
  const std::size_t total = radii.size() * sphere.size();
  rep.mu.resize(total);
  rep.J_norm.resize(total);
  rep.margin.resize(total);
  parallel_for(radii.size(), [&](std::size_t i) {
    for (std::size_t k = 0; k < sphere.size(); ++k) {
      const Constraints c = compute_constraints(data, radii[i], sphere.theta_at(k), sphere.phi_at(k));
      const std::size_t idx = i * sphere.size() + k;
      rep.mu[idx] = c.mu;
      rep.J_norm[idx] = c.J_norm;
      rep.margin[idx] = c.mu - c.J_norm;
    }
  });
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < total; ++idx)
    if (rep.margin[idx] < rep.min_margin) {
      rep.min_margin = rep.margin[idx];
      rep.min_r = radii[idx / sphere.size()];
      rep.min_theta = sphere.theta_at(idx % sphere.size());
      rep.min_phi = sphere.phi_at(idx % sphere.size());
    }
  rep.violated = rep.min_margin < 0.0;
  return rep;
}

double trapping_margin(const InitialData& data, double R, int sphere_degree) {
  const SphereGrid sphere(sphere_degree);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sphere.size(); ++k) {
    const DataPoint p = data.at(R, sphere.theta_at(k), sphere.phi_at(k));
    const Mat3 ginv = inverse_spd(p.g);
    const Christoffel gam = christoffel_symbols(p.g, ginv, p.dg);
    // Projection onto the sphere's tangent space, P^{ij} = g^{ij} - nu^i nu^j.
    Mat3 P{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) P[i][j] = ginv[i][j] - ginv[i][0] * ginv[j][0] / ginv[0][0];
    const double H = -trace_with(P, gam[0]) / std::sqrt(ginv[0][0]);
    const double trK = trace_with(P, p.K);
    worst = std::min(worst, H - std::abs(trK));
  }
  return worst;
}

}  // namespace jang
