#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "jang/finite_difference.hpp"
#include "jang/graph.hpp"
#include "jang/parallel.hpp"

namespace jang {

namespace {

// Third angular derivative of psi by the number of phi indices among (a, b, c).
double angular_third(const AngularJet& j, int n_phi) {
  switch (n_phi) {
    case 0: return j.ttt;
    case 1: return j.ttp;
    case 2: return j.tpp;
    default: return j.ppp;
  }
}

struct PointGeometry {
  Mat3 gbar{}, gbar_inv{};
  double W = 1.0;
  Vec3 f_up{};  // g^{ij} f_j
  Mat3 A{};
  Mat3 K{};
  Vec3 q{};
  double H = 0.0;
};

PointGeometry point_geometry(const DataPoint& p, const GraphJet& f) {
  PointGeometry out;
  const Mat3 ginv = inverse_spd(p.g);
  const Christoffel gam = christoffel_symbols(p.g, ginv, p.dg);
  out.f_up = raise(ginv, f.df);
  double grad2 = 0.0;
  for (int i = 0; i < 3; ++i) grad2 += out.f_up[i] * f.df[i];
  out.W = std::sqrt(1.0 + grad2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      out.gbar[i][j] = p.g[i][j] + f.df[i] * f.df[j];
      double hess = f.ddf[i][j];
      for (int k = 0; k < 3; ++k) hess -= gam[k][i][j] * f.df[k];
      out.A[i][j] = hess / out.W;
    }
  out.gbar_inv = inverse_spd(out.gbar);
  out.K = p.K;
  out.H = trace_with(out.gbar_inv, out.A);
  for (int i = 0; i < 3; ++i) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j) s += out.f_up[j] * (out.A[i][j] - p.K[i][j]);
    out.q[i] = s / out.W;
  }
  return out;
}

double norm2(const Mat3& inv, const Mat3& t) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) s += inv[i][k] * inv[j][l] * t[i][j] * t[k][l];
  return s;
}

Mat3 sub(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[i][j] = a[i][j] - b[i][j];
  return c;
}

Mat3 lincomb(double wa, const Mat3& a, double wb, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[i][j] = wa * a[i][j] + wb * b[i][j];
  return c;
}

void require_interior(const GraphMetric& m, std::size_t i) {
  if (i == 0 || i + 1 >= m.grid().size())
    throw std::out_of_range("finite-difference geometry needs an interior node");
}

FirstJet graph_first_jet(const GraphMetric& m, std::size_t i, double theta, double phi) {
  const GraphJet f = m.function().jet(i, theta, phi);
  const DataPoint p = m.data().at(m.grid()[i], theta, phi);
  FirstJet out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      out.g[a][b] = p.g[a][b] + f.df[a] * f.df[b];
      for (int k = 0; k < 3; ++k) out.dg[k][a][b] = p.dg[k][a][b] + f.ddf[k][a] * f.df[b] + f.df[a] * f.ddf[k][b];
    }
  return out;
}

}  // namespace

// ---- graph function -----------------------------------------------------------

GraphFunction::GraphFunction(RadialGrid grid, std::vector<std::array<double, 4>> radial, HarmonicCoeffs psi)
    : grid_(std::move(grid)), radial_(std::move(radial)), psi_(std::move(psi)) {
  if (radial_.size() != grid_.size()) throw std::invalid_argument("radial profile must be sampled on the grid");
}

GraphJet GraphFunction::jet(std::size_t i, double theta, double phi) const {
  const auto& ph = radial_.at(i);
  GraphJet out;
  out.f = ph[0];
  out.df[0] = ph[1];
  out.ddf[0][0] = ph[2];
  out.dddf[0][0][0] = ph[3];
  if (psi_.is_zero()) return out;
  const AngularJet j = psi_.jet(theta, phi);
  out.f += j.v;
  out.df[1] = j.t;
  out.df[2] = j.p;
  out.ddf[1][1] = j.tt;
  out.ddf[1][2] = out.ddf[2][1] = j.tp;
  out.ddf[2][2] = j.pp;
  for (int a = 1; a < 3; ++a)
    for (int b = 1; b < 3; ++b)
      for (int c = 1; c < 3; ++c) out.dddf[a][b][c] = angular_third(j, (a == 2) + (b == 2) + (c == 2));
  return out;
}

std::size_t GraphFunction::node(double r) const {
  const auto& x = grid_.nodes();
  const auto it = std::lower_bound(x.begin(), x.end(), r * (1.0 - 1e-12));
  if (it == x.end() || std::abs(*it - r) > 1e-12 * r) throw std::out_of_range("radius is not a grid node");
  return static_cast<std::size_t>(it - x.begin());
}

GraphFunction GraphFunction::shifted(double c) const {
  GraphFunction out = *this;
  for (auto& row : out.radial_) row[0] += c;
  return out;
}

GraphFunction graph_from_radial(const RadialGraph& graph) {
  RadialGrid grid;
  try {
    grid = RadialGrid(graph.r, Spacing::logarithmic);
  } catch (const std::invalid_argument&) {
    grid = RadialGrid(graph.r, Spacing::uniform);
  }
  std::vector<std::array<double, 4>> radial(graph.r.size());
  for (std::size_t i = 0; i < graph.r.size(); ++i) radial[i] = {graph.f[i], graph.df[i], graph.ddf[i], graph.dddf[i]};
  return GraphFunction(std::move(grid), std::move(radial));
}

GraphFunction graph_from_profile(const ProfileFn& phi, const RadialGrid& grid, const HarmonicCoeffs& psi) {
  std::vector<std::array<double, 4>> radial(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) radial[i] = phi(grid[i]);
  return GraphFunction(grid, std::move(radial), psi);
}

// ---- induced metric -------------------------------------------------------------

GraphMetric::GraphMetric(const InitialData& data, GraphFunction f) : data_(&data), f_(std::move(f)) {}

Mat3 GraphMetric::metric(std::size_t i, double theta, double phi) const {
  const GraphJet f = f_.jet(i, theta, phi);
  const DataPoint p = data_->at(f_.grid()[i], theta, phi);
  Mat3 g = p.g;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) g[a][b] += f.df[a] * f.df[b];
  return g;
}

// The rank-one formula and the cofactor inverse of g + df df are the same
// matrix; the cofactor form keeps its digits where g^{rr} ~ r^2.
Mat3 GraphMetric::inverse(std::size_t i, double theta, double phi) const { return inverse_spd(metric(i, theta, phi)); }

MetricJet GraphMetric::jet(std::size_t i, double theta, double phi) const {
  const GraphJet f = f_.jet(i, theta, phi);
  const DataPoint p = data_->at(f_.grid()[i], theta, phi);
  MetricJet out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      out.g[a][b] = p.g[a][b] + f.df[a] * f.df[b];
      for (int k = 0; k < 3; ++k) {
        out.dg[k][a][b] = p.dg[k][a][b] + f.ddf[k][a] * f.df[b] + f.df[a] * f.ddf[k][b];
        for (int l = 0; l < 3; ++l)
          out.ddg[k][l][a][b] = p.ddg[k][l][a][b] + f.dddf[l][k][a] * f.df[b] + f.ddf[k][a] * f.ddf[l][b] +
                                f.ddf[l][a] * f.ddf[k][b] + f.df[a] * f.dddf[l][k][b];
      }
    }
  return out;
}

GraphMetric induced_metric(const InitialData& data, GraphFunction f) { return GraphMetric(data, std::move(f)); }

// ---- second fundamental form and q ----------------------------------------------

SecondFundamentalForm second_fundamental_form(const GraphMetric& m, std::size_t i, double theta, double phi) {
  const PointGeometry pg = point_geometry(m.data().at(m.grid()[i], theta, phi), m.function().jet(i, theta, phi));
  SecondFundamentalForm out;
  out.A = pg.A;
  out.H = pg.H;
  out.A_norm2 = norm2(pg.gbar_inv, pg.A);
  out.A_minus_K_norm2 = norm2(pg.gbar_inv, sub(pg.A, pg.K));
  return out;
}

Vec3 q_oneform(const GraphMetric& m, std::size_t i, double theta, double phi) {
  return point_geometry(m.data().at(m.grid()[i], theta, phi), m.function().jet(i, theta, phi)).q;
}

double divergence_q(const GraphMetric& m, std::size_t i, double theta, double phi, double dang) {
  require_interior(m, i);
  // V^k = sqrt(det gbar) gbar^{kj} q_j; div q = d_k V^k / sqrt(det gbar).
  auto density = [&](std::size_t node, double th, double ph, double* vol) {
    const PointGeometry pg = point_geometry(m.data().at(m.grid()[node], th, ph), m.function().jet(node, th, ph));
    const Mat3& g = pg.gbar;
    const double det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
                       g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
                       g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    const double s = std::sqrt(det);
    if (vol != nullptr) *vol = s;
    Vec3 V = raise(pg.gbar_inv, pg.q);
    for (double& x : V) x *= s;
    return V;
  };
  const auto& r = m.grid().nodes();
  const ThreePoint w = three_point(r[i - 1], r[i], r[i + 1]);
  double vol = 0.0;
  double dr = w.d1[1] * density(i, theta, phi, &vol)[0];
  dr += w.d1[0] * density(i - 1, theta, phi, nullptr)[0] + w.d1[2] * density(i + 1, theta, phi, nullptr)[0];
  const double dt =
      (density(i, theta + dang, phi, nullptr)[1] - density(i, theta - dang, phi, nullptr)[1]) / (2.0 * dang);
  const double dp =
      (density(i, theta, phi + dang, nullptr)[2] - density(i, theta, phi - dang, nullptr)[2]) / (2.0 * dang);
  return (dr + dt + dp) / vol;
}

SchoenYauTerms scalar_curvature_sy(const GraphMetric& m, std::size_t i, double theta, double phi, double dang) {
  const DataPoint p = m.data().at(m.grid()[i], theta, phi);
  const PointGeometry pg = point_geometry(p, m.function().jet(i, theta, phi));
  const Constraints c = compute_constraints(p);
  SchoenYauTerms out;
  double Jw = 0.0;
  for (int a = 0; a < 3; ++a) Jw += c.J[a] * pg.f_up[a] / pg.W;
  out.mu_minus_Jw = c.mu - Jw;
  out.A_minus_K_norm2 = norm2(pg.gbar_inv, sub(pg.A, pg.K));
  out.q_norm2 = dot(pg.gbar_inv, pg.q, pg.q);
  out.div_q = divergence_q(m, i, theta, phi, dang);
  out.total = 2.0 * out.mu_minus_Jw + out.A_minus_K_norm2 + 2.0 * out.q_norm2 - 2.0 * out.div_q;
  return out;
}

// ---- scalar curvature -------------------------------------------------------------

double scalar_curvature_fd(const MetricValueFn& g, double rm, double r0, double rp, double theta, double phi,
                           double dang) {
  const ThreePoint w = three_point(rm, r0, rp);
  const double rs[3] = {rm, r0, rp};
  const double h2 = 2.0 * dang;
  Mat3 G[3], Gt[3], Gp[3];  // value and first angular derivatives at each radius
  for (int s = 0; s < 3; ++s) {
    G[s] = g(rs[s], theta, phi);
    Gt[s] = lincomb(1.0 / h2, g(rs[s], theta + dang, phi), -1.0 / h2, g(rs[s], theta - dang, phi));
    Gp[s] = lincomb(1.0 / h2, g(rs[s], theta, phi + dang), -1.0 / h2, g(rs[s], theta, phi - dang));
  }
  const double d2 = dang * dang;
  const Mat3 tt = lincomb(1.0 / d2, lincomb(1.0, g(r0, theta + dang, phi), 1.0, g(r0, theta - dang, phi)), -2.0 / d2,
                          G[1]);
  const Mat3 pp = lincomb(1.0 / d2, lincomb(1.0, g(r0, theta, phi + dang), 1.0, g(r0, theta, phi - dang)), -2.0 / d2,
                          G[1]);
  const Mat3 tp = lincomb(1.0 / (4.0 * d2),
                          lincomb(1.0, g(r0, theta + dang, phi + dang), 1.0, g(r0, theta - dang, phi - dang)),
                          -1.0 / (4.0 * d2),
                          lincomb(1.0, g(r0, theta + dang, phi - dang), 1.0, g(r0, theta - dang, phi + dang)));

  Deriv3 dg{};
  Deriv33 ddg{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double r1 = 0.0, rr = 0.0, rt = 0.0, rph = 0.0;
      for (int s = 0; s < 3; ++s) {
        r1 += w.d1[s] * G[s][a][b];
        rr += w.d2[s] * G[s][a][b];
        rt += w.d1[s] * Gt[s][a][b];
        rph += w.d1[s] * Gp[s][a][b];
      }
      dg[0][a][b] = r1;
      dg[1][a][b] = Gt[1][a][b];
      dg[2][a][b] = Gp[1][a][b];
      ddg[0][0][a][b] = rr;
      ddg[0][1][a][b] = ddg[1][0][a][b] = rt;
      ddg[0][2][a][b] = ddg[2][0][a][b] = rph;
      ddg[1][1][a][b] = tt[a][b];
      ddg[2][2][a][b] = pp[a][b];
      ddg[1][2][a][b] = ddg[2][1][a][b] = tp[a][b];
    }
  return scalar_curvature(G[1], dg, ddg);
}

double scalar_curvature_direct(const GraphMetric& m, std::size_t i, double theta, double phi, double dang) {
  require_interior(m, i);
  const MetricValueFn g = [&](double r, double th, double ph) { return m.metric(m.function().node(r), th, ph); };
  const auto& r = m.grid().nodes();
  return scalar_curvature_fd(g, r[i - 1], r[i], r[i + 1], theta, phi, dang);
}

double scalar_curvature_exact(const GraphMetric& m, std::size_t i, double theta, double phi) {
  const MetricJet j = m.jet(i, theta, phi);
  return scalar_curvature(j.g, j.dg, j.ddg);
}

// ---- ADM mass ----------------------------------------------------------------------

AdmMass adm_mass(const MetricField& g, const std::vector<double>& radii, int sphere_degree,
                 double residual_threshold) {
  const SphereGrid sphere(sphere_degree);
  AdmMass out;
  out.rows.resize(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) {
    const double r = radii[i];
    double acc = 0.0;
    for (std::size_t k = 0; k < sphere.size(); ++k) {
      const double th = sphere.theta_at(k), ph = sphere.phi_at(k);
      const double s = std::sin(th), c = std::cos(th);
      const Mat3 delta = diag3(1.0, r * r, r * r * s * s);
      const Mat3 dinv = diag3(1.0, 1.0 / (r * r), 1.0 / (r * r * s * s));
      Deriv3 ddelta = zero_deriv3();
      ddelta[0][1][1] = 2.0 * r;
      ddelta[0][2][2] = 2.0 * r * s * s;
      ddelta[1][2][2] = 2.0 * r * r * s * c;
      const FirstJet j = g(r, th, ph);
      Mat3 e{};
      Deriv3 de{};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          e[a][b] = j.g[a][b] - delta[a][b];
          for (int l = 0; l < 3; ++l) de[l][a][b] = j.dg[l][a][b] - ddelta[l][a][b];
        }
      const Christoffel gam = christoffel_symbols(delta, dinv, ddelta);
      const Deriv3 ne = covariant_derivative(e, de, gam);
      const Vec3 div = divergence(dinv, ne);
      // d_r tr e with d_r delta^{ij} = diag(0, -2/r^3, -2/(r^3 s^2)).
      double dtr = 0.0;
      for (int a = 0; a < 3; ++a) dtr += dinv[a][a] * de[0][a][a];
      dtr += -2.0 / r * (dinv[1][1] * e[1][1] + dinv[2][2] * e[2][2]);
      acc += sphere.weight_at(k) * (div[0] - dtr) * r * r;
    }
    out.rows[i] = AdmRow{r, acc / (16.0 * std::numbers::pi)};
  });

  if (radii.size() < 3) {
    out.mass = out.rows.empty() ? 0.0 : out.rows.back().mass;
    out.divergence_warning = true;
    out.warning = "fewer than three radii; no extrapolation";
    return out;
  }
  std::vector<double> v(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) v[i] = out.rows[i].mass;
  out.fit = extrapolate_limit(radii, v, 1.0);
  out.mass = out.fit.limit;
  if (radii.size() >= 4) out.free_fit = extrapolate_free_rate(radii, v);
  if (out.fit.residual > residual_threshold * std::max(1.0, std::abs(out.mass))) {
    out.divergence_warning = true;
    out.fit.converged = false;
    out.warning = "surface integrals do not follow limit + c/R within the residual threshold";
  }
  return out;
}

AdmMass adm_mass(const GraphMetric& m, double r_lo, double r_hi, std::size_t count, int sphere_degree) {
  const auto [first, last] = m.grid().index_range(r_lo, r_hi);
  if (last - first < 3) throw std::invalid_argument("ADM window holds fewer than three grid nodes");
  std::vector<std::size_t> idx;
  const std::size_t n = last - first;
  const std::size_t take = std::min(count, n);
  for (std::size_t k = 0; k < take; ++k) {
    const std::size_t j = first + (take == 1 ? 0 : k * (n - 1) / (take - 1));
    if (idx.empty() || idx.back() != j) idx.push_back(j);
  }
  std::vector<double> radii;
  for (std::size_t j : idx) radii.push_back(m.grid()[j]);
  const MetricField field = [&m](double r, double th, double ph) {
    return graph_first_jet(m, m.function().node(r), th, ph);
  };
  return adm_mass(field, radii, sphere_degree);
}

MetricField schwarzschild_metric(double mass) {
  return [mass](double r, double th, double) {
    const double psi = 1.0 + mass / (2.0 * r);
    const double dpsi = -mass / (2.0 * r * r);
    const double p4 = std::pow(psi, 4), dp4 = 4.0 * std::pow(psi, 3) * dpsi;
    const double s = std::sin(th), c = std::cos(th);
    FirstJet j;
    j.g = diag3(p4, p4 * r * r, p4 * r * r * s * s);
    j.dg[0] = diag3(dp4, dp4 * r * r + 2.0 * r * p4, (dp4 * r * r + 2.0 * r * p4) * s * s);
    j.dg[1][2][2] = p4 * r * r * 2.0 * s * c;
    return j;
  };
}

MetricField flat_metric() { return schwarzschild_metric(0.0); }

// ---- report --------------------------------------------------------------------------

GraphGeometryReport geometry_report(const GraphMetric& m, const SphereGrid& sphere, double r_lo, double r_hi,
                                    double adm_lo, double adm_hi, double dang) {
  const auto& r = m.grid().nodes();
  if (dang <= 0.0) dang = std::log(r[1] / r[0]);
  auto [first, last] = m.grid().index_range(r_lo, r_hi);
  first = std::max<std::size_t>(first, 1);
  last = std::min(last, r.size() - 1);
  GraphGeometryReport out;
  out.angular_step = dang;
  const std::size_t ns = sphere.size();
  const std::size_t nr = last > first ? last - first : 0;
  out.samples.resize(nr * ns);
  parallel_for(nr, [&](std::size_t a) {
    const std::size_t i = first + a;
    for (std::size_t k = 0; k < ns; ++k) {
      const double th = sphere.theta_at(k), ph = sphere.phi_at(k);
      GeometrySample& s = out.samples[a * ns + k];
      s.r = r[i];
      s.theta = th;
      s.phi = ph;
      const SecondFundamentalForm A = second_fundamental_form(m, i, th, ph);
      s.H = A.H;
      s.A_norm2 = A.A_norm2;
      s.A_minus_K_norm2 = A.A_minus_K_norm2;
      s.q = q_oneform(m, i, th, ph);
      const SchoenYauTerms sy = scalar_curvature_sy(m, i, th, ph, dang);
      s.div_q = sy.div_q;
      s.scal_sy = sy.total;
      s.scal_direct = scalar_curvature_direct(m, i, th, ph, dang);
      s.scal_exact = scalar_curvature_exact(m, i, th, ph);
    }
  });
  for (const auto& s : out.samples)
    out.max_route_discrepancy = std::max(out.max_route_discrepancy, std::abs(s.scal_sy - s.scal_direct));
  out.adm = adm_mass(m, adm_lo, adm_hi);
  return out;
}

}  // namespace jang
