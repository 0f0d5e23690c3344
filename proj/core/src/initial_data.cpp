#include "jang/initial_data.hpp"

#include <cmath>

namespace jang {

InitialData::InitialData(std::string name, PointFn point, double r_min)
    : name_(std::move(name)), point_(std::move(point)), r_min_(r_min) {}

InitialData& InitialData::with_deviation(DeviationFn fn) {
  deviation_ = std::move(fn);
  return *this;
}

InitialData& InitialData::with_radial(RadialProfile profile) {
  radial_ = std::move(profile);
  return *this;
}

InitialData& InitialData::with_spec(WangDataSpec spec) {
  spec_ = std::move(spec);
  return *this;
}

InitialData& InitialData::with_fd_step(double h) {
  fd_step_ = h;
  return *this;
}

InitialData& InitialData::with_regular_center(bool regular) {
  regular_center_ = regular;
  return *this;
}

DeviationPoint InitialData::deviation_at(double r, double theta, double phi) const {
  if (deviation_) return deviation_(r, theta, phi);
  const DataPoint p = at(r, theta, phi);
  Mat3 b{};
  Deriv3 db{};
  hyperbolic_metric(r, theta, b, db);
  DeviationPoint d;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      d.e[i][j] = p.g[i][j] - b[i][j];
      d.eta[i][j] = p.K[i][j] - p.g[i][j];
      for (int k = 0; k < 3; ++k) d.de[k][i][j] = p.dg[k][i][j] - db[k][i][j];
    }
  return d;
}

void hyperbolic_metric(double r, double theta, Mat3& b, Deriv3& db, Deriv33* ddb) {
  const double s = std::sin(theta), c = std::cos(theta);
  const double q2 = 1.0 + r * r;
  b = diag3(1.0 / q2, r * r, r * r * s * s);
  db = Deriv3{};
  db[0] = diag3(-2.0 * r / (q2 * q2), 2.0 * r, 2.0 * r * s * s);
  db[1][2][2] = 2.0 * r * r * s * c;
  if (ddb) {
    auto& dd = *ddb;
    dd = Deriv33{};
    dd[0][0] = diag3((6.0 * r * r - 2.0) / (q2 * q2 * q2), 2.0, 2.0 * s * s);
    dd[0][1][2][2] = 4.0 * r * s * c;
    dd[1][0][2][2] = 4.0 * r * s * c;
    dd[1][1][2][2] = 2.0 * r * r * std::cos(2.0 * theta);
  }
}

RadialSample RadialSample::deviation_filled(double r) const {
  if (has_deviation) return *this;
  RadialSample s = *this;
  const double a0 = 1.0 / (1.0 + r * r);
  s.a_dev = a - a0;
  s.G_dev = G - r * r;
  s.dG_dev = dG - 2.0 * r;
  s.Krr_dev = Krr - a0;
  s.P_dev = P - r * r;
  s.has_deviation = true;
  return s;
}

DataPoint radial_point(const RadialSample& s, double theta) {
  const double sn = std::sin(theta), cs = std::cos(theta);
  const double s2 = sn * sn, ds2 = 2.0 * sn * cs, dds2 = 2.0 * std::cos(2.0 * theta);
  DataPoint d;
  d.g = diag3(s.a, s.G, s.G * s2);
  d.dg[0] = diag3(s.da, s.dG, s.dG * s2);
  d.dg[1][2][2] = s.G * ds2;
  d.ddg[0][0] = diag3(s.dda, s.ddG, s.ddG * s2);
  d.ddg[0][1][2][2] = s.dG * ds2;
  d.ddg[1][0][2][2] = s.dG * ds2;
  d.ddg[1][1][2][2] = s.G * dds2;
  d.K = diag3(s.Krr, s.P, s.P * s2);
  d.dK[0] = diag3(s.dKrr, s.dP, s.dP * s2);
  d.dK[1][2][2] = s.P * ds2;
  return d;
}

namespace {

RadialSample hyperboloid_sample(double r, double kscale) {
  RadialSample s;
  const double q2 = 1.0 + r * r;
  s.a = 1.0 / q2;
  s.da = -2.0 * r / (q2 * q2);
  s.dda = (6.0 * r * r - 2.0) / (q2 * q2 * q2);
  s.G = r * r;
  s.dG = 2.0 * r;
  s.ddG = 2.0;
  s.Krr = kscale * s.a;
  s.dKrr = kscale * s.da;
  s.P = kscale * s.G;
  s.dP = kscale * s.dG;
  s.has_deviation = true;
  s.Krr_dev = (kscale - 1.0) * s.a;
  s.P_dev = (kscale - 1.0) * s.G;
  return s;
}

}  // namespace

InitialData make_radial_data(std::string name, RadialProfile profile, double r_min, bool regular_center) {
  auto point = [profile](double r, double theta, double) { return radial_point(profile(r), theta); };
  InitialData data(std::move(name), point, r_min);
  data.with_radial(std::move(profile)).with_regular_center(regular_center);
  return data;
}

InitialData make_hyperboloid_data() {
  InitialData data = make_radial_data("hyperboloid", [](double r) { return hyperboloid_sample(r, 1.0); }, 0.0, true);
  data.with_deviation([](double, double, double) { return DeviationPoint{}; });
  WangDataSpec spec;
  spec.name = "hyperboloid";
  data.with_spec(spec);
  return data;
}

InitialData make_planted_mu_data(double mu0) {
  if (!(mu0 > -3.0)) throw ValidationError("planted mu must exceed -3");
  const double c = std::sqrt(1.0 + mu0 / 3.0);
  InitialData data = make_radial_data("planted_mu", [c](double r) { return hyperboloid_sample(r, c); }, 0.0, true);
  data.with_deviation([c](double r, double theta, double) {
    DeviationPoint d;
    Deriv3 db{};
    hyperbolic_metric(r, theta, d.eta, db);
    for (auto& row : d.eta)
      for (double& v : row) v *= (c - 1.0);
    return d;
  });
  return data;
}

InitialData make_areal_mass_data(double energy) {
  const double E = energy;
  auto profile = [E](double r) {
    const double q2 = 1.0 + r * r;
    const double w = std::pow(q2, -1.5);
    const double dw = -3.0 * r * std::pow(q2, -2.5);
    const double ddw = -3.0 * std::pow(q2, -2.5) + 15.0 * r * r * std::pow(q2, -3.5);
    const double D = q2 - 2.0 * E * r * r * w;
    const double dD = 2.0 * r - 2.0 * E * (2.0 * r * w + r * r * dw);
    const double ddD = 2.0 - 2.0 * E * (2.0 * w + 4.0 * r * dw + r * r * ddw);
    RadialSample s;
    s.a = 1.0 / D;
    s.da = -dD / (D * D);
    s.dda = (2.0 * dD * dD - D * ddD) / (D * D * D);
    s.G = r * r;
    s.dG = 2.0 * r;
    s.ddG = 2.0;
    s.Krr = s.a;
    s.dKrr = s.da;
    s.P = s.G;
    s.dP = s.dG;
    s.has_deviation = true;
    s.a_dev = 2.0 * E * r * r * w / (D * q2);
    s.Krr_dev = s.a_dev;
    return s;
  };
  InitialData data = make_radial_data("wang_mp", profile, 0.0, true);
  data.with_deviation([E](double r, double, double) {
    // e_rr = a - 1/(1+r^2) = 2E r^2 w / (D (1+r^2)), written without cancellation.
    const double q2 = 1.0 + r * r;
    const double w = std::pow(q2, -1.5);
    const double dw = -3.0 * r * std::pow(q2, -2.5);
    const double D = q2 - 2.0 * E * r * r * w;
    const double dD = 2.0 * r - 2.0 * E * (2.0 * r * w + r * r * dw);
    const double N = 2.0 * E * r * r * w;
    const double dN = 2.0 * E * r * (2.0 - r * r) * std::pow(q2, -2.5);
    const double Dn = D * q2;
    const double dDn = dD * q2 + 2.0 * r * D;
    DeviationPoint d;
    d.e[0][0] = N / Dn;
    d.de[0][0][0] = (dN * Dn - N * dDn) / (Dn * Dn);
    return d;
  });
  return data;
}

InitialData make_fd_data(std::string name, std::function<Mat3(double, double, double)> metric,
                         std::function<Mat3(double, double, double)> curvature, double r_min, double h) {
  auto point = [metric, curvature, h](double r, double theta, double phi) {
    const std::array<double, 3> x{r, theta, phi};
    const std::array<double, 3> step{h * std::max(1.0, r), h, h};
    auto shifted = [&](int k, double sk, int l, double sl) {
      std::array<double, 3> y = x;
      y[k] += sk * step[k];
      if (l >= 0) y[l] += sl * step[l];
      return y;
    };
    auto G = [&](const std::array<double, 3>& y) { return metric(y[0], y[1], y[2]); };
    auto Kf = [&](const std::array<double, 3>& y) { return curvature(y[0], y[1], y[2]); };
    DataPoint d;
    d.g = G(x);
    d.K = Kf(x);
    for (int k = 0; k < 3; ++k) {
      const Mat3 gp = G(shifted(k, 1, -1, 0)), gm = G(shifted(k, -1, -1, 0));
      const Mat3 kp = Kf(shifted(k, 1, -1, 0)), km = Kf(shifted(k, -1, -1, 0));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          d.dg[k][i][j] = (gp[i][j] - gm[i][j]) / (2.0 * step[k]);
          d.dK[k][i][j] = (kp[i][j] - km[i][j]) / (2.0 * step[k]);
          d.ddg[k][k][i][j] = (gp[i][j] - 2.0 * d.g[i][j] + gm[i][j]) / (step[k] * step[k]);
        }
      for (int l = k + 1; l < 3; ++l) {
        const Mat3 pp = G(shifted(k, 1, l, 1)), pm = G(shifted(k, 1, l, -1));
        const Mat3 mp = G(shifted(k, -1, l, 1)), mm = G(shifted(k, -1, l, -1));
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            const double v = (pp[i][j] - pm[i][j] - mp[i][j] + mm[i][j]) / (4.0 * step[k] * step[l]);
            d.ddg[k][l][i][j] = v;
            d.ddg[l][k][i][j] = v;
          }
      }
    }
    return d;
  };
  InitialData data(std::move(name), point, r_min);
  data.with_fd_step(h);
  return data;
}

}  // namespace jang
