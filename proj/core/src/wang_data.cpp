#include <algorithm>
#include <cmath>
#include <numbers>

#include "jang/initial_data.hpp"

namespace jang {

namespace {

struct RadialFactor {
  double v, d1, d2;
};

// Adds rad(r) * ang(theta, phi) to the symmetric entry (i, j) and its derivatives.
void add_term(Mat3& t, Deriv3& dt, Deriv33* ddt, int i, int j, const RadialFactor& rad, const AngularJet& ang) {
  auto put = [&](int a, int b) {
    t[a][b] += rad.v * ang.v;
    dt[0][a][b] += rad.d1 * ang.v;
    dt[1][a][b] += rad.v * ang.t;
    dt[2][a][b] += rad.v * ang.p;
    if (ddt) {
      auto& dd = *ddt;
      dd[0][0][a][b] += rad.d2 * ang.v;
      dd[0][1][a][b] += rad.d1 * ang.t;
      dd[1][0][a][b] += rad.d1 * ang.t;
      dd[0][2][a][b] += rad.d1 * ang.p;
      dd[2][0][a][b] += rad.d1 * ang.p;
      dd[1][1][a][b] += rad.v * ang.tt;
      dd[1][2][a][b] += rad.v * ang.tp;
      dd[2][1][a][b] += rad.v * ang.tp;
      dd[2][2][a][b] += rad.v * ang.pp;
    }
  };
  put(i, j);
  if (i != j) put(j, i);
}

AngularJet constant_jet(double c) {
  AngularJet j;
  j.v = c;
  return j;
}

// sin^2 theta with theta-derivatives.
AngularJet sin2_jet(double theta) {
  const double s = std::sin(theta), c = std::cos(theta);
  AngularJet j;
  j.v = s * s;
  j.t = 2.0 * s * c;
  j.tt = 2.0 * std::cos(2.0 * theta);
  j.ttt = -4.0 * std::sin(2.0 * theta);
  return j;
}

void add_angular_tensor(Mat3& t, Deriv3& dt, Deriv33* ddt, const RadialFactor& rad,
                        const SymTensorField::Components& c) {
  add_term(t, dt, ddt, 1, 1, rad, c.tt);
  add_term(t, dt, ddt, 1, 2, rad, c.tp);
  add_term(t, dt, ddt, 2, 2, rad, c.pp);
}

void add_sigma(Mat3& t, Deriv3& dt, Deriv33* ddt, const RadialFactor& rad, double theta) {
  add_term(t, dt, ddt, 1, 1, rad, constant_jet(1.0));
  add_term(t, dt, ddt, 2, 2, rad, sin2_jet(theta));
}

double mean_value(const HarmonicCoeffs& c) { return c.get(0, 0) / (2.0 * std::sqrt(std::numbers::pi)); }

void check_finite(const HarmonicCoeffs& c, const char* what) {
  for (double v : c.data())
    if (!std::isfinite(v)) throw ValidationError(std::string("non-finite coefficient in ") + what);
}

}  // namespace

bool SymTensorField::is_spherical(double tol) const {
  return sigma.is_constant(tol) && tf_plus.is_zero(tol) && tf_cross.is_zero(tol) && antisym.is_zero(tol);
}

int SymTensorField::degree() const {
  return std::max({sigma.degree(), tf_plus.degree(), tf_cross.degree()});
}

SymTensorField::Components SymTensorField::components(double theta, double phi) const {
  const double s = std::sin(theta), c = std::cos(theta);
  const AngularJet A = sigma.jet(theta, phi);
  const AngularJet B = tf_plus.is_zero() ? AngularJet{} : tf_plus.jet(theta, phi);
  const AngularJet C = tf_cross.is_zero() ? AngularJet{} : tf_cross.jet(theta, phi);
  const AngularJet w = sin2_jet(theta);
  Components out;
  out.tt = A + B;
  out.tp = multiply_theta(s, c, -s, -c, C);
  out.pp = multiply_theta(w.v, w.t, w.tt, w.ttt, A - B);
  return out;
}

SymTensorField SymTensorField::multiple_of_sigma(double c) {
  SymTensorField f;
  f.sigma.set(0, 0, c * 2.0 * std::sqrt(std::numbers::pi));
  return f;
}

void WangDataSpec::validate() const {
  for (const auto* field : {&m, &p}) {
    if (!field->antisym.is_zero())
      throw ValidationError("tensor fields m and p must be symmetric (nonzero area-form component)");
    check_finite(field->sigma, "sigma component");
    check_finite(field->tf_plus, "tf_plus component");
    check_finite(field->tf_cross, "tf_cross component");
  }
  if (!std::isfinite(remainders.g_angular) || !std::isfinite(remainders.k_angular))
    throw ValidationError("non-finite remainder coefficient");
}

WangDataSpec WangDataSpec::rotated_z(double angle) const {
  WangDataSpec out = *this;
  for (auto* f : {&out.m, &out.p}) {
    f->sigma = f->sigma.rotated_z(angle);
    f->tf_plus = f->tf_plus.rotated_z(angle);
    f->tf_cross = f->tf_cross.rotated_z(angle);
  }
  return out;
}

InitialData make_wang_data(const WangDataSpec& spec) {
  spec.validate();
  const WangDataSpec sp = spec;
  const double cg = sp.remainders.g_angular;
  const double ck = sp.remainders.k_angular;

  auto point = [sp, cg, ck](double r, double theta, double phi) {
    DataPoint d;
    const auto mc = sp.m.components(theta, phi);
    const auto pc = sp.p.components(theta, phi);
    const double q2 = 1.0 + r * r;

    add_term(d.g, d.dg, &d.ddg, 0, 0, {1.0 / q2, -2.0 * r / (q2 * q2), (6.0 * r * r - 2.0) / (q2 * q2 * q2)},
             constant_jet(1.0));
    add_sigma(d.g, d.dg, &d.ddg, {r * r, 2.0 * r, 2.0}, theta);
    add_angular_tensor(d.g, d.dg, &d.ddg, {1.0 / r, -1.0 / (r * r), 2.0 / (r * r * r)}, mc);
    if (cg != 0.0)
      add_sigma(d.g, d.dg, &d.ddg, {cg / (r * r), -2.0 * cg / (r * r * r), 6.0 * cg / (r * r * r * r)}, theta);

    // K_rr carries (tr m - tr p) r^-3/(1+r^2) so that J decays fast enough.
    const AngularJet q = 2.0 * (sp.m.sigma.jet(theta, phi) - sp.p.sigma.jet(theta, phi));
    const double h = r * r * r * q2;
    const double dh = 3.0 * r * r + 5.0 * r * r * r * r;
    add_term(d.K, d.dK, nullptr, 0, 0, {1.0 / q2, -2.0 * r / (q2 * q2), 0.0}, constant_jet(1.0));
    add_term(d.K, d.dK, nullptr, 0, 0, {1.0 / h, -dh / (h * h), 0.0}, q);
    add_sigma(d.K, d.dK, nullptr, {r * r, 2.0 * r, 0.0}, theta);
    add_angular_tensor(d.K, d.dK, nullptr, {1.0 / r, -1.0 / (r * r), 0.0}, pc);
    if (ck != 0.0) add_sigma(d.K, d.dK, nullptr, {ck / (r * r), -2.0 * ck / (r * r * r), 0.0}, theta);
    return d;
  };

  auto deviation = [sp, cg, ck](double r, double theta, double phi) {
    DeviationPoint d;
    const auto mc = sp.m.components(theta, phi);
    const auto pc = sp.p.components(theta, phi);
    add_angular_tensor(d.e, d.de, nullptr, {1.0 / r, -1.0 / (r * r), 0.0}, mc);
    if (cg != 0.0) add_sigma(d.e, d.de, nullptr, {cg / (r * r), -2.0 * cg / (r * r * r), 0.0}, theta);

    Deriv3 scratch{};
    const AngularJet q = 2.0 * (sp.m.sigma.jet(theta, phi) - sp.p.sigma.jet(theta, phi));
    add_term(d.eta, scratch, nullptr, 0, 0, {1.0 / (r * r * r * (1.0 + r * r)), 0.0, 0.0}, q);
    add_angular_tensor(d.eta, scratch, nullptr, {1.0 / r, 0.0, 0.0}, pc);
    add_angular_tensor(d.eta, scratch, nullptr, {-1.0 / r, 0.0, 0.0}, mc);
    if (ck != cg) add_sigma(d.eta, scratch, nullptr, {(ck - cg) / (r * r), 0.0, 0.0}, theta);
    return d;
  };

  // Smallest radius (on a coarse scan) beyond which g stays positive definite.
  double r_min = 0.05;
  {
    const SphereGrid probe(std::max(4, sp.m.degree() + 2));
    for (double r = 20.0; r > 0.05; r *= 0.8) {
      bool ok = true;
      for (std::size_t k = 0; k < probe.size() && ok; ++k) {
        const double th = probe.theta_at(k);
        ok = is_positive_definite(point(r, th, probe.phi_at(k)).g);
      }
      if (!ok) {
        r_min = r / 0.8;
        break;
      }
    }
  }

  InitialData data(sp.name, point, r_min);
  data.with_deviation(deviation).with_spec(sp);

  if (sp.is_spherical()) {
    const double m0 = mean_value(sp.m.sigma);
    const double p0 = mean_value(sp.p.sigma);
    data.with_radial([m0, p0, cg, ck](double r) {
      RadialSample s;
      const double q2 = 1.0 + r * r;
      s.a = 1.0 / q2;
      s.da = -2.0 * r / (q2 * q2);
      s.dda = (6.0 * r * r - 2.0) / (q2 * q2 * q2);
      s.G = r * r + m0 / r + cg / (r * r);
      s.dG = 2.0 * r - m0 / (r * r) - 2.0 * cg / (r * r * r);
      s.ddG = 2.0 + 2.0 * m0 / (r * r * r) + 6.0 * cg / (r * r * r * r);
      const double h = r * r * r * q2;
      const double dh = 3.0 * r * r + 5.0 * r * r * r * r;
      const double q = 2.0 * (m0 - p0);
      s.Krr = 1.0 / q2 + q / h;
      s.dKrr = -2.0 * r / (q2 * q2) - q * dh / (h * h);
      s.P = r * r + p0 / r + ck / (r * r);
      s.dP = 2.0 * r - p0 / (r * r) - 2.0 * ck / (r * r * r);
      s.has_deviation = true;
      s.G_dev = m0 / r + cg / (r * r);
      s.dG_dev = -m0 / (r * r) - 2.0 * cg / (r * r * r);
      s.Krr_dev = q / h;
      s.P_dev = p0 / r + ck / (r * r);
      return s;
    });
  }
  return data;
}

}  // namespace jang
