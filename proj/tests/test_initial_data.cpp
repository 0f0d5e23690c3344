#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "jang/fit.hpp"
#include "jang/initial_data.hpp"

using namespace jang;
using doctest::Approx;

namespace {

WangDataSpec sigma_spec(double m, double p) {
  WangDataSpec s;
  s.m = SymTensorField::multiple_of_sigma(m);
  s.p = SymTensorField::multiple_of_sigma(p);
  return s;
}

// A band-limited, non-spherical spec used by several properties.
WangDataSpec lumpy_spec() {
  WangDataSpec s = sigma_spec(0.8, 0.1);
  s.m.sigma.add(2, 0, 0.3);
  s.m.sigma.add(2, 1, -0.15);
  s.p.sigma.add(1, 1, 0.05);
  s.p.tf_plus = HarmonicCoeffs(2);
  s.p.tf_plus.set(2, 2, 0.1);
  return s;
}

double max_abs(const Vec3& v) { return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}); }

}  // namespace

TEST_CASE("hyperboloid data is (b, b)") {
  const InitialData d = make_hyperboloid_data();
  const DataPoint p = d.at(2.0, 0.9, 0.4);
  CHECK(p.g[0][0] == Approx(0.2).epsilon(1e-15));
  CHECK(p.g[1][1] == Approx(4.0).epsilon(1e-15));
  for (double r : {0.3, 2.0, 40.0})
    for (double th : {0.2, 1.3, 2.9}) {
      const DataPoint q = d.at(r, th, 1.0);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(q.K[i][j] == q.g[i][j]);
    }
  const DeviationPoint dev = d.deviation_at(500.0, 1.0, 0.5);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(dev.e[i][j] == 0.0);
      CHECK(dev.eta[i][j] == 0.0);
    }
}

TEST_CASE("Wang data: angular block carries m / r") {
  const InitialData d = make_wang_data(sigma_spec(1.0, 0.0));
  std::vector<double> r, y;
  for (double x = 100.0; x <= 1e4; x *= 1.2) {
    r.push_back(x);
    y.push_back(d.at(x, 1.1, 0.0).g[1][1] - x * x);
  }
  const DecayFit f = fit_decay_tail(r, y);
  CHECK(f.c == Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(f.p - 1.0) <= 0.05);
}

TEST_CASE("Wang data with zero m and p matches the hyperboloid") {
  const InitialData w = make_wang_data(sigma_spec(0.0, 0.0));
  const InitialData h = make_hyperboloid_data();
  for (double r : {1.0, 10.0, 300.0}) {
    const DataPoint a = w.at(r, 0.8, 2.0), b = h.at(r, 0.8, 2.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(a.g[i][j] == Approx(b.g[i][j]).epsilon(1e-14));
        CHECK(a.K[i][j] == Approx(b.K[i][j]).epsilon(1e-14));
      }
  }
}

TEST_CASE("trace read-back of the spec") {
  const WangDataSpec s = sigma_spec(1.0, 1.0);
  CHECK(s.m.trace().evaluate(0.7, 0.1) == Approx(2.0));
  CHECK(s.p.trace().evaluate(2.1, 4.0) == Approx(2.0));
}

TEST_CASE("non-symmetric tensor fields are rejected") {
  WangDataSpec s = sigma_spec(1.0, 0.0);
  s.m.antisym = HarmonicCoeffs(0);
  s.m.antisym.set(0, 0, 0.5);
  CHECK_THROWS_AS(s.validate(), ValidationError);
  CHECK_THROWS_AS(make_wang_data(s), ValidationError);
}

TEST_CASE("constraints of the hyperboloid and of (b, 0)") {
  const InitialData h = make_hyperboloid_data();
  for (double r : {0.5, 3.0, 50.0}) {
    const Constraints c = compute_constraints(h, r, 1.2, 0.3);
    CHECK(c.scal == Approx(-6.0).epsilon(1e-12));
    CHECK(c.trK == Approx(3.0).epsilon(1e-12));
    CHECK(c.K_norm2 == Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(c.mu) <= 1e-12);
    CHECK(c.J_norm <= 1e-12);

    DataPoint p = h.at(r, 1.2, 0.3);
    p.K = zero_mat3();
    p.dK = zero_deriv3();
    const Constraints z = compute_constraints(p);
    CHECK(2.0 * z.mu == Approx(-6.0).epsilon(1e-12));
    CHECK(max_abs(z.J) <= 1e-12);
  }
}

TEST_CASE("K -> -K leaves mu and flips J") {
  const InitialData d = make_wang_data(lumpy_spec());
  for (double r : {3.0, 20.0}) {
    DataPoint p = d.at(r, 0.9, 1.7);
    const Constraints a = compute_constraints(p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        p.K[i][j] = -p.K[i][j];
        for (int k = 0; k < 3; ++k) p.dK[k][i][j] = -p.dK[k][i][j];
      }
    const Constraints b = compute_constraints(p);
    CHECK(b.mu == Approx(a.mu).epsilon(1e-12));
    CHECK(max_abs(a.J) > 0.0);
    for (int i = 0; i < 3; ++i) CHECK(b.J[i] == Approx(-a.J[i]).epsilon(1e-12));
  }
}

TEST_CASE("finite-difference data reproduces the hyperboloid constraints") {
  const double h = 1e-3;
  auto metric = [](double r, double th, double) {
    Mat3 b;
    Deriv3 db;
    hyperbolic_metric(r, th, b, db);
    return b;
  };
  const InitialData d = make_fd_data("fd-hyperboloid", metric, metric, 0.1, h);
  for (double r : {0.5, 2.0, 8.0})
    for (double th : {0.6, 1.5}) {
      const Constraints c = compute_constraints(d, r, th, 0.2);
      CHECK(std::abs(c.mu) + c.J_norm < 10.0 * h * h);
    }
}

TEST_CASE("dominant energy report") {
  const SphereGrid sphere(6);
  const RadialGrid radii = RadialGrid::logarithmic(1.0, 100.0, 12);

  SUBCASE("hyperboloid margin vanishes") {
    const ConstraintReport rep = dec_report(make_hyperboloid_data(), radii, sphere);
    CHECK(std::abs(rep.min_margin) <= 1e-10);
    for (double m : rep.margin) CHECK(std::abs(m) <= 1e-10);
    for (double j : rep.J_norm) CHECK(j >= 0.0);
  }
  SUBCASE("planted mu = 0.1") {
    const ConstraintReport rep = dec_report(make_planted_mu_data(0.1), radii, sphere);
    CHECK(rep.min_margin == Approx(0.1).epsilon(1e-10));
    CHECK_FALSE(rep.violated);
  }
  SUBCASE("planted mu = -0.1 is flagged") {
    const ConstraintReport rep = dec_report(make_planted_mu_data(-0.1), radii, sphere);
    CHECK(rep.min_margin < 0.0);
    CHECK(rep.violated);
  }
}

TEST_CASE("dominant energy margin is invariant under rotations of the spec") {
  const WangDataSpec s = lumpy_spec();
  const double angle = 0.83;
  const InitialData a = make_wang_data(s);
  const InitialData b = make_wang_data(s.rotated_z(angle));
  for (double r : {2.0, 15.0})
    for (double th : {0.4, 1.9})
      for (double ph : {0.0, 2.5}) {
        const Constraints ca = compute_constraints(a, r, th, ph);
        const Constraints cb = compute_constraints(b, r, th, ph + angle);
        CHECK(cb.mu - cb.J_norm == Approx(ca.mu - ca.J_norm).epsilon(1e-10));
      }
}

TEST_CASE("energy formula") {
  CHECK(energy_wang(sigma_spec(1.0, 0.0)) == Approx(0.5).epsilon(1e-12));
  CHECK(energy_wang(sigma_spec(0.0, 0.0)) == 0.0);
  CHECK(energy_wang(sigma_spec(0.0, 1.0)) == Approx(1.0).epsilon(1e-12));
  // Non-constant harmonics carry no energy.
  CHECK(energy_wang(lumpy_spec()) == Approx((0.8 * 2.0 + 2.0 * 0.1 * 2.0) / 4.0).epsilon(1e-12));
}

TEST_CASE("mass vector") {
  std::vector<double> radii;
  for (double R = 100.0; R <= 1e4 * 1.0001; R *= std::pow(10.0, 0.25)) radii.push_back(R);

  SUBCASE("hyperboloid") {
    const MassVector mv = mass_vector(make_hyperboloid_data(), radii);
    CHECK(std::abs(mv.E) <= 1e-12);
    CHECK(max_abs(mv.P) <= 1e-12);
  }
  SUBCASE("m = sigma agrees with the energy formula") {
    const MassVector mv = mass_vector(make_wang_data(sigma_spec(1.0, 0.0)), radii);
    CHECK(std::abs(mv.E - 0.5) <= 1e-4);
    CHECK(max_abs(mv.P) <= 1e-10);
    CHECK_FALSE(mv.divergence_warning);
  }
  SUBCASE("band-limited non-spherical spec") {
    const WangDataSpec s = lumpy_spec();
    const MassVector mv = mass_vector(make_wang_data(s), radii);
    CHECK(std::abs(mv.E - energy_wang(s)) <= 1e-3);
  }
  SUBCASE("rotationally symmetric spec has P = 0") {
    WangDataSpec s = sigma_spec(0.6, 0.2);
    s.m.sigma.add(2, 0, 0.2);
    const MassVector mv = mass_vector(make_wang_data(s), radii);
    CHECK(max_abs(mv.P) <= 1e-8);
  }
}

TEST_CASE("trapping margin of coordinate spheres") {
  const InitialData h = make_hyperboloid_data();
  CHECK(trapping_margin(h, 10.0) > 0.0);
  for (double R : {1e2, 1e3})
    CHECK(trapping_margin(h, R) * R * R == Approx(1.0).epsilon(3.0 / R));
}
