#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "jang/fit.hpp"
#include "jang/grid.hpp"
#include "jang/harmonics.hpp"
#include "jang/initial_data.hpp"
#include "jang/tensor.hpp"

using namespace jang;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Christoffel hyperbolic_christoffel(double r, double theta) {
  Mat3 b;
  Deriv3 db;
  hyperbolic_metric(r, theta, b, db);
  return christoffel_symbols(b, db);
}

std::vector<double> samples_of(const SphereGrid& s, double (*fn)(double, double)) {
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = fn(s.theta_at(i), s.phi_at(i));
  return out;
}

}  // namespace

TEST_CASE("christoffel symbols of the hyperbolic metric") {
  const Christoffel g1 = hyperbolic_christoffel(1.0, 0.7);
  CHECK(g1[0][0][0] == Approx(-0.5).epsilon(1e-14));

  // Gamma^r_{theta theta} = -(1/2)(1 + r^2) d_r(r^2) = -10 at r = 2.
  const Christoffel g2 = hyperbolic_christoffel(2.0, 0.7);
  CHECK(g2[0][1][1] == Approx(-10.0).epsilon(1e-14));
  CHECK(g2[0][2][2] == Approx(-10.0 * std::sin(0.7) * std::sin(0.7)).epsilon(1e-14));

  SUBCASE("block structure: no r-mu mixing") {
    for (int mu = 1; mu < 3; ++mu) {
      CHECK(g2[0][0][mu] == 0.0);
      CHECK(g2[0][mu][0] == 0.0);
    }
  }
}

TEST_CASE("christoffel symbols are symmetric in the lower indices") {
  // A generic positive-definite metric with arbitrary first derivatives.
  Mat3 g = {{{2.0, 0.3, 0.1}, {0.3, 1.5, -0.2}, {0.1, -0.2, 1.1}}};
  Deriv3 dg = zero_deriv3();
  double s = 0.1;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        s = std::fmod(s * 7.3 + 0.37, 1.0);
        dg[k][i][j] = dg[k][j][i] = s - 0.5;
      }
  const Christoffel c = christoffel_symbols(g, dg);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(c[k][i][j] == c[k][j][i]);
}

TEST_CASE("degenerate metric is rejected") {
  Mat3 g = diag3(1.0, 0.0, 1.0);
  CHECK_THROWS_AS(christoffel_symbols(g, zero_deriv3()), DegenerateMetricError);
  CHECK_THROWS_AS(inverse_spd(diag3(1.0, -2.0, 1.0)), DegenerateMetricError);
}

TEST_CASE("radial grid invariants") {
  const RadialGrid g = RadialGrid::logarithmic(2.0, 1e3, 400);
  CHECK(g.size() == 400);
  CHECK(g.front() == 2.0);
  CHECK(g.back() == Approx(1e3).epsilon(1e-12));
  const double q = g[1] / g[0];
  for (std::size_t i = 1; i + 1 < g.size(); ++i) CHECK(std::abs(g[i + 1] / g[i] - q) <= 1e-12 * q);
  CHECK(g.refined().size() == 799);

  CHECK_THROWS_AS(RadialGrid({1.0, 1.0, 2.0}, Spacing::uniform), std::invalid_argument);
  CHECK_THROWS_AS(RadialGrid({0.0, 1.0}, Spacing::uniform), std::invalid_argument);
  CHECK_THROWS_AS(RadialGrid({1.0, 2.0, 3.0}, Spacing::logarithmic), std::invalid_argument);
}

TEST_CASE("sphere grid weights and quadrature") {
  for (int L : {2, 8, 16}) {
    const SphereGrid s(L);
    double total = 0.0;
    for (double w : s.weights()) total += w;
    CHECK(std::abs(total - 4.0 * kPi) <= 1e-12 * 4.0 * kPi);
  }
  const SphereGrid s(16);
  const std::vector<double> one(s.size(), 1.0);
  CHECK(std::abs(sphere_integrate(s, one) - 4.0 * kPi) <= 1e-12 * 4.0 * kPi);

  const auto cos2 = samples_of(s, [](double t, double) { return std::cos(t) * std::cos(t); });
  CHECK(sphere_integrate(s, cos2) == Approx(4.0 * kPi / 3.0).epsilon(1e-13));

  SUBCASE("harmonics of degree >= 1 integrate to zero") {
    for (int l = 1; l <= 16; ++l)
      for (int m = -l; m <= l; ++m) {
        std::vector<double> y(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) y[i] = real_harmonic(l, m, s.theta_at(i), s.phi_at(i));
        CHECK(std::abs(sphere_integrate(s, y)) <= 1e-12);
      }
  }
}

TEST_CASE("harmonic orthonormality under quadrature") {
  const SphereGrid s(16);
  const int L = 8;
  std::vector<std::vector<double>> ys;
  std::vector<std::pair<int, int>> lm;
  for (int l = 0; l <= L; ++l)
    for (int m = -l; m <= l; ++m) {
      std::vector<double> y(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) y[i] = real_harmonic(l, m, s.theta_at(i), s.phi_at(i));
      ys.push_back(std::move(y));
      lm.emplace_back(l, m);
    }
  double worst = 0.0;
  for (std::size_t a = 0; a < ys.size(); ++a)
    for (std::size_t b = a; b < ys.size(); ++b) {
      std::vector<double> prod(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) prod[i] = ys[a][i] * ys[b][i];
      worst = std::max(worst, std::abs(sphere_integrate(s, prod) - (a == b ? 1.0 : 0.0)));
    }
  CHECK(worst <= 1e-11);
}

TEST_CASE("analysis inverts synthesis on band-limited functions") {
  const SphereGrid s(16);
  HarmonicCoeffs c(12);
  double v = 0.3;
  for (int l = 0; l <= 12; ++l)
    for (int m = -l; m <= l; ++m) {
      v = std::fmod(v * 3.7 + 0.11, 1.0);
      c.set(l, m, v - 0.5);
    }
  const HarmonicCoeffs back = HarmonicCoeffs::analyze(s, c.synthesize(s), 12);
  for (std::size_t i = 0; i < c.data().size(); ++i)
    CHECK(std::abs(back.data()[i] - c.data()[i]) <= 1e-10 * c.max_abs_coefficient());
}

TEST_CASE("sphere Poisson solve") {
  SUBCASE("degree-2 eigenfunction") {
    HarmonicCoeffs rhs(2);
    rhs.set(2, 1, 1.0);
    const HarmonicCoeffs psi = solve_sphere_poisson(rhs);
    CHECK(psi.get(2, 1) == Approx(-1.0 / 6.0).epsilon(1e-15));
    CHECK(psi.get(0, 0) == 0.0);
    CHECK(psi.is_zero() == false);
  }
  SUBCASE("zero right-hand side") {
    CHECK(solve_sphere_poisson(HarmonicCoeffs(4)).is_zero());
  }
  SUBCASE("Y1 + Y3, checked pointwise by quadrature") {
    HarmonicCoeffs rhs(3);
    rhs.set(1, 0, 1.0);
    rhs.set(3, 0, 1.0);
    const HarmonicCoeffs psi = solve_sphere_poisson(rhs);
    CHECK(psi.get(1, 0) == Approx(-0.5));
    CHECK(psi.get(3, 0) == Approx(-1.0 / 12.0));
    const SphereGrid s(8);
    std::vector<double> err2(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double t = s.theta_at(i), p = s.phi_at(i);
      const double d = sphere_laplacian(psi.jet(t, p), t) - rhs.evaluate(t, p);
      err2[i] = d * d;
    }
    CHECK(std::sqrt(sphere_integrate(s, err2)) <= 1e-12);
  }
  SUBCASE("nonzero mean has no solution") {
    HarmonicCoeffs rhs(2);
    rhs.set(0, 0, 1e-3);
    CHECK_THROWS_AS(solve_sphere_poisson(rhs), UnsolvableRhsError);
  }
}

TEST_CASE("Poisson round trip through the discrete Laplacian") {
  HarmonicCoeffs rhs(10);
  double v = 0.9;
  for (int l = 1; l <= 10; ++l)
    for (int m = -l; m <= l; ++m) {
      v = std::fmod(v * 5.1 + 0.23, 1.0);
      rhs.set(l, m, v - 0.5);
    }
  const HarmonicCoeffs psi = solve_sphere_poisson(rhs);
  const SphereGrid s(16);
  std::vector<double> lap(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) lap[i] = sphere_laplacian(psi.jet(s.theta_at(i), s.phi_at(i)), s.theta_at(i));
  const HarmonicCoeffs back = HarmonicCoeffs::analyze(s, lap, 10);
  for (std::size_t i = 0; i < rhs.data().size(); ++i)
    CHECK(std::abs(back.data()[i] - rhs.data()[i]) <= 1e-9 * rhs.max_abs_coefficient());
}

TEST_CASE("decay tail fits") {
  auto sample = [](double lo, double hi, std::size_t n, auto fn) {
    const RadialGrid g = RadialGrid::logarithmic(lo, hi, n);
    std::vector<double> y;
    for (double r : g.nodes()) y.push_back(fn(r));
    return std::pair{g.nodes(), y};
  };

  SUBCASE("pure power law") {
    const auto [r, y] = sample(10.0, 1000.0, 40, [](double x) { return 3.0 * std::pow(x, -2.0); });
    const DecayFit f = fit_decay_tail(r, y);
    CHECK(std::abs(f.c - 3.0) <= 1e-10);
    CHECK(std::abs(f.p - 2.0) <= 1e-10);
  }
  SUBCASE("leading power with a subleading term") {
    const auto [r, y] = sample(100.0, 1e4, 60, [](double x) { return std::pow(x, -3.0) + std::pow(x, -5.0); });
    const DecayFit f = fit_decay_tail(r, y);
    CHECK(f.p >= 2.99);
    CHECK(f.p <= 3.01);
  }
  SUBCASE("constant samples") {
    const auto [r, y] = sample(10.0, 1000.0, 20, [](double) { return 0.25; });
    CHECK(std::abs(fit_decay_tail(r, y).p) <= 1e-10);
  }
  SUBCASE("planted coefficients are recovered for several exponents") {
    for (double p : {0.5, 1.0, 3.0, 4.5})
      for (double c : {-2.0, 0.01, 7.0}) {
        const auto [r, y] = sample(5.0, 5e3, 30, [&](double x) { return c * std::pow(x, -p); });
        const DecayFit f = fit_decay_tail(r, y);
        CHECK(std::abs(f.c - c) <= 1e-10 * std::abs(c));
        CHECK(std::abs(f.p - p) <= 1e-10);
      }
  }
  SUBCASE("log model") {
    const auto [r, y] = sample(10.0, 1e4, 30, [](double x) { return 2.0 * std::log(x) / (x * x); });
    const DecayFit f = fit_decay_tail(r, y, DecayModel::power_log);
    CHECK(f.c == Approx(2.0).epsilon(1e-10));
    CHECK(f.p == Approx(2.0).epsilon(1e-10));
  }
  SUBCASE("mixed sign and zeros are refused") {
    auto [r, y] = sample(10.0, 1000.0, 20, [](double x) { return 1.0 / x; });
    y[5] = -y[5];
    CHECK_THROWS_AS(fit_decay_tail(r, y), SignError);
    y[5] = 0.0;
    CHECK_THROWS_AS(fit_decay_tail(r, y), SignError);
  }
  SUBCASE("too few samples or too short a span") {
    const auto [r, y] = sample(10.0, 1000.0, 9, [](double x) { return 1.0 / x; });
    CHECK_THROWS_AS(fit_decay_tail(r, y), FitInputError);
    const auto [r2, y2] = sample(10.0, 50.0, 20, [](double x) { return 1.0 / x; });
    CHECK_THROWS_AS(fit_decay_tail(r2, y2), FitInputError);
  }
}

TEST_CASE("limit extrapolation in 1/R") {
  std::vector<double> R, v;
  for (double x = 100.0; x <= 1e4; x *= 1.5) {
    R.push_back(x);
    v.push_back(0.5 + 3.0 / x);
  }
  const Extrapolation e = extrapolate_limit(R, v);
  CHECK(e.limit == Approx(0.5).epsilon(1e-12));
  CHECK(e.c == Approx(3.0).epsilon(1e-9));
  std::vector<double> w;
  for (double x : R) w.push_back(0.5 + 3.0 / (x * x));
  const Extrapolation f = extrapolate_free_rate(R, w);
  CHECK(f.rate == Approx(2.0).epsilon(1e-4));
  CHECK(f.limit == Approx(0.5).epsilon(1e-9));
}
