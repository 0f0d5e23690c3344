#include "jang/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace jang {

AngularJet& AngularJet::operator+=(const AngularJet& o) {
  v += o.v;
  t += o.t;
  p += o.p;
  tt += o.tt;
  tp += o.tp;
  pp += o.pp;
  ttt += o.ttt;
  ttp += o.ttp;
  tpp += o.tpp;
  ppp += o.ppp;
  return *this;
}

AngularJet& AngularJet::operator*=(double s) {
  v *= s;
  t *= s;
  p *= s;
  tt *= s;
  tp *= s;
  pp *= s;
  ttt *= s;
  ttp *= s;
  tpp *= s;
  ppp *= s;
  return *this;
}

AngularJet operator+(AngularJet a, const AngularJet& b) { return a += b; }
AngularJet operator-(AngularJet a, const AngularJet& b) { return a += (-1.0) * b; }
AngularJet operator*(double s, AngularJet a) { return a *= s; }

AngularJet multiply_theta(double w, double wt, double wtt, double wttt, const AngularJet& j) {
  AngularJet o;
  o.v = w * j.v;
  o.t = wt * j.v + w * j.t;
  o.p = w * j.p;
  o.tt = wtt * j.v + 2.0 * wt * j.t + w * j.tt;
  o.tp = wt * j.p + w * j.tp;
  o.pp = w * j.pp;
  o.ttt = wttt * j.v + 3.0 * wtt * j.t + 3.0 * wt * j.tt + w * j.ttt;
  o.ttp = wtt * j.p + 2.0 * wt * j.tp + w * j.ttp;
  o.tpp = wt * j.pp + w * j.tpp;
  o.ppp = w * j.ppp;
  return o;
}

HarmonicCoeffs::HarmonicCoeffs(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("harmonic degree must be non-negative");
  c_.assign(static_cast<std::size_t>((degree + 1) * (degree + 1)), 0.0);
}

double HarmonicCoeffs::get(int l, int m) const {
  if (l < 0 || l > degree_ || std::abs(m) > l) return 0.0;
  return c_[index(l, m)];
}

void HarmonicCoeffs::set(int l, int m, double value) {
  if (l < 0 || std::abs(m) > l) throw std::out_of_range("harmonic index out of range");
  if (l > degree_) *this = padded(l);
  c_[index(l, m)] = value;
}

void HarmonicCoeffs::add(int l, int m, double value) { set(l, m, get(l, m) + value); }

HarmonicCoeffs HarmonicCoeffs::laplacian() const {
  HarmonicCoeffs out(degree_);
  for (int l = 0; l <= degree_; ++l)
    for (int m = -l; m <= l; ++m) out.c_[index(l, m)] = -static_cast<double>(l * (l + 1)) * c_[index(l, m)];
  return out;
}

HarmonicCoeffs HarmonicCoeffs::scaled(double s) const {
  HarmonicCoeffs out = *this;
  for (double& v : out.c_) v *= s;
  return out;
}

HarmonicCoeffs HarmonicCoeffs::padded(int degree) const {
  if (degree <= degree_) return *this;
  HarmonicCoeffs out(degree);
  std::copy(c_.begin(), c_.end(), out.c_.begin());
  return out;
}

bool HarmonicCoeffs::is_zero(double tol) const {
  return std::all_of(c_.begin(), c_.end(), [tol](double v) { return std::abs(v) <= tol; });
}

bool HarmonicCoeffs::is_constant(double tol) const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (std::abs(c_[i]) > tol) return false;
  return true;
}

double HarmonicCoeffs::max_abs_coefficient() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> normalized_legendre(int degree, double theta) {
  const int L = degree;
  std::vector<double> P(static_cast<std::size_t>((L + 1) * (L + 1)), 0.0);
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  auto at = [&](int l, int m) -> double& { return P[HarmonicCoeffs::index(l, m)]; };
  at(0, 0) = 0.5 / std::sqrt(std::numbers::pi);
  for (int m = 1; m <= L; ++m) at(m, m) = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * at(m - 1, m - 1);
  for (int m = 0; m < L; ++m) at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * x * at(m, m);
  for (int m = 0; m <= L; ++m)
    for (int l = m + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l * l - m * m)));
      const double b = std::sqrt((static_cast<double>((l - 1) * (l - 1) - m * m)) / (4.0 * (l - 1) * (l - 1) - 1.0));
      at(l, m) = a * (x * at(l - 1, m) - b * at(l - 2, m));
    }
  return P;
}

namespace {

struct LegendreJet {
  double v, d1, d2, d3;
};

// theta-derivatives of Pbar_lm from the lowering relation and the Legendre equation.
LegendreJet legendre_jet(const std::vector<double>& P, int l, int m, double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double v = P[HarmonicCoeffs::index(l, m)];
  const double prev = (l - 1 >= m) ? P[HarmonicCoeffs::index(l - 1, m)] : 0.0;
  const double k = (l - 1 >= m) ? std::sqrt((2.0 * l + 1.0) * (l - m) * (l + m) / (2.0 * l - 1.0)) : 0.0;
  const double d1 = (l * c * v - k * prev) / s;
  const double lam = static_cast<double>(l * (l + 1));
  const double m2 = static_cast<double>(m * m);
  const double d2 = -(c / s) * d1 - (lam - m2 / (s * s)) * v;
  const double d3 = d1 / (s * s) - (c / s) * d2 - (lam - m2 / (s * s)) * d1 - 2.0 * m2 * c / (s * s * s) * v;
  return {v, d1, d2, d3};
}

}  // namespace

double real_harmonic(int l, int m, double theta, double phi) {
  const auto P = normalized_legendre(l, theta);
  const int am = std::abs(m);
  const double v = P[HarmonicCoeffs::index(l, am)];
  if (m == 0) return v;
  return std::numbers::sqrt2 * v * (m > 0 ? std::cos(am * phi) : std::sin(am * phi));
}

double HarmonicCoeffs::evaluate(double theta, double phi) const {
  const auto P = normalized_legendre(degree_, theta);
  double s = 0.0;
  for (int l = 0; l <= degree_; ++l) {
    s += c_[index(l, 0)] * P[index(l, 0)];
    for (int m = 1; m <= l; ++m) {
      const double base = std::numbers::sqrt2 * P[index(l, m)];
      s += base * (c_[index(l, m)] * std::cos(m * phi) + c_[index(l, -m)] * std::sin(m * phi));
    }
  }
  return s;
}

AngularJet HarmonicCoeffs::jet(double theta, double phi) const {
  const auto P = normalized_legendre(degree_, theta);
  AngularJet out;
  for (int l = 0; l <= degree_; ++l) {
    for (int m = 0; m <= l; ++m) {
      const double a = c_[index(l, m)];
      const double b = (m > 0) ? c_[index(l, -m)] : 0.0;
      if (a == 0.0 && b == 0.0) continue;
      const LegendreJet q = legendre_jet(P, l, m, theta);
      const double w = (m == 0) ? 1.0 : std::numbers::sqrt2;
      const double cm = std::cos(m * phi);
      const double sm = std::sin(m * phi);
      const double md = static_cast<double>(m);
      // F(phi) = a cos(m phi) + b sin(m phi) and its phi derivatives
      const double F0 = a * cm + b * sm;
      const double F1 = md * (-a * sm + b * cm);
      const double F2 = -md * md * F0;
      const double F3 = -md * md * F1;
      out.v += w * q.v * F0;
      out.t += w * q.d1 * F0;
      out.p += w * q.v * F1;
      out.tt += w * q.d2 * F0;
      out.tp += w * q.d1 * F1;
      out.pp += w * q.v * F2;
      out.ttt += w * q.d3 * F0;
      out.ttp += w * q.d2 * F1;
      out.tpp += w * q.d1 * F2;
      out.ppp += w * q.v * F3;
    }
  }
  return out;
}

std::vector<double> HarmonicCoeffs::synthesize(const SphereGrid& grid) const {
  std::vector<double> out(grid.size());
  const std::size_t np = grid.n_phi();
  for (std::size_t i = 0; i < grid.n_theta(); ++i) {
    const auto P = normalized_legendre(degree_, grid.theta()[i]);
    for (std::size_t j = 0; j < np; ++j) {
      const double phi = grid.phi()[j];
      double s = 0.0;
      for (int l = 0; l <= degree_; ++l) {
        s += c_[index(l, 0)] * P[index(l, 0)];
        for (int m = 1; m <= l; ++m)
          s += std::numbers::sqrt2 * P[index(l, m)] *
               (c_[index(l, m)] * std::cos(m * phi) + c_[index(l, -m)] * std::sin(m * phi));
      }
      out[i * np + j] = s;
    }
  }
  return out;
}

HarmonicCoeffs HarmonicCoeffs::analyze(const SphereGrid& grid, std::span<const double> samples, int degree) {
  if (samples.size() != grid.size()) throw std::invalid_argument("sample count does not match sphere grid");
  if (degree > grid.degree()) throw std::invalid_argument("analysis degree exceeds the grid degree");
  HarmonicCoeffs out(degree);
  const std::size_t np = grid.n_phi();
  for (std::size_t i = 0; i < grid.n_theta(); ++i) {
    const auto P = normalized_legendre(degree, grid.theta()[i]);
    for (std::size_t j = 0; j < np; ++j) {
      const std::size_t k = i * np + j;
      const double wf = grid.weight_at(k) * samples[k];
      const double phi = grid.phi()[j];
      for (int l = 0; l <= degree; ++l) {
        out.c_[index(l, 0)] += wf * P[index(l, 0)];
        for (int m = 1; m <= l; ++m) {
          const double base = std::numbers::sqrt2 * P[index(l, m)] * wf;
          out.c_[index(l, m)] += base * std::cos(m * phi);
          out.c_[index(l, -m)] += base * std::sin(m * phi);
        }
      }
    }
  }
  return out;
}

HarmonicCoeffs HarmonicCoeffs::rotated_z(double angle) const {
  HarmonicCoeffs out = *this;
  for (int l = 1; l <= degree_; ++l)
    for (int m = 1; m <= l; ++m) {
      const double a = c_[index(l, m)];
      const double b = c_[index(l, -m)];
      const double cg = std::cos(m * angle);
      const double sg = std::sin(m * angle);
      out.c_[index(l, m)] = a * cg - b * sg;
      out.c_[index(l, -m)] = a * sg + b * cg;
    }
  return out;
}

HarmonicCoeffs& HarmonicCoeffs::operator+=(const HarmonicCoeffs& o) {
  if (o.degree_ > degree_) *this = padded(o.degree_);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

HarmonicCoeffs operator+(HarmonicCoeffs a, const HarmonicCoeffs& b) { return a += b; }

HarmonicCoeffs solve_sphere_poisson(const HarmonicCoeffs& rhs, double tolerance) {
  if (std::abs(rhs.get(0, 0)) > tolerance)
    throw UnsolvableRhsError("right-hand side has nonzero mean; the sphere Poisson problem has no solution");
  HarmonicCoeffs psi(rhs.degree());
  for (int l = 1; l <= rhs.degree(); ++l)
    for (int m = -l; m <= l; ++m) psi.set(l, m, -rhs.get(l, m) / static_cast<double>(l * (l + 1)));
  return psi;
}

double sphere_laplacian(const AngularJet& j, double theta) {
  const double s = std::sin(theta);
  return j.tt + std::cos(theta) / s * j.t + j.pp / (s * s);
}

}  // namespace jang
