#include "jang/tensor.hpp"

#include <cmath>

namespace jang {

Mat3 zero_mat3() { return Mat3{}; }

Mat3 diag3(double a, double b, double c) {
  Mat3 m{};
  m[0][0] = a;
  m[1][1] = b;
  m[2][2] = c;
  return m;
}

Deriv3 zero_deriv3() { return Deriv3{}; }
Deriv33 zero_deriv33() { return Deriv33{}; }

double trace_with(const Mat3& inv, const Mat3& t) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += inv[i][j] * t[i][j];
  return s;
}

double dot(const Mat3& inv, const Vec3& a, const Vec3& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += inv[i][j] * a[i] * b[j];
  return s;
}

Vec3 raise(const Mat3& inv, const Vec3& a) {
  Vec3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i] += inv[i][j] * a[j];
  return out;
}

bool is_positive_definite(const Mat3& g) {
  const double m1 = g[0][0];
  const double m2 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  const double m3 = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
                    g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
                    g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
  return m1 > 0.0 && m2 > 0.0 && m3 > 0.0 && std::isfinite(m3);
}

Mat3 inverse_spd(const Mat3& g) {
  if (!is_positive_definite(g)) throw DegenerateMetricError("metric is not positive definite");
  Mat3 c{};
  c[0][0] = g[1][1] * g[2][2] - g[1][2] * g[2][1];
  c[0][1] = g[0][2] * g[2][1] - g[0][1] * g[2][2];
  c[0][2] = g[0][1] * g[1][2] - g[0][2] * g[1][1];
  c[1][1] = g[0][0] * g[2][2] - g[0][2] * g[2][0];
  c[1][2] = g[0][2] * g[1][0] - g[0][0] * g[1][2];
  c[2][2] = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  const double det = g[0][0] * c[0][0] + g[0][1] * c[0][1] + g[0][2] * c[0][2];
  Mat3 inv{};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      inv[i][j] = c[i][j] / det;
      inv[j][i] = inv[i][j];
    }
  return inv;
}

Christoffel christoffel_symbols(const Mat3& g, const Deriv3& dg) {
  return christoffel_symbols(g, inverse_spd(g), dg);
}

Christoffel christoffel_symbols(const Mat3&, const Mat3& ginv, const Deriv3& dg) {
  // lowered[l][i][j] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
  Christoffel lowered{};
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        lowered[l][i][j] = 0.5 * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
  Christoffel gamma{};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l) s += ginv[k][l] * lowered[l][i][j];
        gamma[k][i][j] = s;
        gamma[k][j][i] = s;
      }
  return gamma;
}

std::array<Christoffel, 3> christoffel_derivatives(const Mat3&, const Mat3& ginv, const Deriv3& dg,
                                                   const Deriv33& ddg) {
  // d_m g^{kl} = -g^{ka} d_m g_ab g^{bl}
  std::array<Mat3, 3> dginv{};
  for (int m = 0; m < 3; ++m)
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        double s = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) s -= ginv[k][a] * dg[m][a][b] * ginv[b][l];
        dginv[m][k][l] = s;
      }
  Christoffel lowered{};
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        lowered[l][i][j] = 0.5 * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);

  std::array<Christoffel, 3> out{};
  for (int m = 0; m < 3; ++m) {
    Christoffel dlow{};
    for (int l = 0; l < 3; ++l)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          dlow[l][i][j] = 0.5 * (ddg[m][i][j][l] + ddg[m][j][i][l] - ddg[m][l][i][j]);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double s = 0.0;
          for (int l = 0; l < 3; ++l) s += dginv[m][k][l] * lowered[l][i][j] + ginv[k][l] * dlow[l][i][j];
          out[m][k][i][j] = s;
        }
  }
  return out;
}

Mat3 ricci_tensor(const Mat3& g, const Deriv3& dg, const Deriv33& ddg) {
  const Mat3 ginv = inverse_spd(g);
  const Christoffel gam = christoffel_symbols(g, ginv, dg);
  const auto dgam = christoffel_derivatives(g, ginv, dg, ddg);
  Mat3 ric{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) {
        s += dgam[k][k][i][j] - dgam[j][k][i][k];
        for (int l = 0; l < 3; ++l) s += gam[k][k][l] * gam[l][i][j] - gam[k][j][l] * gam[l][i][k];
      }
      ric[i][j] = s;
    }
  return ric;
}

double scalar_curvature(const Mat3& g, const Deriv3& dg, const Deriv33& ddg) {
  return trace_with(inverse_spd(g), ricci_tensor(g, dg, ddg));
}

Deriv3 covariant_derivative(const Mat3& t, const Deriv3& dt, const Christoffel& gamma) {
  Deriv3 out{};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = dt[k][i][j];
        for (int l = 0; l < 3; ++l) s -= gamma[l][k][i] * t[l][j] + gamma[l][k][j] * t[i][l];
        out[k][i][j] = s;
      }
  return out;
}

Vec3 divergence(const Mat3& ginv, const Deriv3& nabla_t) {
  Vec3 out{};
  for (int j = 0; j < 3; ++j) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) s += ginv[i][k] * nabla_t[k][i][j];
    out[j] = s;
  }
  return out;
}

}  // namespace jang
