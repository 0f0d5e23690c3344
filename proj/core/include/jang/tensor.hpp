#pragma once

#include <array>
#include <stdexcept>

namespace jang {

// Index convention throughout: 0 = r, 1 = theta, 2 = phi.
using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;
// d[k][i][j] = partial_k T_ij
using Deriv3 = std::array<Mat3, 3>;
// dd[k][l][i][j] = partial_k partial_l T_ij
using Deriv33 = std::array<Deriv3, 3>;
// gamma[k][i][j] = Gamma^k_ij
using Christoffel = std::array<Mat3, 3>;

class DegenerateMetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Mat3 zero_mat3();
Mat3 diag3(double a, double b, double c);
Deriv3 zero_deriv3();
Deriv33 zero_deriv33();

double trace_with(const Mat3& inv, const Mat3& t);
double dot(const Mat3& inv, const Vec3& a, const Vec3& b);
Vec3 raise(const Mat3& inv, const Vec3& a);

bool is_positive_definite(const Mat3& g);

/// Closed-form cofactor inverse of a symmetric 3x3 matrix. Throws
/// DegenerateMetricError unless g is positive definite.
Mat3 inverse_spd(const Mat3& g);

/// Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
Christoffel christoffel_symbols(const Mat3& g, const Deriv3& dg);
Christoffel christoffel_symbols(const Mat3& g, const Mat3& ginv, const Deriv3& dg);

/// Derivatives of the Christoffel symbols, dgamma[m][k][i][j] = d_m Gamma^k_ij.
std::array<Christoffel, 3> christoffel_derivatives(const Mat3& g, const Mat3& ginv,
                                                   const Deriv3& dg, const Deriv33& ddg);

Mat3 ricci_tensor(const Mat3& g, const Deriv3& dg, const Deriv33& ddg);
double scalar_curvature(const Mat3& g, const Deriv3& dg, const Deriv33& ddg);

/// Covariant derivative nabla_k T_ij of a symmetric 2-tensor, returned as d[k][i][j].
Deriv3 covariant_derivative(const Mat3& t, const Deriv3& dt, const Christoffel& gamma);

/// (div T)_j = g^{ik} nabla_k T_ij.
Vec3 divergence(const Mat3& ginv, const Deriv3& nabla_t);

}  // namespace jang
