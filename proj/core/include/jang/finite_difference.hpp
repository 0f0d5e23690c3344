#pragma once

#include <span>
#include <vector>

namespace jang {

/// Fornberg's algorithm: weights w[d][j] such that sum_j w[d][j] f(x[j])
/// approximates the d-th derivative at x0, for d = 0..max_order.
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x, int max_order);

/// Derivative of sampled data at every node, using a stencil of `width`
/// consecutive nodes (centered in the interior, shifted at the ends).
/// width = 3 gives the second-order central / one-sided formulas.
std::vector<double> fd_derivative(std::span<const double> x, std::span<const double> y, int order, int width = 3);

/// Weights of the three-point stencils (i-1, i, i+1) on a nonuniform grid,
/// for the first and second derivative at interior node i.
struct ThreePoint {
  double d1[3];
  double d2[3];
};
ThreePoint three_point(double xm, double x0, double xp);

}  // namespace jang
