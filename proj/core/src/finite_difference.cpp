#include "jang/finite_difference.hpp"

#include <algorithm>
#include <stdexcept>

namespace jang {

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x, int max_order) {
  const int n = static_cast<int>(x.size());
  if (n == 0 || max_order < 0 || max_order >= n) throw std::invalid_argument("stencil too small for derivative order");
  std::vector<std::vector<double>> c(static_cast<std::size_t>(max_order + 1), std::vector<double>(x.size(), 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

std::vector<double> fd_derivative(std::span<const double> x, std::span<const double> y, int order, int width) {
  if (x.size() != y.size()) throw std::invalid_argument("fd_derivative: size mismatch");
  const auto n = static_cast<int>(x.size());
  if (width > n || width <= order) throw std::invalid_argument("fd_derivative: stencil wider than data");
  std::vector<double> out(x.size());
  const int half = width / 2;
  for (int i = 0; i < n; ++i) {
    const int first = std::clamp(i - half, 0, n - width);
    const auto xs = x.subspan(static_cast<std::size_t>(first), static_cast<std::size_t>(width));
    const auto w = fornberg_weights(x[static_cast<std::size_t>(i)], xs, order);
    double s = 0.0;
    for (int j = 0; j < width; ++j) s += w[static_cast<std::size_t>(order)][static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(first + j)];
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

ThreePoint three_point(double xm, double x0, double xp) {
  const double h0 = x0 - xm;
  const double h1 = xp - x0;
  ThreePoint t{};
  t.d1[0] = -h1 / (h0 * (h0 + h1));
  t.d1[1] = (h1 - h0) / (h0 * h1);
  t.d1[2] = h0 / (h1 * (h0 + h1));
  t.d2[0] = 2.0 / (h0 * (h0 + h1));
  t.d2[1] = -2.0 / (h0 * h1);
  t.d2[2] = 2.0 / (h1 * (h0 + h1));
  return t;
}

}  // namespace jang
