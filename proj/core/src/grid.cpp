#include "jang/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/legendre.hpp>

namespace jang {

RadialGrid::RadialGrid(std::vector<double> nodes, Spacing mode) : nodes_(std::move(nodes)), mode_(mode) {
  if (nodes_.size() < 2) throw std::invalid_argument("radial grid needs at least two nodes");
  if (!(nodes_.front() > 0.0)) throw std::invalid_argument("radial grid must start at r > 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1])) throw std::invalid_argument("radial grid nodes must increase strictly");
  if (mode_ == Spacing::logarithmic) {
    const double q = nodes_[1] / nodes_[0];
    for (std::size_t i = 1; i + 1 < nodes_.size(); ++i) {
      const double qi = nodes_[i + 1] / nodes_[i];
      if (std::abs(qi - q) > 1e-12 * q) throw std::invalid_argument("logarithmic grid ratio is not constant");
    }
  }
}

RadialGrid RadialGrid::uniform(double r_first, double r_last, std::size_t n) {
  if (n < 2 || !(r_last > r_first)) throw std::invalid_argument("bad uniform grid bounds");
  std::vector<double> x(n);
  const double h = (r_last - r_first) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = r_first + h * static_cast<double>(i);
  x.back() = r_last;
  return RadialGrid(std::move(x), Spacing::uniform);
}

RadialGrid RadialGrid::logarithmic(double r_first, double r_last, std::size_t n) {
  if (n < 2 || !(r_first > 0.0) || !(r_last > r_first)) throw std::invalid_argument("bad logarithmic grid bounds");
  std::vector<double> x(n);
  const double s0 = std::log(r_first);
  const double ds = (std::log(r_last) - s0) / static_cast<double>(n - 1);
  // Multiplying by a fixed ratio keeps the ratio invariant tight.
  const double q = std::exp(ds);
  x[0] = r_first;
  for (std::size_t i = 1; i < n; ++i) x[i] = x[i - 1] * q;
  return RadialGrid(std::move(x), Spacing::logarithmic);
}

std::size_t RadialGrid::lower_index(double r) const {
  return static_cast<std::size_t>(std::lower_bound(nodes_.begin(), nodes_.end(), r) - nodes_.begin());
}

std::pair<std::size_t, std::size_t> RadialGrid::index_range(double a, double b) const {
  const auto first = std::lower_bound(nodes_.begin(), nodes_.end(), a);
  const auto last = std::upper_bound(nodes_.begin(), nodes_.end(), b);
  return {static_cast<std::size_t>(first - nodes_.begin()), static_cast<std::size_t>(last - nodes_.begin())};
}

RadialGrid RadialGrid::refined() const {
  const std::size_t n = 2 * (nodes_.size() - 1) + 1;
  return mode_ == Spacing::logarithmic ? logarithmic(front(), back(), n) : uniform(front(), back(), n);
}

SphereGrid::SphereGrid(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("sphere grid degree must be non-negative");
  const int nt = degree + 1;
  const int np = 2 * degree + 2;

  // boost returns the non-negative zeros of P_n; mirror them.
  const auto pos = boost::math::legendre_p_zeros<double>(nt);
  std::vector<double> x;
  for (double z : pos) {
    x.push_back(z);
    if (z > 0.0) x.push_back(-z);
  }
  std::sort(x.begin(), x.end(), std::greater<>());  // theta increasing
  std::vector<double> wt(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dp = boost::math::legendre_p_prime(nt, x[i]);
    wt[i] = 2.0 / ((1.0 - x[i] * x[i]) * dp * dp);
  }

  theta_.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) theta_[i] = std::acos(x[i]);
  phi_.resize(static_cast<std::size_t>(np));
  const double dphi = 2.0 * std::numbers::pi / np;
  for (int j = 0; j < np; ++j) phi_[static_cast<std::size_t>(j)] = dphi * j;

  weights_.resize(theta_.size() * phi_.size());
  for (std::size_t i = 0; i < theta_.size(); ++i)
    for (std::size_t j = 0; j < phi_.size(); ++j) weights_[i * phi_.size() + j] = wt[i] * dphi;
}

double sphere_integrate(const SphereGrid& grid, std::span<const double> samples) {
  if (samples.size() != grid.size()) throw std::invalid_argument("sample count does not match sphere grid");
  double s = 0.0;
  const auto& w = grid.weights();
  for (std::size_t i = 0; i < samples.size(); ++i) s += w[i] * samples[i];
  return s;
}

}  // namespace jang
