#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace jang {

enum class Spacing { uniform, logarithmic };

class RadialGrid {
 public:
  RadialGrid() = default;
  /// Validates the node invariants (strictly increasing, nodes[0] > 0, constant
  /// ratio for logarithmic spacing).
  RadialGrid(std::vector<double> nodes, Spacing mode);

  static RadialGrid uniform(double r_first, double r_last, std::size_t n);
  static RadialGrid logarithmic(double r_first, double r_last, std::size_t n);

  [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }
  [[nodiscard]] std::span<const double> span() const { return nodes_; }
  [[nodiscard]] Spacing mode() const { return mode_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return nodes_[i]; }
  [[nodiscard]] double front() const { return nodes_.front(); }
  [[nodiscard]] double back() const { return nodes_.back(); }

  /// Index of the first node >= r (size() when none).
  [[nodiscard]] std::size_t lower_index(double r) const;
  /// Indices [first, last) of the nodes inside [a, b].
  [[nodiscard]] std::pair<std::size_t, std::size_t> index_range(double a, double b) const;

  /// Same spacing mode with twice as many intervals.
  [[nodiscard]] RadialGrid refined() const;

 private:
  std::vector<double> nodes_;
  Spacing mode_ = Spacing::logarithmic;
};

/// Gauss-Legendre in cos(theta) times uniform longitude. With degree L the
/// grid integrates products of two harmonics of degree <= L exactly.
class SphereGrid {
 public:
  explicit SphereGrid(int degree = 16);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] std::size_t n_theta() const { return theta_.size(); }
  [[nodiscard]] std::size_t n_phi() const { return phi_.size(); }
  [[nodiscard]] std::size_t size() const { return theta_.size() * phi_.size(); }

  [[nodiscard]] const std::vector<double>& theta() const { return theta_; }
  [[nodiscard]] const std::vector<double>& phi() const { return phi_; }
  [[nodiscard]] double theta_at(std::size_t flat) const { return theta_[flat / phi_.size()]; }
  [[nodiscard]] double phi_at(std::size_t flat) const { return phi_[flat % phi_.size()]; }
  [[nodiscard]] double weight_at(std::size_t flat) const { return weights_[flat]; }
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }

 private:
  int degree_;
  std::vector<double> theta_;
  std::vector<double> phi_;
  std::vector<double> weights_;  // flattened (theta-major), sums to 4 pi
};

/// Quadrature over the unit sphere of samples laid out like SphereGrid::weights().
double sphere_integrate(const SphereGrid& grid, std::span<const double> samples);

}  // namespace jang
