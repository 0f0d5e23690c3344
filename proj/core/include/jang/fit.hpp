#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace jang {

class SignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FitInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class DecayModel {
  power,      // c * r^-p
  power_log,  // c * r^-p * ln r
};

struct DecayFit {
  double c = 0.0;
  double p = 0.0;
  double residual = 0.0;  // max relative residual of the fitted model
};

/// Least-squares fit of samples against a decaying model in log-log
/// coordinates. Requires at least 10 samples spanning a decade. Samples must
/// share one strict sign; negative data returns a negative coefficient.
/// With `fixed_exponent` only the coefficient is fitted.
DecayFit fit_decay_tail(std::span<const double> r, std::span<const double> y,
                        DecayModel model = DecayModel::power,
                        std::optional<double> fixed_exponent = std::nullopt);

/// Convenience: restrict to the nodes with r in [r_lo, r_hi] first.
DecayFit fit_decay_window(std::span<const double> r, std::span<const double> y, double r_lo, double r_hi,
                          DecayModel model = DecayModel::power,
                          std::optional<double> fixed_exponent = std::nullopt);

/// Ordinary least squares for y ~ sum_k beta_k * columns[k]. Returns the
/// coefficients; `max_residual` (optional) receives max |y - fit|.
std::vector<double> least_squares(const std::vector<std::vector<double>>& columns, std::span<const double> y,
                                  double* max_residual = nullptr);

struct Extrapolation {
  double limit = 0.0;
  double c = 0.0;      // coefficient of the leading R^-rate correction
  double rate = 1.0;
  double residual = 0.0;  // max |value - model| over the samples
  bool converged = true;
};

/// value(R) = limit + c * R^-rate with a fixed rate.
Extrapolation extrapolate_limit(std::span<const double> radii, std::span<const double> values, double rate = 1.0);

/// Same model with the rate chosen by Brent minimization over [rate_lo, rate_hi].
Extrapolation extrapolate_free_rate(std::span<const double> radii, std::span<const double> values,
                                    double rate_lo = 0.1, double rate_hi = 4.0);

}  // namespace jang
