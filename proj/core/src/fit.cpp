#include "jang/fit.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

namespace jang {

std::vector<double> least_squares(const std::vector<std::vector<double>>& columns, std::span<const double> y,
                                  double* max_residual) {
  const auto n = static_cast<Eigen::Index>(y.size());
  const auto k = static_cast<Eigen::Index>(columns.size());
  if (k == 0 || n < k) throw FitInputError("least squares needs at least as many samples as unknowns");
  Eigen::MatrixXd A(n, k);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    b(i) = y[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < k; ++j) A(i, j) = columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  }
  // Column equilibration keeps mixed scales (1, ln r, 1/r) well conditioned.
  Eigen::VectorXd scale(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    scale(j) = A.col(j).norm();
    if (scale(j) == 0.0) scale(j) = 1.0;
    A.col(j) /= scale(j);
  }
  const Eigen::VectorXd beta = A.colPivHouseholderQr().solve(b);
  if (max_residual) *max_residual = (A * beta - b).cwiseAbs().maxCoeff();
  std::vector<double> out(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) out[static_cast<std::size_t>(j)] = beta(j) / scale(j);
  return out;
}

DecayFit fit_decay_tail(std::span<const double> r, std::span<const double> y, DecayModel model,
                        std::optional<double> fixed_exponent) {
  if (r.size() != y.size()) throw FitInputError("radius and sample counts differ");
  if (r.size() < 10) throw FitInputError("tail fit needs at least 10 samples");
  const auto [rmin, rmax] = std::minmax_element(r.begin(), r.end());
  if (!(*rmin > 0.0) || *rmax < 10.0 * *rmin * (1.0 - 1e-12))
    throw FitInputError("tail fit samples must span at least one decade of r > 0");
  if (model == DecayModel::power_log && !(*rmin > 1.0))
    throw FitInputError("log model needs r > 1");

  const bool negative = y[0] < 0.0;
  for (double v : y)
    if (v == 0.0 || (v < 0.0) != negative || !std::isfinite(v))
      throw SignError("tail samples have mixed sign or zeros; fit the absolute deviation");

  const std::size_t n = r.size();
  std::vector<double> lr(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lr[i] = std::log(r[i]);
    ly[i] = std::log(std::abs(y[i]));
    if (model == DecayModel::power_log) ly[i] -= std::log(lr[i]);
  }

  DecayFit fit;
  if (fixed_exponent) {
    fit.p = *fixed_exponent;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += ly[i] + fit.p * lr[i];
    fit.c = std::exp(s / static_cast<double>(n));
  } else {
    std::vector<double> ones(n, 1.0), neg(n);
    for (std::size_t i = 0; i < n; ++i) neg[i] = -lr[i];
    const auto beta = least_squares({ones, neg}, ly);
    fit.c = std::exp(beta[0]);
    fit.p = beta[1];
  }
  if (negative) fit.c = -fit.c;

  for (std::size_t i = 0; i < n; ++i) {
    double model_value = fit.c * std::pow(r[i], -fit.p);
    if (model == DecayModel::power_log) model_value *= lr[i];
    fit.residual = std::max(fit.residual, std::abs(model_value - y[i]) / std::abs(y[i]));
  }
  return fit;
}

DecayFit fit_decay_window(std::span<const double> r, std::span<const double> y, double r_lo, double r_hi,
                          DecayModel model, std::optional<double> fixed_exponent) {
  std::vector<double> rr, yy;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= r_lo * (1.0 - 1e-12) && r[i] <= r_hi * (1.0 + 1e-12)) {
      rr.push_back(r[i]);
      yy.push_back(y[i]);
    }
  return fit_decay_tail(rr, yy, model, fixed_exponent);
}

namespace {

Extrapolation fit_with_rate(std::span<const double> radii, std::span<const double> values, double rate,
                            double* sum_sq) {
  const std::size_t n = radii.size();
  std::vector<double> ones(n, 1.0), inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i] = std::pow(radii[i], -rate);
  Extrapolation e;
  const auto beta = least_squares({ones, inv}, values, &e.residual);
  e.limit = beta[0];
  e.c = beta[1];
  e.rate = rate;
  if (sum_sq) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = values[i] - e.limit - e.c * inv[i];
      s += d * d;
    }
    *sum_sq = s;
  }
  return e;
}

void check_extrapolation_input(std::span<const double> radii, std::span<const double> values) {
  if (radii.size() != values.size()) throw FitInputError("radius and value counts differ");
  if (radii.size() < 3) throw FitInputError("extrapolation needs at least three radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw FitInputError("extrapolation radii must increase");
}

}  // namespace

Extrapolation extrapolate_limit(std::span<const double> radii, std::span<const double> values, double rate) {
  check_extrapolation_input(radii, values);
  return fit_with_rate(radii, values, rate, nullptr);
}

Extrapolation extrapolate_free_rate(std::span<const double> radii, std::span<const double> values, double rate_lo,
                                    double rate_hi) {
  check_extrapolation_input(radii, values);
  if (radii.size() < 4) throw FitInputError("free-rate extrapolation needs at least four radii");
  auto objective = [&](double rate) {
    double s = 0.0;
    fit_with_rate(radii, values, rate, &s);
    return s;
  };
  const auto best = boost::math::tools::brent_find_minima(objective, rate_lo, rate_hi, 40);
  return fit_with_rate(radii, values, best.first, nullptr);
}

}  // namespace jang
