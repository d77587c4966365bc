#pragma once

#include <optional>
#include <span>
#include <vector>

#include "arfima/bias.hpp"

// Statistics computed from an observed series: trend removal, sample
// autocovariances and autocorrelations, and the periodogram.

namespace arfima {

// An observed series X_1..X_T.
struct SeriesData {
  std::vector<double> values;

  int size() const { return static_cast<int>(values.size()); }

  // Throws std::invalid_argument unless all values are finite and the
  // series has at least 4 observations.
  void validate() const;
};

// Residuals from estimating the mean function, together with the fitted
// coefficients of mu_hat_t = alpha_hat + beta_hat ztilde_t (centered
// parametrization, ztilde_t = z_t - zbar).  alpha_hat is the sample mean
// whenever the mean is estimated; beta_hat is present only for regressor
// and time-trend fits.
struct DetrendResult {
  std::vector<double> residuals;
  std::optional<double> alpha_hat;
  std::optional<double> beta_hat;
};

// Removes the mean function described by trend:
//   kKnownMean:        residuals X_t - mu, no coefficients estimated
//   kConstantUnknown:  residuals X_t - Xbar
//   kLinearRegressor:  OLS residuals on (1, z_t); z length must equal T
//   kTimeTrend:        OLS residuals on (1, t)
DetrendResult detrend(const SeriesData& series, const TrendSpec& trend);

// Sample autocovariance at lag k with divisor T - k:
//
//   gamma_hat_k = (1 / (T - k)) sum_{j=1}^{T-k} e_j e_{j+k},
//
// for 0 <= k <= T - 1.
double sample_acv(std::span<const double> residuals, int k);

// Sample autocorrelations gamma_hat_k / gamma_hat_0 at the given lags.
// Throws std::domain_error when gamma_hat_0 is zero (constant residuals).
std::vector<double> sample_acf(std::span<const double> residuals,
                               std::span<const int> lags);

// Periodogram at the Fourier frequencies w_j = 2 pi j / T:
//
//   I(w_j) = (2 pi T)^{-1} | sum_{t=1}^{T} x_t e^{i w_j t} |^2,
//
// returned for j = 1..floor(T/2).  Requires T >= 2.
std::vector<double> periodogram(std::span<const double> x);

// Same quantity evaluated by direct accumulation of the trigonometric
// sums, as an O(T^2) reference for the transform-based version.
std::vector<double> periodogram_direct(std::span<const double> x);

}  // namespace arfima
