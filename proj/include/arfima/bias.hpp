#pragma once

#include <span>
#include <vector>

#include "arfima/model_acf.hpp"

// Exact finite-sample expectations of sample autocovariances computed from
// regression residuals, and the small-sample correction of the theoretical
// autocorrelation function built from them.
//
// Throughout, the sample autocovariance at lag k uses divisor T - k:
//
//   gamma_hat_k = (1 / (T - k)) sum_{j=1}^{T-k} e_j e_{j+k},
//
// where e_t are the residuals from estimating the mean function, and the
// bias sign convention is E(gamma_hat_k) = gamma_k + bias.

namespace arfima {

// Mean function mu_t of the observed process and how it is estimated.
struct TrendSpec {
  enum class Kind {
    kKnownMean,        // mu_t = mu, known; residuals are X_t - mu
    kConstantUnknown,  // mu_t = mu, estimated by the sample mean
    kLinearRegressor,  // mu_t = alpha + beta z_t, z supplied, OLS residuals
    kTimeTrend,        // mu_t = alpha + beta t, OLS residuals
  };

  Kind kind = Kind::kConstantUnknown;
  double mu = 0.0;                // kKnownMean only
  std::vector<double> regressor;  // kLinearRegressor only; length T

  static TrendSpec known_mean(double mu);
  static TrendSpec constant_unknown();
  static TrendSpec linear_regressor(std::vector<double> z);
  static TrendSpec time_trend();
};

// Exact values of E(gamma_hat_k) for a series of length T whose
// autocovariances are acv (which must extend to lag T - 1), when the
// unknown constant mean is estimated by the sample mean.  Evaluated in
// O(T) through
//
//   E(gamma_hat_k) = gamma_k - ((T + k)/(T - k)) V + 2 S_k / (T (T - k)),
//   V   = [T gamma_0 + 2 sum_{i=1}^{T-1} (T - i) gamma_i] / T^2,
//   S_k = k gamma_0 + sum_{m=1}^{T-1} c_{k,m} gamma_m,
//   c_{k,m} = max(0, k - m) + min(k, T - m).
double expected_acv_constant_mean(const AcvSequence& acv, int T, int k);

// Exact E(gamma_hat_k) when mu_t = alpha + beta z_t is estimated by OLS on
// an arbitrary regressor z (length T, not all values equal).  Evaluated in
// O(T^2) from the centered regressor ztilde_t = z_t - zbar.
double expected_acv_linear_regressor(const AcvSequence& acv, int T, int k,
                                     std::span<const double> z);

// Exact E(gamma_hat_k) for the time trend z_t = t.  Algebraically equal to
// expected_acv_linear_regressor with that regressor, but evaluated in O(T)
// using sum ztilde_t^2 = (T^3 - T)/12 and closed-form sums over t of the
// centered-time weights.
double expected_acv_time_trend(const AcvSequence& acv, int T, int k);

// Bias of the sample autocovariance in autocorrelation units under an
// estimated constant mean, for a process with unit variance and
// autocorrelations acf (extending to lag T - 1):
//
//   B_{T,k} = E(gamma_hat_k) - rho_k  when gamma_0 = 1,
//
// so that E(gamma_hat_k) = gamma_0 (rho_k + B_{T,k}) in general.  For white
// noise B_{T,k} = -1/T at every lag.
double bias_rho(const AcfSequence& acf, int T, int k);

// Weights w_{T,k,0..T-1} expressing the same bias as a linear functional of
// the autocorrelations: bias_rho = sum_{i=0}^{T-1} w_{T,k,i} rho_i.  The
// weights satisfy sum_i |w_{T,k,i}| <= (T+k)/(T-k) + k/(T-k) and
// sum_i w_{T,k,i} = -1 exactly.
std::vector<double> bias_weights(int T, int k);

// Small-sample autocovariance and autocorrelation structure of a model
// observed through estimated-trend residuals.
struct BiasProfile {
  int T = 0;
  std::vector<int> lags;
  std::vector<double> gamma;          // theoretical gamma_k
  std::vector<double> expected_acv;   // E(gamma_hat_k)
  std::vector<double> bias_gamma;     // E(gamma_hat_k) - gamma_k
  std::vector<double> bias_rho;       // bias_gamma / gamma_0
  std::vector<double> corrected_rho;  // E(gamma_hat_k) / E(gamma_hat_0)
};

// Evaluates the profile above for the given model at the given lags (each
// in [0, T - 1]).  Under kKnownMean the residuals have exactly mean zero,
// the sample autocovariance is unbiased, and corrected_rho equals the
// theoretical autocorrelation.
BiasProfile corrected_acf(const ModelSpec& model, int T,
                          const TrendSpec& trend, std::span<const int> lags);

}  // namespace arfima
