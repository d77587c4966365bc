#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "arfima/bias.hpp"
#include "arfima/model_acf.hpp"
#include "arfima/sample_stats.hpp"

// Parameter estimation for ARFIMA models: minimum distance estimation on
// sample autocorrelations, its bias-corrected variant, the Whittle
// estimator, and exact Gaussian maximum likelihood.

namespace arfima {

enum class Method {
  kMde,      // minimum distance between sample and theoretical ACF
  kBcmde,    // minimum distance between sample ACF and its expectation
  kWhittle,  // frequency-domain approximate likelihood
  kMle,      // exact Gaussian likelihood
};

enum class Weighting {
  kIdentity,  // W = I
  kInverseC,  // W = C^{-1}, C the asymptotic covariance of the sample ACF
};

// Lowercase identifier of the method ("mde", "bcmde", "whittle", "mle"),
// and the reverse lookup, which throws std::invalid_argument for unknown
// names.
const char* method_name(Method method);
Method method_from_name(std::string_view name);

// Which parameters are free in the fit.  The AR and MA orders are given by
// p and q; d is either estimated or held fixed at d_fixed.  The free
// parameter vector is packed as (phi_1..phi_p, theta_1..theta_q[, d]).
struct FitStructure {
  int p = 0;
  int q = 0;
  bool fit_d = false;
  double d_fixed = 0.0;

  int n_free() const { return p + q + (fit_d ? 1 : 0); }
};

struct EstimationOptions {
  Method method = Method::kBcmde;
  std::vector<int> lags = {1};  // ACF lags used by kMde / kBcmde
  Weighting weighting = Weighting::kIdentity;
  double ar_bound = 0.99;  // each |phi_i| and |theta_i| below this
  double ma_bound = 0.99;
  double d_bound = 0.49;   // |d| below this
  double x_tol = 1e-8;
  double f_tol = 1e-12;
  int max_iterations = 500;
  long c_truncation = 100000;  // series length cap in asymptotic_cov_C

  // Throws std::invalid_argument unless the lags are strictly increasing
  // and at least 1, the bounds lie in (0, 1) (d_bound in (0, 0.5)), and
  // the tolerances and iteration budget are positive.
  void validate() const;
};

struct EstimateResult {
  Method method = Method::kBcmde;
  ModelSpec model;              // fitted parameters, sigma2 = sigma2_hat
  std::vector<double> params;   // the packed free parameter vector
  double objective_value = 0.0; // minimized objective (for kMle, -loglik)
  double sigma2_hat = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Packs the free parameters of model according to structure.
std::vector<double> pack_parameters(const ModelSpec& model,
                                    const FitStructure& structure);

// Builds a unit-variance ModelSpec from a packed parameter vector.
ModelSpec model_from_parameters(std::span<const double> x,
                                const FitStructure& structure);

// Minimum distance objective
//
//   S(lambda) = (rho_hat - rho(lambda))' W (rho_hat - rho(lambda)),
//
// where rho(lambda) is the theoretical ACF of model at the given lags,
// rho_hat the sample ACF at those lags, and W a row-major m x m weight
// matrix.
double mde_objective(const ModelSpec& model, std::span<const int> lags,
                     std::span<const double> rho_hat,
                     std::span<const double> weight);

// Bias-corrected variant: the theoretical ACF is replaced by the
// finite-sample target E(gamma_hat_k)/E(gamma_hat_0) for a series of length
// T observed through the given trend's residuals.
double bcmde_objective(const ModelSpec& model, int T, const TrendSpec& trend,
                       std::span<const int> lags,
                       std::span<const double> rho_hat,
                       std::span<const double> weight);

// Whittle objective concentrated over the innovation variance.  With
// g_j = 2 pi f(w_j; lambda, sigma2 = 1) at the Fourier frequencies
// w_j = 2 pi j / T, j = 1..M, and I_j the periodogram,
//
//   sigma2_hat = (2 pi / M) sum_j I_j / g_j,
//   value      = M log(sigma2_hat / 2 pi) + sum_j log g_j + M.
//
// Returns {value, sigma2_hat}; model.sigma2 is ignored.
std::pair<double, double> whittle_objective(
    const ModelSpec& model, std::span<const double> periodogram_values,
    int T);

// Exact Gaussian log-likelihood of the residual vector under model,
// concentrated over the innovation variance.  One-step prediction errors
// e_t and scaled variances r_t come from the Durbin-Levinson recursion on
// the unit-variance autocovariances; then
//
//   sigma2_hat = (1/T) sum_t e_t^2 / r_{t-1},
//   loglik     = -T/2 log(2 pi sigma2_hat) - 1/2 sum_t log r_{t-1} - T/2.
//
// Returns {loglik, sigma2_hat}; model.sigma2 is ignored.
std::pair<double, double> exact_gaussian_loglik(
    const ModelSpec& model, std::span<const double> residuals);

// Asymptotic covariance matrix (Bartlett form) of the sample ACF at the
// given lags (each >= 1), for a process with autocorrelations acf:
//
//   C_ij = sum_{l=1}^{L} u_i(l) u_j(l),
//   u_i(l) = rho_{l - k_i} + rho_{l + k_i} - 2 rho_{k_i} rho_l,
//
// truncated at L = max_terms or earlier once the terms fall below 1e-12.
// acf must extend far enough that the truncation point is reached; the
// result is row-major m x m.
std::vector<double> asymptotic_cov_C(const AcfSequence& acf,
                                     std::span<const int> lags,
                                     long max_terms = 100000);

// Estimates the free parameters of structure from the series, removing the
// trend first.  kMde and kBcmde minimize the distance objectives on the
// sample ACF of the residuals at options.lags; kWhittle minimizes the
// concentrated Whittle objective on the periodogram (of the raw series
// under kConstantUnknown, of the residuals otherwise); kMle maximizes the
// exact Gaussian likelihood of the residuals.  Under Weighting::kInverseC
// the distance estimators run twice: once with W = I, then with
// W = C^{-1} evaluated at the first-stage estimate.
EstimateResult fit(const SeriesData& series, const FitStructure& structure,
                   const TrendSpec& trend, const EstimationOptions& options);

}  // namespace arfima
