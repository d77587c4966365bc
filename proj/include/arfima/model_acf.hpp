#pragma once

#include <span>
#include <vector>

// Theoretical second-order structure of stationary ARFIMA(p, d, q) processes:
// autocovariances, autocorrelations, spectral densities, and the derivative
// of the fractional-noise autocorrelation with respect to d.

namespace arfima {

// Parameters of an ARFIMA(p, d, q) process
//
//   phi(B) (1 - B)^d (X_t - mu_t) = theta(B) a_t,   a_t ~ WN(0, sigma2),
//
// with phi(B) = 1 - phi_1 B - ... - phi_p B^p and
// theta(B) = 1 + theta_1 B + ... + theta_q B^q.  The process is stationary
// when d < 0.5 and all roots of phi lie outside the unit circle, and
// invertible when d > -0.5 and all roots of theta lie outside the unit
// circle.  ARMA and pure fractional-noise models are the special cases
// d == 0 and p == q == 0.
struct ModelSpec {
  std::vector<double> ar;     // phi_1..phi_p
  std::vector<double> ma;     // theta_1..theta_q
  double d = 0.0;
  double sigma2 = 1.0;

  int p() const { return static_cast<int>(ar.size()); }
  int q() const { return static_cast<int>(ma.size()); }

  // Throws std::invalid_argument unless d is in (-0.5, 0.5), sigma2 > 0,
  // all parameters are finite, and every root of phi(B) and theta(B) has
  // modulus greater than 1 + 1e-9.
  void validate() const;

  // True when validate() would not throw.
  bool is_valid() const;
};

// Autocovariances gamma_0..gamma_K of a stationary process.
struct AcvSequence {
  std::vector<double> values;

  int max_lag() const { return static_cast<int>(values.size()) - 1; }
  double operator[](int k) const { return values[static_cast<std::size_t>(k)]; }
};

// Autocorrelations rho_0..rho_K, with rho_0 = 1.
struct AcfSequence {
  std::vector<double> values;

  int max_lag() const { return static_cast<int>(values.size()) - 1; }
  double operator[](int k) const { return values[static_cast<std::size_t>(k)]; }
};

// Normalizes an autocovariance sequence by gamma_0.
AcfSequence to_acf(const AcvSequence& acv);

// True when every root of 1 - c_1 z - ... - c_n z^n lies strictly outside
// the unit circle with the given relative modulus margin, i.e. all root
// moduli exceed 1 + margin.  An empty coefficient list has no roots and
// returns true.
bool roots_outside_unit_circle(std::span<const double> coefs,
                               double margin = 1e-9);

// Autocorrelation of fractional white noise, ARFIMA(0, d, 0):
//
//   rho_k = prod_{i=1}^{k} (i - 1 + d) / (i - d),   d in (-0.5, 0.5).
//
// Evaluated as a running product; rho_0 = 1.
AcfSequence fwn_acf(double d, int max_lag);

// Variance of fractional white noise with sigma2 = 1:
//
//   gamma_0 = Gamma(1 - 2d) / Gamma(1 - d)^2,   d < 0.5.
double fwn_variance(double d);

// Derivative with respect to d of the fractional-noise autocorrelation at
// lag k >= 1.  Equals 1/k at d = 0.
double fwn_acf_deriv(double d, int k);

// Autocovariances gamma_0..gamma_max_lag of a stationary, invertible
// ARMA(p, q) process computed through the MA(infinity) representation
//
//   psi_0 = 1,  psi_j = theta_j + sum_{i=1}^{min(j,p)} phi_i psi_{j-i},
//   gamma_k = sigma2 sum_{j>=0} psi_j psi_{j+k},
//
// with the psi series truncated once its terms fall below 1e-14 of the
// largest weight in modulus.
AcvSequence arma_acv(std::span<const double> ar, std::span<const double> ma,
                     double sigma2, int max_lag);

// Autocovariances gamma_0..gamma_max_lag of the ARFIMA process.  The ARMA
// and fractional components are combined by discrete convolution of their
// autocovariance sequences:
//
//   gamma_k = sigma2^{-1} [ g1_0 g2_k
//             + sum_{i>=1} g1_i (g2_{|k-i|} + g2_{k+i}) ],
//
// where g1 is the ARMA(p, q) autocovariance and g2 the fractional-noise
// autocovariance, truncating the sum where |g1_i| < 1e-14 g1_0.
AcvSequence arfima_acv(const ModelSpec& model, int max_lag);

// Spectral density
//
//   f(w) = (2 sin(w/2))^{-2d} (sigma2 / 2 pi)
//          |theta(e^{-iw})|^2 / |phi(e^{-iw})|^2
//
// for w in (0, pi].  Throws std::invalid_argument outside that range (f
// diverges at w = 0 when d > 0).
double spectral_density(const ModelSpec& model, double omega);

}  // namespace arfima
