#include "arfima/model_acf.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace arfima {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

// MA(infinity) weights psi_0..psi_n of theta(B)/phi(B).
std::vector<double> psi_weights(std::span<const double> ar,
                                std::span<const double> ma, int n) {
  const int p = static_cast<int>(ar.size());
  const int q = static_cast<int>(ma.size());
  std::vector<double> psi(static_cast<std::size_t>(n) + 1, 0.0);
  psi[0] = 1.0;
  for (int j = 1; j <= n; ++j) {
    double value = (j <= q) ? ma[static_cast<std::size_t>(j - 1)] : 0.0;
    const int imax = std::min(j, p);
    for (int i = 1; i <= imax; ++i) {
      value += ar[static_cast<std::size_t>(i - 1)] *
               psi[static_cast<std::size_t>(j - i)];
    }
    psi[static_cast<std::size_t>(j)] = value;
  }
  return psi;
}

}  // namespace

void ModelSpec::validate() const {
  if (!all_finite(ar) || !all_finite(ma) || !std::isfinite(d) ||
      !std::isfinite(sigma2)) {
    throw std::invalid_argument("ModelSpec: parameters must be finite");
  }
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("ModelSpec: sigma2 must be positive");
  }
  if (!(d > -0.5 && d < 0.5)) {
    throw std::invalid_argument(
        "ModelSpec: d must lie in (-0.5, 0.5), got " + std::to_string(d));
  }
  if (!roots_outside_unit_circle(ar)) {
    throw std::invalid_argument(
        "ModelSpec: AR polynomial has a root on or inside the unit circle");
  }
  if (!roots_outside_unit_circle(ma)) {
    throw std::invalid_argument(
        "ModelSpec: MA polynomial has a root on or inside the unit circle");
  }
}

bool ModelSpec::is_valid() const {
  if (!all_finite(ar) || !all_finite(ma) || !std::isfinite(d) ||
      !std::isfinite(sigma2)) {
    return false;
  }
  return sigma2 > 0.0 && d > -0.5 && d < 0.5 &&
         roots_outside_unit_circle(ar) && roots_outside_unit_circle(ma);
}

AcfSequence to_acf(const AcvSequence& acv) {
  if (acv.values.empty()) {
    throw std::invalid_argument("to_acf: empty autocovariance sequence");
  }
  const double gamma0 = acv.values.front();
  if (!(gamma0 > 0.0)) {
    throw std::invalid_argument("to_acf: gamma_0 must be positive");
  }
  AcfSequence acf;
  acf.values.reserve(acv.values.size());
  for (double g : acv.values) acf.values.push_back(g / gamma0);
  return acf;
}

bool roots_outside_unit_circle(std::span<const double> coefs, double margin) {
  if (!all_finite(coefs)) return false;
  std::size_t n = coefs.size();
  while (n > 0 && coefs[n - 1] == 0.0) --n;
  if (n == 0) return true;

  // Roots of 1 - sum c_i z^i all have modulus > 1 + margin exactly when the
  // polynomial with coefficients c_i (1 + margin)^i has all roots outside
  // the closed unit disc.  The latter is the Schur-Cohn condition: running
  // the Levinson recursion backwards from the coefficients, every
  // reflection coefficient must have modulus below one.
  std::vector<double> a(n);
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    scale *= 1.0 + margin;
    a[i] = coefs[i] * scale;
  }
  for (std::size_t j = n; j >= 1; --j) {
    const double r = a[j - 1];
    if (!(std::abs(r) < 1.0)) return false;
    if (j == 1) break;
    const double denom = 1.0 - r * r;
    std::vector<double> b(j - 1);
    for (std::size_t i = 0; i < j - 1; ++i) {
      b[i] = (a[i] + r * a[j - 2 - i]) / denom;
    }
    a = std::move(b);
  }
  return true;
}

AcfSequence fwn_acf(double d, int max_lag) {
  if (!(d > -0.5 && d < 0.5)) {
    throw std::invalid_argument("fwn_acf: d must lie in (-0.5, 0.5)");
  }
  if (max_lag < 0) {
    throw std::invalid_argument("fwn_acf: max_lag must be nonnegative");
  }
  AcfSequence acf;
  acf.values.resize(static_cast<std::size_t>(max_lag) + 1);
  acf.values[0] = 1.0;
  for (int k = 1; k <= max_lag; ++k) {
    acf.values[static_cast<std::size_t>(k)] =
        acf.values[static_cast<std::size_t>(k - 1)] * (k - 1 + d) / (k - d);
  }
  return acf;
}

double fwn_variance(double d) {
  if (!(d < 0.5)) {
    throw std::invalid_argument("fwn_variance: requires d < 0.5");
  }
  return std::exp(std::lgamma(1.0 - 2.0 * d) - 2.0 * std::lgamma(1.0 - d));
}

double fwn_acf_deriv(double d, int k) {
  if (!(d > -0.5 && d < 0.5)) {
    throw std::invalid_argument("fwn_acf_deriv: d must lie in (-0.5, 0.5)");
  }
  if (k < 1) {
    throw std::invalid_argument("fwn_acf_deriv: lag must be at least 1");
  }
  if (d == 0.0) return 1.0 / k;

  // With rho_k(d) = prod_{i=1}^{k} (i - 1 + d)/(i - d), logarithmic
  // differentiation gives
  //   rho_k'(d) = rho_k(d) [ sum_{i=1}^{k} 1/(i - 1 + d)
  //                          + sum_{i=1}^{k} 1/(i - d) ].
  // The i = 1 term of the first sum, rho_k(d)/d, is evaluated with the
  // factor d cancelled so nothing blows up as d -> 0.
  double tail = 1.0;  // prod_{i=2}^{k} (i - 1 + d)/(i - d)
  for (int i = 2; i <= k; ++i) tail *= (i - 1 + d) / (i - d);
  const double rho = d / (1.0 - d) * tail;
  double sum = 0.0;
  for (int i = 2; i <= k; ++i) sum += 1.0 / (i - 1 + d);
  for (int i = 1; i <= k; ++i) sum += 1.0 / (i - d);
  return tail / (1.0 - d) + rho * sum;
}

AcvSequence arma_acv(std::span<const double> ar, std::span<const double> ma,
                     double sigma2, int max_lag) {
  if (max_lag < 0) {
    throw std::invalid_argument("arma_acv: max_lag must be nonnegative");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("arma_acv: sigma2 must be positive");
  }
  if (!roots_outside_unit_circle(ar)) {
    throw std::invalid_argument(
        "arma_acv: AR polynomial has a root on or inside the unit circle");
  }
  if (!roots_outside_unit_circle(ma)) {
    throw std::invalid_argument(
        "arma_acv: MA polynomial has a root on or inside the unit circle");
  }

  AcvSequence acv;
  acv.values.assign(static_cast<std::size_t>(max_lag) + 1, 0.0);
  if (ar.empty() && ma.empty()) {
    acv.values[0] = sigma2;
    return acv;
  }

  const int q = static_cast<int>(ma.size());
  constexpr double kRelTol = 1e-14;
  constexpr int kMaxTerms = 4'000'000;
  int n = std::max({max_lag + q + 1, 64});
  std::vector<double> psi;
  while (true) {
    psi = psi_weights(ar, ma, n);
    double max_abs = 0.0;
    for (double w : psi) max_abs = std::max(max_abs, std::abs(w));
    if (std::abs(psi.back()) < kRelTol * max_abs || n >= kMaxTerms) break;
    n *= 2;
  }

  for (int k = 0; k <= max_lag; ++k) {
    double sum = 0.0;
    for (int j = 0; j + k <= n; ++j) {
      sum += psi[static_cast<std::size_t>(j)] *
             psi[static_cast<std::size_t>(j + k)];
    }
    acv.values[static_cast<std::size_t>(k)] = sigma2 * sum;
  }
  return acv;
}

AcvSequence arfima_acv(const ModelSpec& model, int max_lag) {
  model.validate();
  if (max_lag < 0) {
    throw std::invalid_argument("arfima_acv: max_lag must be nonnegative");
  }
  if (model.d == 0.0) {
    return arma_acv(model.ar, model.ma, model.sigma2, max_lag);
  }

  const double scale = model.sigma2 * fwn_variance(model.d);
  const AcfSequence frac_base = fwn_acf(model.d, max_lag);
  if (model.p() == 0 && model.q() == 0) {
    AcvSequence acv;
    acv.values.reserve(frac_base.values.size());
    for (double r : frac_base.values) acv.values.push_back(scale * r);
    return acv;
  }

  // Locate the truncation point of the ARMA-component autocovariance: the
  // smallest I such that |g1_i| < 1e-14 g1_0 for all i > I.
  constexpr double kRelTol = 1e-14;
  constexpr int kMaxLen = 100'000;
  int len = std::max(64, model.q() + 1);
  AcvSequence g1;
  int trunc = 0;
  while (true) {
    g1 = arma_acv(model.ar, model.ma, 1.0, len);
    const double tol = kRelTol * std::abs(g1[0]);
    trunc = 0;
    for (int i = 1; i <= len; ++i) {
      if (std::abs(g1[i]) >= tol) trunc = i;
    }
    if (trunc < len || len >= kMaxLen) break;
    len *= 2;
  }

  const AcfSequence frac = fwn_acf(model.d, max_lag + trunc);
  AcvSequence acv;
  acv.values.resize(static_cast<std::size_t>(max_lag) + 1);
  for (int k = 0; k <= max_lag; ++k) {
    double sum = g1[0] * frac[k];
    for (int i = 1; i <= trunc; ++i) {
      sum += g1[i] * (frac[std::abs(k - i)] + frac[k + i]);
    }
    acv.values[static_cast<std::size_t>(k)] = scale * sum;
  }
  return acv;
}

double spectral_density(const ModelSpec& model, double omega) {
  model.validate();
  if (!(omega > 0.0 && omega <= std::numbers::pi)) {
    throw std::invalid_argument(
        "spectral_density: omega must lie in (0, pi]");
  }
  const std::complex<double> z = std::polar(1.0, -omega);
  std::complex<double> phi(1.0, 0.0);
  std::complex<double> zk(1.0, 0.0);
  for (double c : model.ar) {
    zk *= z;
    phi -= c * zk;
  }
  std::complex<double> theta(1.0, 0.0);
  zk = std::complex<double>(1.0, 0.0);
  for (double c : model.ma) {
    zk *= z;
    theta += c * zk;
  }
  const double base =
      model.sigma2 / (2.0 * std::numbers::pi) * std::norm(theta) /
      std::norm(phi);
  if (model.d == 0.0) return base;
  const double s = 2.0 * std::sin(0.5 * omega);
  return std::pow(s, -2.0 * model.d) * base;
}

}  // namespace arfima
