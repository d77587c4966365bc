#include "arfima/sample_stats.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <stdexcept>

#ifdef ARFIMA_HAVE_FFTW
#include <fftw3.h>
#endif

namespace arfima {

void SeriesData::validate() const {
  if (values.size() < 4) {
    throw std::invalid_argument(
        "SeriesData: at least 4 observations are required");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("SeriesData: values must be finite");
    }
  }
}

DetrendResult detrend(const SeriesData& series, const TrendSpec& trend) {
  series.validate();
  const int T = series.size();
  const std::vector<double>& x = series.values;

  DetrendResult result;
  result.residuals.resize(x.size());

  if (trend.kind == TrendSpec::Kind::kKnownMean) {
    for (int t = 0; t < T; ++t) result.residuals[t] = x[t] - trend.mu;
    return result;
  }

  double xbar = 0.0;
  for (double v : x) xbar += v;
  xbar /= T;

  if (trend.kind == TrendSpec::Kind::kConstantUnknown) {
    for (int t = 0; t < T; ++t) result.residuals[t] = x[t] - xbar;
    result.alpha_hat = xbar;
    return result;
  }

  std::vector<double> z(x.size());
  if (trend.kind == TrendSpec::Kind::kTimeTrend) {
    for (int t = 0; t < T; ++t) z[t] = t + 1;
  } else {
    if (static_cast<int>(trend.regressor.size()) != T) {
      throw std::invalid_argument(
          "detrend: regressor length must equal the series length");
    }
    z = trend.regressor;
  }
  double zbar = 0.0;
  for (double v : z) zbar += v;
  zbar /= T;
  double szz = 0.0;
  double szx = 0.0;
  for (int t = 0; t < T; ++t) {
    const double zt = z[t] - zbar;
    szz += zt * zt;
    szx += zt * x[t];
  }
  if (!(szz > 0.0)) {
    throw std::invalid_argument("detrend: regressor is constant");
  }
  const double beta = szx / szz;
  for (int t = 0; t < T; ++t) {
    result.residuals[t] = x[t] - xbar - beta * (z[t] - zbar);
  }
  result.alpha_hat = xbar;
  result.beta_hat = beta;
  return result;
}

double sample_acv(std::span<const double> residuals, int k) {
  const int T = static_cast<int>(residuals.size());
  if (T < 1) {
    throw std::invalid_argument("sample_acv: empty residual vector");
  }
  if (k < 0 || k >= T) {
    throw std::invalid_argument("sample_acv: lag must lie in [0, T - 1]");
  }
  double sum = 0.0;
  for (int j = 0; j + k < T; ++j) sum += residuals[j] * residuals[j + k];
  return sum / (T - k);
}

std::vector<double> sample_acf(std::span<const double> residuals,
                               std::span<const int> lags) {
  const double g0 = sample_acv(residuals, 0);
  if (!(g0 > 0.0)) {
    throw std::domain_error("sample_acf: residuals have zero variance");
  }
  std::vector<double> acf;
  acf.reserve(lags.size());
  for (int k : lags) acf.push_back(sample_acv(residuals, k) / g0);
  return acf;
}

namespace {

std::vector<double> periodogram_from_dft(
    const std::vector<std::complex<double>>& h, int T) {
  // |sum_t x_t e^{i w_j t}| = |H_j| for the standard DFT
  // H_j = sum_{n=0}^{T-1} x_{n+1} e^{-2 pi i j n / T}.
  const int m = T / 2;
  std::vector<double> out(static_cast<std::size_t>(m));
  const double scale = 1.0 / (2.0 * std::numbers::pi * T);
  for (int j = 1; j <= m; ++j) {
    out[static_cast<std::size_t>(j - 1)] =
        std::norm(h[static_cast<std::size_t>(j)]) * scale;
  }
  return out;
}

#ifdef ARFIMA_HAVE_FFTW
// FFTW plan creation and destruction share global state; executing a plan
// does not.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
#endif

}  // namespace

std::vector<double> periodogram(std::span<const double> x) {
  const int T = static_cast<int>(x.size());
  if (T < 2) {
    throw std::invalid_argument(
        "periodogram: at least 2 observations are required");
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("periodogram: values must be finite");
    }
  }
#ifdef ARFIMA_HAVE_FFTW
  const int n_out = T / 2 + 1;
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> h(static_cast<std::size_t>(n_out));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(T, in.data(),
                                reinterpret_cast<fftw_complex*>(h.data()),
                                FFTW_ESTIMATE);
  }
  if (plan == nullptr) {
    throw std::runtime_error("periodogram: FFTW plan creation failed");
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return periodogram_from_dft(h, T);
#else
  return periodogram_direct(x);
#endif
}

std::vector<double> periodogram_direct(std::span<const double> x) {
  const int T = static_cast<int>(x.size());
  if (T < 2) {
    throw std::invalid_argument(
        "periodogram_direct: at least 2 observations are required");
  }
  std::vector<std::complex<double>> h(static_cast<std::size_t>(T / 2) + 1);
  for (int j = 0; j <= T / 2; ++j) {
    const double w = 2.0 * std::numbers::pi * j / T;
    double re = 0.0;
    double im = 0.0;
    for (int n = 0; n < T; ++n) {
      re += x[static_cast<std::size_t>(n)] * std::cos(w * n);
      im -= x[static_cast<std::size_t>(n)] * std::sin(w * n);
    }
    h[static_cast<std::size_t>(j)] = {re, im};
  }
  return periodogram_from_dft(h, T);
}

}  // namespace arfima
