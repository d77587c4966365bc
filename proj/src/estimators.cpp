#include "arfima/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "arfima/optimize.hpp"

namespace arfima {

namespace {

// Objective value returned for parameter vectors outside the stationary,
// invertible region.
constexpr double kPenalty = 1e100;

double quadratic_form(std::span<const double> r,
                      std::span<const double> weight) {
  const std::size_t m = r.size();
  if (weight.size() != m * m) {
    throw std::invalid_argument(
        "quadratic_form: weight matrix must be m x m for m residuals");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) row += weight[i * m + j] * r[j];
    total += r[i] * row;
  }
  return total;
}

std::vector<double> identity_matrix(std::size_t m) {
  std::vector<double> w(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) w[i * m + i] = 1.0;
  return w;
}

// Inverse of a symmetric positive definite matrix via Cholesky.
std::vector<double> spd_inverse(std::span<const double> a, std::size_t m) {
  std::vector<double> chol(a.begin(), a.end());
  for (std::size_t j = 0; j < m; ++j) {
    double diag = chol[j * m + j];
    for (std::size_t k = 0; k < j; ++k) diag -= chol[j * m + k] * chol[j * m + k];
    if (!(diag > 0.0)) {
      throw std::runtime_error("spd_inverse: matrix is not positive definite");
    }
    chol[j * m + j] = std::sqrt(diag);
    for (std::size_t i = j + 1; i < m; ++i) {
      double v = chol[i * m + j];
      for (std::size_t k = 0; k < j; ++k) v -= chol[i * m + k] * chol[j * m + k];
      chol[i * m + j] = v / chol[j * m + j];
    }
  }
  std::vector<double> inv(m * m, 0.0);
  std::vector<double> col(m);
  for (std::size_t c = 0; c < m; ++c) {
    std::fill(col.begin(), col.end(), 0.0);
    col[c] = 1.0;
    // Solve L y = e_c, then L' x = y.
    for (std::size_t i = 0; i < m; ++i) {
      double v = col[i];
      for (std::size_t k = 0; k < i; ++k) v -= chol[i * m + k] * col[k];
      col[i] = v / chol[i * m + i];
    }
    for (std::size_t ii = m; ii-- > 0;) {
      double v = col[ii];
      for (std::size_t k = ii + 1; k < m; ++k) v -= chol[k * m + ii] * col[k];
      col[ii] = v / chol[ii * m + ii];
    }
    for (std::size_t i = 0; i < m; ++i) inv[i * m + c] = col[i];
  }
  return inv;
}

std::vector<double> theoretical_rho_at(const ModelSpec& model,
                                       std::span<const int> lags) {
  const int max_lag = *std::max_element(lags.begin(), lags.end());
  const AcfSequence acf = to_acf(arfima_acv(model, max_lag));
  std::vector<double> rho;
  rho.reserve(lags.size());
  for (int k : lags) rho.push_back(acf[k]);
  return rho;
}

void check_lags(std::span<const int> lags) {
  if (lags.empty()) {
    throw std::invalid_argument("at least one ACF lag is required");
  }
  int prev = 0;
  for (int k : lags) {
    if (k < 1 || k <= prev) {
      throw std::invalid_argument(
          "ACF lags must be strictly increasing and at least 1");
    }
    prev = k;
  }
}

}  // namespace

const char* method_name(Method method) {
  switch (method) {
    case Method::kMde: return "mde";
    case Method::kBcmde: return "bcmde";
    case Method::kWhittle: return "whittle";
    case Method::kMle: return "mle";
  }
  throw std::logic_error("method_name: unknown method");
}

Method method_from_name(std::string_view name) {
  if (name == "mde") return Method::kMde;
  if (name == "bcmde") return Method::kBcmde;
  if (name == "whittle") return Method::kWhittle;
  if (name == "mle") return Method::kMle;
  throw std::invalid_argument("unknown estimation method: " +
                              std::string(name));
}

void EstimationOptions::validate() const {
  check_lags(lags);
  if (!(ar_bound > 0.0 && ar_bound < 1.0) ||
      !(ma_bound > 0.0 && ma_bound < 1.0)) {
    throw std::invalid_argument(
        "EstimationOptions: ar_bound and ma_bound must lie in (0, 1)");
  }
  if (!(d_bound > 0.0 && d_bound < 0.5)) {
    throw std::invalid_argument(
        "EstimationOptions: d_bound must lie in (0, 0.5)");
  }
  if (!(x_tol > 0.0) || !(f_tol > 0.0)) {
    throw std::invalid_argument(
        "EstimationOptions: tolerances must be positive");
  }
  if (max_iterations < 1) {
    throw std::invalid_argument(
        "EstimationOptions: max_iterations must be positive");
  }
  if (c_truncation < 1) {
    throw std::invalid_argument(
        "EstimationOptions: c_truncation must be positive");
  }
}

std::vector<double> pack_parameters(const ModelSpec& model,
                                    const FitStructure& structure) {
  if (model.p() != structure.p || model.q() != structure.q) {
    throw std::invalid_argument(
        "pack_parameters: model orders do not match the fit structure");
  }
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(structure.n_free()));
  x.insert(x.end(), model.ar.begin(), model.ar.end());
  x.insert(x.end(), model.ma.begin(), model.ma.end());
  if (structure.fit_d) x.push_back(model.d);
  return x;
}

ModelSpec model_from_parameters(std::span<const double> x,
                                const FitStructure& structure) {
  if (static_cast<int>(x.size()) != structure.n_free()) {
    throw std::invalid_argument(
        "model_from_parameters: wrong parameter vector length");
  }
  ModelSpec model;
  model.ar.assign(x.begin(), x.begin() + structure.p);
  model.ma.assign(x.begin() + structure.p,
                  x.begin() + structure.p + structure.q);
  model.d = structure.fit_d ? x.back() : structure.d_fixed;
  model.sigma2 = 1.0;
  return model;
}

double mde_objective(const ModelSpec& model, std::span<const int> lags,
                     std::span<const double> rho_hat,
                     std::span<const double> weight) {
  check_lags(lags);
  if (rho_hat.size() != lags.size()) {
    throw std::invalid_argument(
        "mde_objective: rho_hat length must match the lag count");
  }
  const std::vector<double> rho = theoretical_rho_at(model, lags);
  std::vector<double> r(lags.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = rho_hat[i] - rho[i];
  return quadratic_form(r, weight);
}

double bcmde_objective(const ModelSpec& model, int T, const TrendSpec& trend,
                       std::span<const int> lags,
                       std::span<const double> rho_hat,
                       std::span<const double> weight) {
  check_lags(lags);
  if (rho_hat.size() != lags.size()) {
    throw std::invalid_argument(
        "bcmde_objective: rho_hat length must match the lag count");
  }
  const BiasProfile profile = corrected_acf(model, T, trend, lags);
  std::vector<double> r(lags.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = rho_hat[i] - profile.corrected_rho[i];
  }
  return quadratic_form(r, weight);
}

std::pair<double, double> whittle_objective(
    const ModelSpec& model, std::span<const double> periodogram_values,
    int T) {
  const int m = static_cast<int>(periodogram_values.size());
  if (m < 1) {
    throw std::invalid_argument(
        "whittle_objective: empty periodogram");
  }
  if (T < 2 || m != T / 2) {
    throw std::invalid_argument(
        "whittle_objective: periodogram length must equal floor(T / 2)");
  }
  ModelSpec unit = model;
  unit.sigma2 = 1.0;
  double sum_ratio = 0.0;
  double sum_log_g = 0.0;
  for (int j = 1; j <= m; ++j) {
    const double omega = 2.0 * std::numbers::pi * j / T;
    const double g = 2.0 * std::numbers::pi * spectral_density(unit, omega);
    sum_ratio += periodogram_values[static_cast<std::size_t>(j - 1)] / g;
    sum_log_g += std::log(g);
  }
  const double sigma2_hat = 2.0 * std::numbers::pi * sum_ratio / m;
  const double value =
      m * std::log(sigma2_hat / (2.0 * std::numbers::pi)) + sum_log_g + m;
  return {value, sigma2_hat};
}

std::pair<double, double> exact_gaussian_loglik(
    const ModelSpec& model, std::span<const double> residuals) {
  const int T = static_cast<int>(residuals.size());
  if (T < 2) {
    throw std::invalid_argument(
        "exact_gaussian_loglik: at least 2 observations are required");
  }
  ModelSpec unit = model;
  unit.sigma2 = 1.0;
  const AcvSequence kappa = arfima_acv(unit, T - 1);

  // Durbin-Levinson innovations: r_{t-1} is the prediction error variance
  // of X_t given X_1..X_{t-1}, scaled by the innovation variance.
  std::vector<double> coef;  // prediction coefficients, most recent first
  std::vector<double> next;
  double r = kappa[0];
  double sum_e2 = residuals[0] * residuals[0] / r;
  double sum_log_r = std::log(r);
  for (int t = 1; t < T; ++t) {
    double num = kappa[t];
    for (int j = 1; j < t; ++j) num -= coef[static_cast<std::size_t>(j - 1)] * kappa[t - j];
    const double a = num / r;
    if (!(std::abs(a) < 1.0)) {
      throw std::runtime_error(
          "exact_gaussian_loglik: autocovariance sequence is not positive "
          "definite");
    }
    next.resize(static_cast<std::size_t>(t));
    for (int j = 1; j < t; ++j) {
      next[static_cast<std::size_t>(j - 1)] =
          coef[static_cast<std::size_t>(j - 1)] -
          a * coef[static_cast<std::size_t>(t - 1 - j)];
    }
    next[static_cast<std::size_t>(t - 1)] = a;
    coef.swap(next);
    r *= 1.0 - a * a;

    double pred = 0.0;
    for (int j = 1; j <= t; ++j) {
      pred += coef[static_cast<std::size_t>(j - 1)] *
              residuals[static_cast<std::size_t>(t - j)];
    }
    const double e = residuals[static_cast<std::size_t>(t)] - pred;
    sum_e2 += e * e / r;
    sum_log_r += std::log(r);
  }

  const double sigma2_hat = sum_e2 / T;
  if (!(sigma2_hat > 0.0)) {
    throw std::runtime_error(
        "exact_gaussian_loglik: degenerate residual vector");
  }
  const double loglik =
      -0.5 * (T * std::log(2.0 * std::numbers::pi * sigma2_hat) + sum_log_r +
              T);
  return {loglik, sigma2_hat};
}

std::vector<double> asymptotic_cov_C(const AcfSequence& acf,
                                     std::span<const int> lags,
                                     long max_terms) {
  check_lags(lags);
  if (max_terms < 1) {
    throw std::invalid_argument("asymptotic_cov_C: max_terms must be positive");
  }
  const std::size_t m = lags.size();
  const int max_lag = lags.back();
  constexpr double kTermTol = 1e-12;

  std::vector<double> c(m * m, 0.0);
  std::vector<double> u(m);
  for (long l = 1; l <= max_terms; ++l) {
    if (l + max_lag > acf.max_lag()) {
      throw std::invalid_argument(
          "asymptotic_cov_C: acf is too short for the requested truncation");
    }
    double max_abs = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const int k = lags[i];
      const long lk = l - k;
      u[i] = acf[static_cast<int>(std::abs(lk))] +
             acf[static_cast<int>(l + k)] -
             2.0 * acf[k] * acf[static_cast<int>(l)];
      max_abs = std::max(max_abs, std::abs(u[i]));
    }
    if (max_abs * max_abs < kTermTol) break;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) c[i * m + j] += u[i] * u[j];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) c[i * m + j] = c[j * m + i];
  }
  return c;
}

namespace {

struct PreparedData {
  std::vector<double> residuals;
  std::vector<double> rho_hat;       // kMde / kBcmde
  std::vector<double> periodogram_;  // kWhittle
};

EstimateResult run_distance_fit(const PreparedData& data, int T,
                                const FitStructure& structure,
                                const TrendSpec& trend,
                                const EstimationOptions& options,
                                std::span<const double> weight,
                                std::span<const double> start) {
  const auto objective = [&](std::span<const double> x) -> double {
    const ModelSpec model = model_from_parameters(x, structure);
    if (!model.is_valid()) return kPenalty;
    try {
      if (options.method == Method::kBcmde) {
        return bcmde_objective(model, T, trend, options.lags, data.rho_hat,
                               weight);
      }
      return mde_objective(model, options.lags, data.rho_hat, weight);
    } catch (const std::exception&) {
      return kPenalty;
    }
  };

  const int n = structure.n_free();
  std::vector<double> lo(static_cast<std::size_t>(n));
  std::vector<double> hi(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double b = options.ar_bound;
    if (i >= structure.p) b = options.ma_bound;
    if (structure.fit_d && i == n - 1) b = options.d_bound;
    lo[static_cast<std::size_t>(i)] = -b;
    hi[static_cast<std::size_t>(i)] = b;
  }

  EstimateResult result;
  result.method = options.method;
  if (n == 1) {
    const ScalarMinResult r = minimize_scalar(
        [&](double v) {
          const double xv[1] = {v};
          return objective(std::span<const double>(xv, 1));
        },
        lo[0], hi[0], options.x_tol, options.max_iterations);
    result.params = {r.x};
    result.objective_value = r.fx;
    result.iterations = r.iterations;
    result.converged = r.converged;
  } else {
    const VectorMinResult r =
        minimize_simplex(objective, start, lo, hi, options.x_tol,
                         options.f_tol, options.max_iterations);
    result.params = r.x;
    result.objective_value = r.fx;
    result.iterations = r.iterations;
    result.converged = r.converged;
  }
  return result;
}

}  // namespace

EstimateResult fit(const SeriesData& series, const FitStructure& structure,
                   const TrendSpec& trend, const EstimationOptions& options) {
  series.validate();
  options.validate();
  if (structure.p < 0 || structure.q < 0) {
    throw std::invalid_argument("fit: negative model order");
  }
  if (structure.n_free() < 1) {
    throw std::invalid_argument("fit: no free parameters to estimate");
  }
  if (!structure.fit_d && !(structure.d_fixed > -0.5 && structure.d_fixed < 0.5)) {
    throw std::invalid_argument("fit: fixed d must lie in (-0.5, 0.5)");
  }
  const int T = series.size();

  PreparedData data;
  data.residuals = detrend(series, trend).residuals;
  if (options.method == Method::kMde || options.method == Method::kBcmde) {
    if (options.lags.back() >= T) {
      throw std::invalid_argument("fit: ACF lags must be below T");
    }
    data.rho_hat = sample_acf(data.residuals, options.lags);
  } else if (options.method == Method::kWhittle) {
    // At the nonzero Fourier frequencies the periodogram is invariant to
    // subtracting a constant, so the raw series is used when only a
    // constant mean is estimated.
    data.periodogram_ =
        (trend.kind == TrendSpec::Kind::kConstantUnknown)
            ? periodogram(series.values)
            : periodogram(data.residuals);
  }

  EstimateResult result;
  result.method = options.method;
  const int n = structure.n_free();
  const std::vector<double> zeros(static_cast<std::size_t>(n), 0.0);

  if (options.method == Method::kMde || options.method == Method::kBcmde) {
    const std::size_t m = options.lags.size();
    std::vector<double> weight = identity_matrix(m);
    result = run_distance_fit(data, T, structure, trend, options, weight,
                              zeros);
    if (options.weighting == Weighting::kInverseC) {
      const ModelSpec stage1 = model_from_parameters(result.params, structure);
      // Extend the ACF horizon until the covariance sum is truncated by
      // its own term-size rule.
      long horizon = 2048;
      std::vector<double> c;
      while (true) {
        const long need = std::min<long>(horizon, options.c_truncation) +
                          options.lags.back();
        const AcfSequence acf =
            to_acf(arfima_acv(stage1, static_cast<int>(need)));
        try {
          c = asymptotic_cov_C(acf, options.lags, options.c_truncation);
          break;
        } catch (const std::invalid_argument&) {
          if (horizon >= options.c_truncation) throw;
          horizon *= 4;
        }
      }
      weight = spd_inverse(c, m);
      const int stage1_iterations = result.iterations;
      result = run_distance_fit(data, T, structure, trend, options, weight,
                                result.params);
      result.iterations += stage1_iterations;
    }
    const ModelSpec unit = model_from_parameters(result.params, structure);
    result.model = unit;
    result.sigma2_hat =
        sample_acv(data.residuals, 0) / arfima_acv(unit, 0)[0];
    result.model.sigma2 = result.sigma2_hat;
    return result;
  }

  // kWhittle and kMle share the generic minimizer over packed parameters.
  const auto objective = [&](std::span<const double> x) -> double {
    const ModelSpec model = model_from_parameters(x, structure);
    if (!model.is_valid()) return kPenalty;
    try {
      if (options.method == Method::kWhittle) {
        return whittle_objective(model, data.periodogram_, T).first;
      }
      return -exact_gaussian_loglik(model, data.residuals).first;
    } catch (const std::exception&) {
      return kPenalty;
    }
  };

  std::vector<double> lo(static_cast<std::size_t>(n));
  std::vector<double> hi(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double b = options.ar_bound;
    if (i >= structure.p) b = options.ma_bound;
    if (structure.fit_d && i == n - 1) b = options.d_bound;
    lo[static_cast<std::size_t>(i)] = -b;
    hi[static_cast<std::size_t>(i)] = b;
  }
  if (n == 1) {
    const ScalarMinResult r = minimize_scalar(
        [&](double v) {
          const double xv[1] = {v};
          return objective(std::span<const double>(xv, 1));
        },
        lo[0], hi[0], options.x_tol, options.max_iterations);
    result.params = {r.x};
    result.objective_value = r.fx;
    result.iterations = r.iterations;
    result.converged = r.converged;
  } else {
    const VectorMinResult r = minimize_simplex(
        objective, zeros, lo, hi, options.x_tol, options.f_tol,
        options.max_iterations);
    result.params = r.x;
    result.objective_value = r.fx;
    result.iterations = r.iterations;
    result.converged = r.converged;
  }

  const ModelSpec unit = model_from_parameters(result.params, structure);
  result.model = unit;
  result.sigma2_hat =
      (options.method == Method::kWhittle)
          ? whittle_objective(unit, data.periodogram_, T).second
          : exact_gaussian_loglik(unit, data.residuals).second;
  result.model.sigma2 = result.sigma2_hat;
  return result;
}

}  // namespace arfima
