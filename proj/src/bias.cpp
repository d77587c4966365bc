#include "arfima/bias.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace arfima {

namespace {

void check_lag_range(const char* where, const AcvSequence& acv, int T,
                     int k) {
  if (T < 2) {
    throw std::invalid_argument(std::string(where) + ": T must be at least 2");
  }
  if (k < 0 || k >= T) {
    throw std::invalid_argument(std::string(where) +
                                ": lag must lie in [0, T - 1]");
  }
  if (acv.max_lag() < T - 1) {
    throw std::invalid_argument(std::string(where) +
                                ": autocovariances must extend to lag T - 1");
  }
}

// c_{k,m} = #{(j, i) : 1 <= j <= T - k, 1 <= i <= T, |j + k - i| = m} for
// m >= 1, counting the overlap structure of the cross terms at lag k.
double pair_count(int T, int k, int m) {
  return std::max(0, k - m) + std::min(k, T - m);
}

// Sums t and t^2 over the integer range [lo, hi] (0 when empty).
struct RangeSums {
  double count = 0.0;
  double linear = 0.0;
  double square = 0.0;
};

RangeSums range_sums(int lo, int hi) {
  if (lo > hi) return {};
  auto cum_linear = [](double n) { return n * (n + 1.0) / 2.0; };
  auto cum_square = [](double n) { return n * (n + 1.0) * (2.0 * n + 1.0) / 6.0; };
  RangeSums s;
  s.count = hi - lo + 1.0;
  s.linear = cum_linear(hi) - cum_linear(lo - 1.0);
  s.square = cum_square(hi) - cum_square(lo - 1.0);
  return s;
}

}  // namespace

TrendSpec TrendSpec::known_mean(double mu) {
  TrendSpec t;
  t.kind = Kind::kKnownMean;
  t.mu = mu;
  return t;
}

TrendSpec TrendSpec::constant_unknown() {
  TrendSpec t;
  t.kind = Kind::kConstantUnknown;
  return t;
}

TrendSpec TrendSpec::linear_regressor(std::vector<double> z) {
  TrendSpec t;
  t.kind = Kind::kLinearRegressor;
  t.regressor = std::move(z);
  return t;
}

TrendSpec TrendSpec::time_trend() {
  TrendSpec t;
  t.kind = Kind::kTimeTrend;
  return t;
}

double expected_acv_constant_mean(const AcvSequence& acv, int T, int k) {
  check_lag_range("expected_acv_constant_mean", acv, T, k);
  const double n = T;
  double weighted = n * acv[0];  // T gamma_0 + 2 sum (T - i) gamma_i
  double cross = k * acv[0];     // k gamma_0 + sum c_{k,m} gamma_m
  for (int m = 1; m < T; ++m) {
    weighted += 2.0 * (n - m) * acv[m];
    cross += pair_count(T, k, m) * acv[m];
  }
  const double mean_var = weighted / (n * n);
  return acv[k] - (n + k) / (n - k) * mean_var + 2.0 * cross / (n * (n - k));
}

double expected_acv_linear_regressor(const AcvSequence& acv, int T, int k,
                                     std::span<const double> z) {
  check_lag_range("expected_acv_linear_regressor", acv, T, k);
  if (static_cast<int>(z.size()) != T) {
    throw std::invalid_argument(
        "expected_acv_linear_regressor: regressor length must equal T");
  }
  double zbar = 0.0;
  for (double v : z) zbar += v;
  zbar /= T;
  std::vector<double> zt(z.size());  // centered regressor, ztilde
  double zss = 0.0;
  for (int i = 0; i < T; ++i) {
    zt[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] - zbar;
    zss += zt[static_cast<std::size_t>(i)] * zt[static_cast<std::size_t>(i)];
  }
  if (!(zss > 0.0)) {
    throw std::invalid_argument(
        "expected_acv_linear_regressor: regressor is constant");
  }

  auto ztilde = [&](int t) { return zt[static_cast<std::size_t>(t - 1)]; };
  double sum_plain = 0.0;    // sum_t sum_i gamma_{|t-i|}
  double sum_lead = 0.0;     // sum_t sum_i ztilde_{t+k} ztilde_i gamma_{|t-i|}
  double sum_lag = 0.0;      // sum_t sum_i ztilde_t ztilde_i gamma_{|t+k-i|}
  double sum_z_pair = 0.0;   // sum_t (ztilde_t + ztilde_{t+k})
  double sum_z_prod = 0.0;   // sum_t ztilde_t ztilde_{t+k}
  for (int t = 1; t <= T - k; ++t) {
    for (int i = 1; i <= T; ++i) {
      sum_plain += acv[std::abs(t - i)];
      sum_lead += ztilde(t + k) * ztilde(i) * acv[std::abs(t - i)];
      sum_lag += ztilde(t) * ztilde(i) * acv[std::abs(t + k - i)];
    }
    sum_z_pair += ztilde(t) + ztilde(t + k);
    sum_z_prod += ztilde(t) * ztilde(t + k);
  }
  double sum_zg = 0.0;   // sum_i sum_j ztilde_j gamma_{|i-j|}
  double sum_zzg = 0.0;  // sum_i sum_j ztilde_i ztilde_j gamma_{|i-j|}
  double sum_g = 0.0;    // sum_i sum_j gamma_{|i-j|}
  for (int i = 1; i <= T; ++i) {
    for (int j = 1; j <= T; ++j) {
      const double g = acv[std::abs(i - j)];
      sum_zg += ztilde(j) * g;
      sum_zzg += ztilde(i) * ztilde(j) * g;
      sum_g += g;
    }
  }

  const double n = T;
  const double m = n - k;
  return acv[k] - 2.0 * sum_plain / (m * n) - (sum_lead + sum_lag) / (m * zss) +
         sum_z_pair * sum_zg / (m * n * zss) +
         sum_z_prod * sum_zzg / (m * zss * zss) + sum_g / (n * n);
}

double expected_acv_time_trend(const AcvSequence& acv, int T, int k) {
  check_lag_range("expected_acv_time_trend", acv, T, k);
  if (T < 3) {
    throw std::invalid_argument(
        "expected_acv_time_trend: T must be at least 3");
  }
  const double n = T;
  const double m = n - k;
  const double center = (n + 1.0) / 2.0;       // ztilde_t = t - center
  const double zss = (n * n * n - n) / 12.0;   // sum_t ztilde_t^2

  // sum_t sum_i gamma_{|t-i|} over t <= T - k, grouped by the gap |t - i|;
  // the gap g >= 1 occurs max(0, T - k - g) + min(T - k, T - g) times.
  double sum_plain = m * acv[0];
  for (int g = 1; g < T; ++g) {
    sum_plain +=
        (std::max(0, T - k - g) + std::min(T - k, T - g)) * acv[g];
  }

  // sum_t sum_i ztilde_{t+k} ztilde_i gamma_{|t-i|}, grouped by the signed
  // gap s = t - i.  For fixed s the inner sum over the admissible t range
  // is a quadratic polynomial in t, summed in closed form.
  double sum_lead = 0.0;
  for (int s = -(T - 1); s <= T - k - 1; ++s) {
    const RangeSums r = range_sums(std::max(1, s + 1), std::min(T - k, T + s));
    if (r.count == 0.0) continue;
    const double a = k - center;   // ztilde_{t+k} = t + a
    const double b = -s - center;  // ztilde_{t-s} = t + b
    const double inner = r.square + (a + b) * r.linear + a * b * r.count;
    sum_lead += acv[std::abs(s)] * inner;
  }

  // sum_i sum_j ztilde_i ztilde_j gamma_{|i-j|}: the weight of gamma_g is
  // 2 sum_{i=1}^{T-g} ztilde_i ztilde_{i+g} = [(T-g)^3 - (T-g)(3g^2+1)] / 6.
  double sum_zzg = zss * acv[0];
  for (int g = 1; g < T; ++g) {
    const double w = n - g;
    sum_zzg += (w * w * w - w * (3.0 * g * g + 1.0)) / 6.0 * acv[g];
  }

  // sum_i sum_j gamma_{|i-j|}
  double sum_g = n * acv[0];
  for (int g = 1; g < T; ++g) sum_g += 2.0 * (n - g) * acv[g];

  // sum_t ztilde_t ztilde_{t+k} = [(T-k)^3 - (T-k)(3k^2+1)] / 12
  const double sum_z_prod = (m * m * m - m * (3.0 * k * k + 1.0)) / 12.0;

  return acv[k] - 2.0 * sum_plain / (m * n) - 2.0 * sum_lead / (m * zss) +
         sum_z_prod * sum_zzg / (m * zss * zss) + sum_g / (n * n);
}

double bias_rho(const AcfSequence& acf, int T, int k) {
  AcvSequence unit;
  unit.values = acf.values;
  check_lag_range("bias_rho", unit, T, k);
  return expected_acv_constant_mean(unit, T, k) - acf[k];
}

std::vector<double> bias_weights(int T, int k) {
  if (T < 2) {
    throw std::invalid_argument("bias_weights: T must be at least 2");
  }
  if (k < 0 || k >= T) {
    throw std::invalid_argument("bias_weights: lag must lie in [0, T - 1]");
  }
  const double n = T;
  const double lead = (n + k) / (n - k);
  std::vector<double> w(static_cast<std::size_t>(T));
  w[0] = -lead / n + 2.0 * k / (n * (n - k));
  for (int i = 1; i < T; ++i) {
    w[static_cast<std::size_t>(i)] =
        -lead * 2.0 * (n - i) / (n * n) +
        2.0 * pair_count(T, k, i) / (n * (n - k));
  }
  return w;
}

BiasProfile corrected_acf(const ModelSpec& model, int T,
                          const TrendSpec& trend, std::span<const int> lags) {
  model.validate();
  if (T < 2) {
    throw std::invalid_argument("corrected_acf: T must be at least 2");
  }
  for (int k : lags) {
    if (k < 0 || k >= T) {
      throw std::invalid_argument(
          "corrected_acf: every lag must lie in [0, T - 1]");
    }
  }
  const AcvSequence acv = arfima_acv(model, T - 1);

  auto expected_at = [&](int k) -> double {
    switch (trend.kind) {
      case TrendSpec::Kind::kKnownMean:
        return acv[k];
      case TrendSpec::Kind::kConstantUnknown:
        return expected_acv_constant_mean(acv, T, k);
      case TrendSpec::Kind::kLinearRegressor:
        return expected_acv_linear_regressor(acv, T, k, trend.regressor);
      case TrendSpec::Kind::kTimeTrend:
        return expected_acv_time_trend(acv, T, k);
    }
    throw std::logic_error("corrected_acf: unknown trend kind");
  };

  const double expected0 = expected_at(0);
  if (!(expected0 > 0.0)) {
    throw std::domain_error(
        "corrected_acf: expected lag-0 autocovariance is not positive");
  }

  BiasProfile profile;
  profile.T = T;
  profile.lags.assign(lags.begin(), lags.end());
  profile.gamma.reserve(lags.size());
  profile.expected_acv.reserve(lags.size());
  profile.bias_gamma.reserve(lags.size());
  profile.bias_rho.reserve(lags.size());
  profile.corrected_rho.reserve(lags.size());
  for (int k : lags) {
    const double e = (k == 0) ? expected0 : expected_at(k);
    profile.gamma.push_back(acv[k]);
    profile.expected_acv.push_back(e);
    profile.bias_gamma.push_back(e - acv[k]);
    profile.bias_rho.push_back((e - acv[k]) / acv[0]);
    profile.corrected_rho.push_back(e / expected0);
  }
  return profile;
}

}  // namespace arfima
