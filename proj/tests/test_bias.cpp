#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "arfima/bias.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "arfima/montecarlo.hpp"
#include "arfima/sample_stats.hpp"
#include "oracles.hpp"

using arfima::AcfSequence;
using arfima::AcvSequence;
using arfima::ModelSpec;
using arfima::TrendSpec;

namespace {

bool close_abs(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

AcvSequence make_acv(std::vector<double> values) {
  return AcvSequence{std::move(values)};
}

}  // namespace

TEST_CASE("white noise closed forms under an estimated constant mean") {
  for (int T : {5, 17, 100}) {
    const double g0 = 2.5;
    std::vector<double> g(static_cast<std::size_t>(T), 0.0);
    g[0] = g0;
    const AcvSequence acv = make_acv(g);
    CHECK(close_abs(arfima::expected_acv_constant_mean(acv, T, 0),
                    (1.0 - 1.0 / T) * g0, 1e-12));
    for (int k = 1; k < T; ++k) {
      CHECK(close_abs(arfima::expected_acv_constant_mean(acv, T, k), -g0 / T,
                      1e-12));
    }

    AcfSequence acf;
    acf.values.assign(static_cast<std::size_t>(T), 0.0);
    acf.values[0] = 1.0;
    for (int k = 0; k < T; ++k) {
      CHECK(close_abs(arfima::bias_rho(acf, T, k), -1.0 / T, 1e-12));
    }
  }
}

TEST_CASE("bias weights") {
  // hand value: w_{10,1,0} = -(11/9)/10 + 2/90 = -0.1
  const std::vector<double> w10 = arfima::bias_weights(10, 1);
  CHECK(close_abs(w10[0], -0.1, 1e-15));

  for (int T : {10, 25, 50, 100, 250}) {
    for (int k : {1, 2, 5, T - 2}) {
      if (k < 1 || k >= T) continue;
      const std::vector<double> w = arfima::bias_weights(T, k);
      REQUIRE(static_cast<int>(w.size()) == T);

      double sum = 0.0;
      double abs_sum = 0.0;
      for (double wi : w) {
        sum += wi;
        abs_sum += std::abs(wi);
        CHECK(wi <= 1e-15);
      }
      CHECK_MESSAGE(close_abs(sum, -1.0, 1e-12), "T=", T, " k=", k);
      const double bound =
          static_cast<double>(T + k) / (T - k) + static_cast<double>(k) / (T - k);
      CHECK(abs_sum <= bound + 1e-12);
    }
  }

  // the weights reproduce bias_rho as a dot product with the ACF
  const int T = 40;
  AcfSequence acf;
  acf.values.resize(static_cast<std::size_t>(T));
  for (int i = 0; i < T; ++i) acf.values[static_cast<std::size_t>(i)] = std::pow(0.7, i);
  for (int k : {1, 3, 7}) {
    const std::vector<double> w = arfima::bias_weights(T, k);
    double dot = 0.0;
    for (int i = 0; i < T; ++i) dot += w[static_cast<std::size_t>(i)] * acf[i];
    CHECK(close_abs(dot, arfima::bias_rho(acf, T, k), 1e-12));
  }

  CHECK_THROWS_AS(arfima::bias_weights(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(arfima::bias_weights(10, 10), std::invalid_argument);
}

TEST_CASE("constant mean expectation agrees with direct double sums") {
  std::mt19937_64 rng(321);
  const int kinds[][2] = {{1, 0}, {0, 1}, {1, 1}, {0, 0}, {2, 1}};
  for (int rep = 0; rep < 20; ++rep) {
    const auto& kind = kinds[rep % 5];
    const ModelSpec model =
        oracle::random_model(rng, kind[0], kind[1], rep % 2 == 1);
    if (!model.is_valid()) continue;
    for (int T : {10, 25, 100}) {
      const AcvSequence acv = arfima::arfima_acv(model, T - 1);
      const double scale = acv[0];
      for (int k : {0, 1, 2, T / 2}) {
        const double fast = arfima::expected_acv_constant_mean(acv, T, k);
        const double three =
            oracle::expected_acv_threepart(acv.values, T, k);
        const double two = oracle::expected_acv_twosum(acv.values, T, k);
        const double proj = oracle::expected_acv_projection(
            acv.values, T, k, oracle::design_constant(T));
        CHECK_MESSAGE(close_abs(fast, three, 1e-10 * scale), "T=", T,
                      " k=", k);
        CHECK_MESSAGE(close_abs(fast, two, 1e-10 * scale), "T=", T, " k=", k);
        CHECK_MESSAGE(close_abs(fast, proj, 1e-10 * scale), "T=", T,
                      " k=", k);
      }
    }
  }
}

TEST_CASE("corrected autocorrelation ratios against frozen values") {
  const int T = 50;
  const int lags[] = {1, 2, 3};
  const struct {
    double phi;
    const double* expect;
  } rows[] = {{0.4, oracle::frozen::kCorrectedAr04},
              {0.6, oracle::frozen::kCorrectedAr06},
              {0.8, oracle::frozen::kCorrectedAr08}};
  for (const auto& row : rows) {
    ModelSpec model;
    model.ar = {row.phi};
    const arfima::BiasProfile profile = arfima::corrected_acf(
        model, T, TrendSpec::constant_unknown(), lags);
    for (int i = 0; i < 3; ++i) {
      CHECK_MESSAGE(close_abs(profile.corrected_rho[static_cast<std::size_t>(i)],
                              row.expect[i], 1e-10),
                    "phi=", row.phi, " k=", lags[i]);
    }
  }

  ModelSpec fwn;
  fwn.d = 0.3;
  const int lags01[] = {0, 1};
  const arfima::BiasProfile profile = arfima::corrected_acf(
      fwn, 100, TrendSpec::constant_unknown(), lags01);
  CHECK(close_abs(profile.expected_acv[0], oracle::frozen::kFwnD03E0, 1e-10));
  CHECK(close_abs(profile.expected_acv[1], oracle::frozen::kFwnD03E1, 1e-10));
}

TEST_CASE("linear regressor expectation agrees with the projection matrix") {
  const int T = 40;
  std::mt19937_64 rng(654);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  std::vector<double> z(static_cast<std::size_t>(T));
  for (double& v : z) v = unif(rng);

  ModelSpec model;
  model.ar = {0.6};
  model.ma = {-0.3};
  const AcvSequence acv = arfima::arfima_acv(model, T - 1);
  for (int k : {0, 1, 2, 5}) {
    const double got = arfima::expected_acv_linear_regressor(acv, T, k, z);
    const double proj = oracle::expected_acv_projection(
        acv.values, T, k, oracle::design_linear(z));
    CHECK_MESSAGE(close_abs(got, proj, 1e-10 * acv[0]), "k=", k);
  }

  // the expectation depends on the regressor only through the fitted
  // subspace, so affine transforms of z leave it unchanged
  std::vector<double> shifted = z;
  for (double& v : shifted) v = 5.0 * v + 3.0;
  for (int k : {0, 1, 3}) {
    CHECK(close_abs(arfima::expected_acv_linear_regressor(acv, T, k, z),
                    arfima::expected_acv_linear_regressor(acv, T, k, shifted),
                    1e-12 * acv[0]));
  }

  const std::vector<double> flat(static_cast<std::size_t>(T), 2.0);
  CHECK_THROWS_AS(arfima::expected_acv_linear_regressor(acv, T, 1, flat),
                  std::invalid_argument);
  const std::vector<double> short_z(static_cast<std::size_t>(T - 1), 0.0);
  CHECK_THROWS_AS(arfima::expected_acv_linear_regressor(acv, T, 1, short_z),
                  std::invalid_argument);
}

TEST_CASE("time trend expectation equals the general form at z_t = t") {
  std::mt19937_64 rng(777);
  for (int rep = 0; rep < 6; ++rep) {
    const ModelSpec model = oracle::random_model(rng, rep % 2, (rep / 2) % 2,
                                                 rep % 3 == 0);
    if (!model.is_valid()) continue;
    for (int T : {10, 25, 60}) {
      const AcvSequence acv = arfima::arfima_acv(model, T - 1);
      std::vector<double> z(static_cast<std::size_t>(T));
      std::iota(z.begin(), z.end(), 1.0);
      for (int k : {0, 1, 2, 5}) {
        const double fast = arfima::expected_acv_time_trend(acv, T, k);
        const double general =
            arfima::expected_acv_linear_regressor(acv, T, k, z);
        const double proj = oracle::expected_acv_projection(
            acv.values, T, k, oracle::design_time_trend(T));
        CHECK_MESSAGE(close_abs(fast, general, 1e-11 * acv[0]), "T=", T,
                      " k=", k);
        CHECK_MESSAGE(close_abs(fast, proj, 1e-10 * acv[0]), "T=", T,
                      " k=", k);
      }
    }
  }
}

TEST_CASE("time trend expectation against frozen values") {
  ModelSpec model;
  model.ar = {0.6};
  const AcvSequence acv = arfima::arfima_acv(model, 49);
  for (int k = 0; k <= 2; ++k) {
    CHECK(close_abs(arfima::expected_acv_time_trend(acv, 50, k),
                    oracle::frozen::kTimeTrendAr06[k], 1e-10));
  }
}

TEST_CASE("corrected autocorrelation profile invariants") {
  ModelSpec model;
  model.ar = {0.6};
  model.sigma2 = 1.4;
  const int lags[] = {0, 1, 2, 5};

  // a known mean leaves the sample autocovariance unbiased
  const arfima::BiasProfile known = arfima::corrected_acf(
      model, 30, TrendSpec::known_mean(3.0), lags);
  const AcvSequence acv = arfima::arfima_acv(model, 29);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(close_abs(known.expected_acv[i], known.gamma[i], 1e-14));
    CHECK(close_abs(known.bias_gamma[i], 0.0, 1e-14));
    CHECK(close_abs(known.corrected_rho[i], acv[lags[i]] / acv[0], 1e-13));
  }

  // estimated constant mean: ratio at lag zero is one by construction,
  // bias entries are consistent with each other
  const arfima::BiasProfile est = arfima::corrected_acf(
      model, 30, TrendSpec::constant_unknown(), lags);
  CHECK(est.corrected_rho[0] == 1.0);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(close_abs(est.bias_gamma[i], est.expected_acv[i] - est.gamma[i],
                    1e-13));
    CHECK(close_abs(est.bias_rho[i], est.bias_gamma[i] / est.gamma[0],
                    1e-13));
    CHECK(est.expected_acv[i] < est.gamma[i]);
  }

  // the correction vanishes as T grows
  const int lag1[] = {1};
  const double rho1 = acv[1] / acv[0];
  const double err25 =
      std::abs(arfima::corrected_acf(model, 25, TrendSpec::constant_unknown(),
                                     lag1)
                   .corrected_rho[0] -
               rho1);
  const double err200 =
      std::abs(arfima::corrected_acf(model, 200,
                                     TrendSpec::constant_unknown(), lag1)
                   .corrected_rho[0] -
               rho1);
  const double err1000 =
      std::abs(arfima::corrected_acf(model, 1000,
                                     TrendSpec::constant_unknown(), lag1)
                   .corrected_rho[0] -
               rho1);
  CHECK(err200 < err25);
  CHECK(err1000 < err200);
}

TEST_CASE("corrected autocorrelation argument checking") {
  ModelSpec model;
  model.ar = {0.5};
  const int lags[] = {1};
  CHECK_THROWS_AS(arfima::corrected_acf(model, 1,
                                        TrendSpec::constant_unknown(), lags),
                  std::invalid_argument);
  const int bad_lag[] = {10};
  CHECK_THROWS_AS(arfima::corrected_acf(model, 10,
                                        TrendSpec::constant_unknown(),
                                        bad_lag),
                  std::invalid_argument);
  const int neg_lag[] = {-1};
  CHECK_THROWS_AS(arfima::corrected_acf(model, 10,
                                        TrendSpec::constant_unknown(),
                                        neg_lag),
                  std::invalid_argument);
  ModelSpec bad;
  bad.ar = {1.2};
  CHECK_THROWS_AS(arfima::corrected_acf(bad, 10,
                                        TrendSpec::constant_unknown(), lags),
                  std::invalid_argument);
}

TEST_CASE("simulated sample autocovariances match the expectation formulas") {
  // Monte Carlo check of E(gamma_hat_k): the mean of gamma_hat_k over
  // exact Gaussian replications must sit within four standard errors of
  // the closed form.
  const int T = 30;
  const int reps = 4000;

  ModelSpec model;
  model.ar = {0.7};
  const AcvSequence acv = arfima::arfima_acv(model, T - 1);

  for (const TrendSpec& trend :
       {TrendSpec::constant_unknown(), TrendSpec::time_trend()}) {
    for (int k : {0, 1}) {
      double sum = 0.0;
      double sum_sq = 0.0;
      for (int rep = 0; rep < reps; ++rep) {
        std::mt19937_64 rng = arfima::replication_rng(9001, static_cast<std::uint64_t>(rep));
        const arfima::SeriesData series = arfima::simulate_gaussian(model, T, rng);
        const arfima::DetrendResult res = arfima::detrend(series, trend);
        const double g = arfima::sample_acv(res.residuals, k);
        sum += g;
        sum_sq += g * g;
      }
      const double mean = sum / reps;
      const double var = (sum_sq - reps * mean * mean) / (reps - 1);
      const double se = std::sqrt(var / reps);
      const double expect =
          trend.kind == TrendSpec::Kind::kConstantUnknown
              ? arfima::expected_acv_constant_mean(acv, T, k)
              : arfima::expected_acv_time_trend(acv, T, k);
      CHECK_MESSAGE(std::abs(mean - expect) <= 4.0 * se, "kind=",
                    static_cast<int>(trend.kind), " k=", k, " mean=", mean,
                    " expect=", expect, " se=", se);
    }
  }
}
