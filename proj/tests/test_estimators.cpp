#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "arfima/estimators.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "arfima/montecarlo.hpp"
#include "arfima/optimize.hpp"
#include "oracles.hpp"

using arfima::EstimationOptions;
using arfima::FitStructure;
using arfima::Method;
using arfima::ModelSpec;
using arfima::SeriesData;
using arfima::TrendSpec;

namespace {

bool close_abs(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

ModelSpec ar1(double phi) {
  ModelSpec model;
  model.ar = {phi};
  return model;
}

std::vector<double> identity_weight(std::size_t m) {
  std::vector<double> w(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) w[i * m + i] = 1.0;
  return w;
}

}  // namespace

TEST_CASE("method names") {
  CHECK(arfima::method_name(Method::kBcmde) == std::string("bcmde"));
  CHECK(arfima::method_from_name("whittle") == Method::kWhittle);
  CHECK(arfima::method_from_name("mle") == Method::kMle);
  CHECK_THROWS_AS(arfima::method_from_name("ols"), std::invalid_argument);
}

TEST_CASE("parameter packing round trip") {
  FitStructure structure;
  structure.p = 2;
  structure.q = 1;
  structure.fit_d = true;

  ModelSpec model;
  model.ar = {0.5, -0.2};
  model.ma = {0.3};
  model.d = 0.1;
  const std::vector<double> packed = arfima::pack_parameters(model, structure);
  REQUIRE(packed.size() == 4);
  CHECK(packed[0] == 0.5);
  CHECK(packed[2] == 0.3);
  CHECK(packed[3] == 0.1);

  const ModelSpec back = arfima::model_from_parameters(packed, structure);
  CHECK(back.ar == model.ar);
  CHECK(back.ma == model.ma);
  CHECK(back.d == model.d);
  CHECK(back.sigma2 == 1.0);

  // a fixed d is taken from the structure, not the parameter vector
  structure.fit_d = false;
  structure.d_fixed = 0.25;
  const ModelSpec fixed =
      arfima::model_from_parameters(std::vector<double>{0.5, -0.2, 0.3},
                                    structure);
  CHECK(fixed.d == 0.25);
}

TEST_CASE("estimation options validation") {
  EstimationOptions ok;
  CHECK_NOTHROW(ok.validate());

  EstimationOptions bad = ok;
  bad.lags = {2, 2};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.lags = {0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.lags = {3, 1};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.ar_bound = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.d_bound = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.x_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.max_iterations = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("distance objective vanishes at the truth") {
  const int lags[] = {1, 2, 3};
  const ModelSpec truth = ar1(0.6);
  const arfima::AcvSequence acv = arfima::arfima_acv(truth, 3);
  const std::vector<double> rho_hat = {acv[1] / acv[0], acv[2] / acv[0],
                                       acv[3] / acv[0]};
  const std::vector<double> w = identity_weight(3);
  CHECK(arfima::mde_objective(truth, lags, rho_hat, w) <= 1e-18);
  CHECK(arfima::mde_objective(ar1(0.3), lags, rho_hat, w) > 1e-3);
}

TEST_CASE("scalar search finds the analytic distance minimizer") {
  // for AR(1) on lag 1 with identity weight the objective is
  // (rho_hat_1 - phi)^2, minimized exactly at phi = rho_hat_1
  const int lags[] = {1};
  const std::vector<double> rho_hat = {0.55};
  const std::vector<double> w = identity_weight(1);
  const auto objective = [&](double phi) {
    return arfima::mde_objective(ar1(phi), lags, rho_hat, w);
  };
  const arfima::ScalarMinResult res =
      arfima::minimize_scalar(objective, -0.99, 0.99);
  CHECK(res.converged);
  CHECK(close_abs(res.x, 0.55, 1e-7));
}

TEST_CASE("scaling the weight matrix leaves the minimizer unchanged") {
  const int lags[] = {1, 2};
  const std::vector<double> rho_hat = {0.42, 0.31};
  std::vector<double> w = identity_weight(2);
  std::vector<double> w17 = w;
  for (double& v : w17) v *= 17.0;

  const auto argmin = [&](const std::vector<double>& weight) {
    const auto objective = [&](double phi) {
      return arfima::mde_objective(ar1(phi), lags, rho_hat, weight);
    };
    return arfima::minimize_scalar(objective, -0.99, 0.99).x;
  };
  CHECK(close_abs(argmin(w), argmin(w17), 1e-7));
  CHECK(close_abs(arfima::mde_objective(ar1(0.4), lags, rho_hat, w17),
                  17.0 * arfima::mde_objective(ar1(0.4), lags, rho_hat, w),
                  1e-12));
}

TEST_CASE("corrected distance target approaches the theoretical one") {
  const int lags[] = {1};
  const std::vector<double> rho_hat = {0.5};
  const std::vector<double> w = identity_weight(1);
  const ModelSpec model = ar1(0.7);
  const TrendSpec trend = TrendSpec::constant_unknown();

  const double base = arfima::mde_objective(model, lags, rho_hat, w);
  const auto gap = [&](int T) {
    return std::abs(
        arfima::bcmde_objective(model, T, trend, lags, rho_hat, w) - base);
  };
  const double gap200 = gap(200);
  const double gap2000 = gap(2000);
  const double gap20000 = gap(20000);
  CHECK(gap2000 < gap200);
  CHECK(gap20000 < gap2000);
  // the corrected target differs from rho by O(1/T)
  CHECK(gap2000 / gap20000 == doctest::Approx(10.0).epsilon(0.3));
}

TEST_CASE("corrected distance objective hits the white noise target") {
  // under an estimated constant mean the corrected lag-1 target of white
  // noise is -1/(T-1)
  const int T = 37;
  const int lags[] = {1};
  const std::vector<double> w = identity_weight(1);
  const std::vector<double> rho_hat = {-1.0 / (T - 1)};
  const ModelSpec wn;
  CHECK(arfima::bcmde_objective(wn, T, TrendSpec::constant_unknown(), lags,
                                rho_hat, w) <= 1e-16);
}

TEST_CASE("Whittle objective") {
  std::mt19937_64 rng(112);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int T = 128;
  std::vector<double> x(static_cast<std::size_t>(T));
  for (double& v : x) v = normal(rng);
  const std::vector<double> pg = arfima::periodogram(x);

  // the objective is concentrated, so model.sigma2 is irrelevant
  ModelSpec m1 = ar1(0.4);
  ModelSpec m4 = ar1(0.4);
  m4.sigma2 = 4.0;
  const auto r1 = arfima::whittle_objective(m1, pg, T);
  const auto r4 = arfima::whittle_objective(m4, pg, T);
  CHECK(r1.first == r4.first);
  CHECK(r1.second == r4.second);

  // white noise: the spectral weights are one, so sigma2_hat is the plain
  // periodogram average times 2 pi
  const ModelSpec wn;
  const auto rw = arfima::whittle_objective(wn, pg, T);
  double mean_pg = 0.0;
  for (double v : pg) mean_pg += v;
  mean_pg /= static_cast<double>(pg.size());
  const double expect_sigma2 = 2.0 * std::numbers::pi * mean_pg;
  CHECK(close_abs(rw.second, expect_sigma2, 1e-12 * expect_sigma2));
  const double m = static_cast<double>(pg.size());
  CHECK(close_abs(rw.first,
                  m * std::log(expect_sigma2 / (2.0 * std::numbers::pi)) + m,
                  1e-10));

  const std::vector<double> wrong(pg.size() - 1);
  CHECK_THROWS_AS(arfima::whittle_objective(wn, wrong, T),
                  std::invalid_argument);
}

TEST_CASE("exact likelihood matches the iid closed form") {
  std::mt19937_64 rng(113);
  std::normal_distribution<double> normal(0.0, 1.5);
  const int T = 96;
  std::vector<double> e(static_cast<std::size_t>(T));
  for (double& v : e) v = normal(rng);

  const ModelSpec wn;
  const auto r = arfima::exact_gaussian_loglik(wn, e);
  double sum_sq = 0.0;
  for (double v : e) sum_sq += v * v;
  const double sigma2_hat = sum_sq / T;
  CHECK(close_abs(r.second, sigma2_hat, 1e-12 * sigma2_hat));
  const double expect =
      -0.5 * T * (std::log(2.0 * std::numbers::pi * sigma2_hat) + 1.0);
  CHECK(close_abs(r.first, expect, 1e-10));
}

TEST_CASE("exact likelihood matches the AR(1) closed form") {
  ModelSpec truth = ar1(0.65);
  std::mt19937_64 rng = arfima::replication_rng(77, 0);
  const SeriesData series = arfima::simulate_gaussian(truth, 200, rng);

  for (double phi : {0.2, 0.65, 0.9}) {
    const auto r = arfima::exact_gaussian_loglik(ar1(phi), series.values);
    const double direct =
        oracle::ar1_loglik(series.values, phi, r.second);
    CHECK_MESSAGE(close_abs(r.first, direct, 1e-8 * std::abs(direct)),
                  "phi=", phi);
  }
}

TEST_CASE("asymptotic covariance of the sample autocorrelations") {
  // white noise: C is the identity
  arfima::AcfSequence wn_acf;
  wn_acf.values.assign(400, 0.0);
  wn_acf.values[0] = 1.0;
  const int lags[] = {1, 2, 3};
  const std::vector<double> c_wn = arfima::asymptotic_cov_C(wn_acf, lags);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(close_abs(c_wn[static_cast<std::size_t>(3 * i + j)],
                      i == j ? 1.0 : 0.0, 1e-8));
    }
  }

  // AR(1): the lag-1 asymptotic variance is 1 - phi^2
  for (double phi : {0.5, 0.8}) {
    arfima::AcfSequence acf;
    acf.values.resize(600);
    for (std::size_t i = 0; i < acf.values.size(); ++i) {
      acf.values[i] = std::pow(phi, static_cast<double>(i));
    }
    const int lag1[] = {1, 2};
    const std::vector<double> c = arfima::asymptotic_cov_C(acf, lag1);
    CHECK(close_abs(c[0], 1.0 - phi * phi, 1e-6));
    CHECK(c[1] == c[2]);
    CHECK(c[0] > 0.0);
    CHECK(c[3] > 0.0);
  }

  // an ACF that ends before the terms decay is rejected
  arfima::AcfSequence stub;
  stub.values = {1.0, 0.8, 0.64};
  CHECK_THROWS(arfima::asymptotic_cov_C(stub, lags));
}

TEST_CASE("distance fit solves the lag-1 matching equation") {
  ModelSpec truth = ar1(0.6);
  std::mt19937_64 rng = arfima::replication_rng(78, 3);
  SeriesData series = arfima::simulate_gaussian(truth, 1500, rng);
  for (double& v : series.values) v += 10.0;

  const TrendSpec trend = TrendSpec::constant_unknown();
  FitStructure structure;
  structure.p = 1;

  EstimationOptions options;
  options.method = Method::kMde;
  const arfima::EstimateResult mde =
      arfima::fit(series, structure, trend, options);

  // for AR(1) on lag 1, the minimum distance estimate is the sample
  // autocorrelation itself
  const arfima::DetrendResult det = arfima::detrend(series, trend);
  const int lag1[] = {1};
  const double rho1 = arfima::sample_acf(det.residuals, lag1)[0];
  CHECK(mde.converged);
  CHECK(close_abs(mde.params[0], rho1, 1e-6));
  CHECK(mde.model.ar[0] == mde.params[0]);
  CHECK(mde.sigma2_hat > 0.0);

  options.method = Method::kBcmde;
  const arfima::EstimateResult bcmde =
      arfima::fit(series, structure, trend, options);
  CHECK(bcmde.converged);
  // the corrected target is below the theoretical one, so the corrected
  // estimate sits above the plain one
  CHECK(bcmde.params[0] > mde.params[0]);
  CHECK(close_abs(bcmde.params[0], mde.params[0], 0.05));
}

TEST_CASE("estimates are clamped to the search box") {
  // a long pure line has lag-1 sample autocorrelation above 0.99, beyond
  // any AR(1) inside the box, so the fit lands at the box edge
  SeriesData series;
  series.values.resize(600);
  for (int t = 0; t < 600; ++t) {
    series.values[static_cast<std::size_t>(t)] = t;
  }

  FitStructure structure;
  structure.p = 1;
  EstimationOptions options;
  options.method = Method::kMde;
  const arfima::EstimateResult res = arfima::fit(
      series, structure, TrendSpec::constant_unknown(), options);
  CHECK(res.params[0] >= 0.989);
  CHECK(res.params[0] <= 0.99);
}

TEST_CASE("simplex fit recovers ARMA(1,1) parameters") {
  ModelSpec truth;
  truth.ar = {0.5};
  truth.ma = {0.3};
  std::mt19937_64 rng = arfima::replication_rng(79, 1);
  const SeriesData series = arfima::simulate_gaussian(truth, 400, rng);

  FitStructure structure;
  structure.p = 1;
  structure.q = 1;
  EstimationOptions options;
  options.method = Method::kMle;
  const arfima::EstimateResult res = arfima::fit(
      series, structure, TrendSpec::constant_unknown(), options);
  CHECK(res.converged);
  CHECK(close_abs(res.params[0], 0.5, 0.2));
  CHECK(close_abs(res.params[1], 0.3, 0.25));
  CHECK(close_abs(res.sigma2_hat, 1.0, 0.3));

  // the fitted objective cannot exceed the one at the truth
  const arfima::DetrendResult det =
      arfima::detrend(series, TrendSpec::constant_unknown());
  const double at_truth =
      -arfima::exact_gaussian_loglik(truth, det.residuals).first;
  CHECK(res.objective_value <= at_truth + 1e-9);
}

TEST_CASE("two stage weighting refines the first stage") {
  ModelSpec truth;
  truth.d = 0.3;
  std::mt19937_64 rng = arfima::replication_rng(80, 5);
  const SeriesData series = arfima::simulate_gaussian(truth, 300, rng);

  FitStructure structure;
  structure.fit_d = true;
  EstimationOptions options;
  options.method = Method::kBcmde;
  options.lags = {1, 2, 3};
  options.weighting = arfima::Weighting::kInverseC;
  const arfima::EstimateResult res = arfima::fit(
      series, structure, TrendSpec::constant_unknown(), options);
  CHECK(res.converged);
  CHECK(res.params[0] > -0.49);
  CHECK(res.params[0] < 0.49);
  CHECK(close_abs(res.params[0], 0.3, 0.2));
}

TEST_CASE("fit rejects structures without free parameters") {
  SeriesData series;
  series.values = {1.0, 2.0, 0.5, -1.0, 0.3, 1.2, -0.7, 0.1};
  FitStructure structure;
  EstimationOptions options;
  CHECK_THROWS_AS(arfima::fit(series, structure,
                              TrendSpec::constant_unknown(), options),
                  std::invalid_argument);
}

TEST_CASE("Whittle replication mean near the AR(1) reference") {
  // 400 exact Gaussian replications of AR(1), phi = 0.8, T = 100; the
  // replication mean of the Whittle estimate stays within the tabulated
  // neighborhood of 0.7789
  const ModelSpec truth = ar1(0.8);
  FitStructure structure;
  structure.p = 1;
  EstimationOptions options;
  options.method = Method::kWhittle;

  double sum = 0.0;
  const int reps = 400;
  for (int rep = 0; rep < reps; ++rep) {
    std::mt19937_64 rng =
        arfima::replication_rng(81, static_cast<std::uint64_t>(rep));
    const SeriesData series = arfima::simulate_gaussian(truth, 100, rng);
    sum += arfima::fit(series, structure, TrendSpec::constant_unknown(),
                       options)
               .params[0];
  }
  CHECK(close_abs(sum / reps, 0.7789, 0.03));
}
