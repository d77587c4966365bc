#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "arfima/estimators.hpp"

// Simulation of ARFIMA series and replicated estimation experiments.

namespace arfima {

enum class Generator {
  kExactGaussian,   // Durbin-Levinson conditional sampling, any d
  kRecursiveArma,   // difference-equation recursion after burn-in, d = 0
};

// One Monte Carlo experiment: simulate series from model with the trend
// mu_t = alpha + beta z_t added, estimate with each requested method, and
// summarize the sampling distribution of the parameter estimates.
struct ExperimentConfig {
  ModelSpec model;
  int T = 100;
  TrendSpec trend = TrendSpec::constant_unknown();
  double alpha = 0.0;  // injected trend level
  double beta = 0.0;   // injected trend slope (regressor and time trends)
  std::vector<Method> methods = {Method::kBcmde};
  FitStructure structure;  // all-zero orders mean "derive from model"
  EstimationOptions options;  // method field is overridden per entry
  int reps = 1000;
  int burn_in = 500;  // kRecursiveArma only
  std::uint64_t seed = 1;
  Generator generator = Generator::kExactGaussian;
  int threads = 1;  // <= 0 means one worker per hardware thread

  // The structure actually fitted: the explicit one when it has free
  // parameters, otherwise p = model.p(), q = model.q(), with d fitted
  // exactly when model.d != 0.
  FitStructure effective_structure() const;

  // Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

// Sampling summary for one estimation method; entries are per free
// parameter, in packed order.  Replications whose fit threw are excluded
// from the moments and counted in failures.
struct McEstimatorSummary {
  Method method = Method::kBcmde;
  std::vector<double> mean;
  std::vector<double> sd;    // sample standard deviation, divisor n - 1
  std::vector<double> rmse;  // sqrt(mean squared error about the truth)
  int failures = 0;
};

struct McSummary {
  std::vector<double> truth;  // packed true parameters
  std::vector<McEstimatorSummary> estimators;
  int reps = 0;
  std::uint64_t seed = 0;
};

// RNG for one replication.  Streams for distinct (seed, rep) pairs are
// decorrelated by hashing both through splitmix64 before seeding.  Results
// of a replicated experiment therefore do not depend on how replications
// are distributed over threads.
std::mt19937_64 replication_rng(std::uint64_t seed, std::uint64_t rep);

// Draws X_1..X_T exactly from the zero-mean Gaussian process with the
// model's autocovariances, by Durbin-Levinson conditional sampling: each
// X_t is drawn from its normal distribution given X_1..X_{t-1}.
SeriesData simulate_gaussian(const ModelSpec& model, int T,
                             std::mt19937_64& rng);

// Simulates a zero-mean ARMA series by iterating
//   u_t = a_t + theta_1 a_{t-1} + ... + phi_1 u_{t-1} + ...
// from zero initial conditions with Gaussian innovations, discarding the
// first burn_in values.  The start-up transient decays geometrically but
// never exactly vanishes, unlike with simulate_gaussian.
SeriesData simulate_recursive_arma(std::span<const double> ar,
                                   std::span<const double> ma, double sigma2,
                                   int T, int burn_in, std::mt19937_64& rng);

// Adds the deterministic mean mu_t = alpha + beta z_t, where z_t = t for
// kTimeTrend, z_t is trend.regressor for kLinearRegressor, and z_t = 0
// otherwise.
SeriesData apply_trend(const SeriesData& series, const TrendSpec& trend,
                       double alpha, double beta);

// Runs the experiment.  Replication r uses replication_rng(seed, r), one
// simulated series shared by all methods, and the same trend specification
// for injection and estimation.  Summaries are aggregated in replication
// order regardless of the thread count, so results are bit-identical for
// any threads setting.
McSummary run_experiment(const ExperimentConfig& config);

}  // namespace arfima
