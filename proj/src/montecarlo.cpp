#include "arfima/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace arfima {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Compensated (Kahan) summation, applied in a fixed order so that results
// do not depend on the thread count.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace

FitStructure ExperimentConfig::effective_structure() const {
  if (structure.n_free() > 0) return structure;
  FitStructure s;
  s.p = model.p();
  s.q = model.q();
  s.fit_d = model.d != 0.0;
  s.d_fixed = 0.0;
  return s;
}

void ExperimentConfig::validate() const {
  model.validate();
  options.validate();
  if (T < 4) {
    throw std::invalid_argument("ExperimentConfig: T must be at least 4");
  }
  if (reps < 1) {
    throw std::invalid_argument("ExperimentConfig: reps must be positive");
  }
  if (burn_in < 0) {
    throw std::invalid_argument("ExperimentConfig: burn_in must be >= 0");
  }
  if (methods.empty()) {
    throw std::invalid_argument("ExperimentConfig: no estimation methods");
  }
  if (effective_structure().n_free() < 1) {
    throw std::invalid_argument(
        "ExperimentConfig: the model has no parameters to estimate");
  }
  if (generator == Generator::kRecursiveArma && model.d != 0.0) {
    throw std::invalid_argument(
        "ExperimentConfig: the recursive generator requires d = 0");
  }
  if (trend.kind == TrendSpec::Kind::kLinearRegressor &&
      static_cast<int>(trend.regressor.size()) != T) {
    throw std::invalid_argument(
        "ExperimentConfig: regressor length must equal T");
  }
}

std::mt19937_64 replication_rng(std::uint64_t seed, std::uint64_t rep) {
  const std::uint64_t mixed = splitmix64(splitmix64(seed) ^ splitmix64(rep));
  return std::mt19937_64(mixed);
}

SeriesData simulate_gaussian(const ModelSpec& model, int T,
                             std::mt19937_64& rng) {
  model.validate();
  if (T < 1) {
    throw std::invalid_argument("simulate_gaussian: T must be positive");
  }
  const AcvSequence gamma = arfima_acv(model, T - 1);
  std::normal_distribution<double> normal(0.0, 1.0);

  SeriesData series;
  series.values.resize(static_cast<std::size_t>(T));
  std::vector<double> coef;  // prediction coefficients, most recent first
  std::vector<double> next;
  double v = gamma[0];  // conditional prediction variance
  series.values[0] = std::sqrt(v) * normal(rng);
  for (int t = 1; t < T; ++t) {
    double num = gamma[t];
    for (int j = 1; j < t; ++j) {
      num -= coef[static_cast<std::size_t>(j - 1)] * gamma[t - j];
    }
    const double a = num / v;
    if (!(std::abs(a) < 1.0)) {
      throw std::runtime_error(
          "simulate_gaussian: autocovariance sequence is not positive "
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
    v *= 1.0 - a * a;

    double mean = 0.0;
    for (int j = 1; j <= t; ++j) {
      mean += coef[static_cast<std::size_t>(j - 1)] *
              series.values[static_cast<std::size_t>(t - j)];
    }
    series.values[static_cast<std::size_t>(t)] =
        mean + std::sqrt(v) * normal(rng);
  }
  return series;
}

SeriesData simulate_recursive_arma(std::span<const double> ar,
                                   std::span<const double> ma, double sigma2,
                                   int T, int burn_in, std::mt19937_64& rng) {
  if (T < 1) {
    throw std::invalid_argument("simulate_recursive_arma: T must be positive");
  }
  if (burn_in < 0) {
    throw std::invalid_argument("simulate_recursive_arma: burn_in must be >= 0");
  }
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument(
        "simulate_recursive_arma: sigma2 must be positive");
  }
  if (!roots_outside_unit_circle(ar)) {
    throw std::invalid_argument(
        "simulate_recursive_arma: AR polynomial has a root on or inside the "
        "unit circle");
  }
  const int p = static_cast<int>(ar.size());
  const int q = static_cast<int>(ma.size());
  const int n = T + burn_in;
  std::normal_distribution<double> normal(0.0, std::sqrt(sigma2));
  std::vector<double> a(static_cast<std::size_t>(n));
  for (double& v : a) v = normal(rng);
  std::vector<double> u(static_cast<std::size_t>(n), 0.0);
  for (int t = 0; t < n; ++t) {
    double value = a[static_cast<std::size_t>(t)];
    for (int j = 1; j <= q && j <= t; ++j) {
      value += ma[static_cast<std::size_t>(j - 1)] *
               a[static_cast<std::size_t>(t - j)];
    }
    for (int i = 1; i <= p && i <= t; ++i) {
      value += ar[static_cast<std::size_t>(i - 1)] *
               u[static_cast<std::size_t>(t - i)];
    }
    u[static_cast<std::size_t>(t)] = value;
  }
  SeriesData series;
  series.values.assign(u.begin() + burn_in, u.end());
  return series;
}

SeriesData apply_trend(const SeriesData& series, const TrendSpec& trend,
                       double alpha, double beta) {
  const int T = series.size();
  if (trend.kind == TrendSpec::Kind::kLinearRegressor &&
      static_cast<int>(trend.regressor.size()) != T) {
    throw std::invalid_argument(
        "apply_trend: regressor length must equal the series length");
  }
  SeriesData out = series;
  for (int t = 0; t < T; ++t) {
    double z = 0.0;
    if (trend.kind == TrendSpec::Kind::kTimeTrend) {
      z = t + 1;
    } else if (trend.kind == TrendSpec::Kind::kLinearRegressor) {
      z = trend.regressor[static_cast<std::size_t>(t)];
    }
    out.values[static_cast<std::size_t>(t)] += alpha + beta * z;
  }
  return out;
}

McSummary run_experiment(const ExperimentConfig& config) {
  config.validate();
  const FitStructure structure = config.effective_structure();
  const int n_par = structure.n_free();
  const int n_methods = static_cast<int>(config.methods.size());
  const int reps = config.reps;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  // estimates[(rep * n_methods + m) * n_par + i]
  std::vector<double> estimates(
      static_cast<std::size_t>(reps) * n_methods * n_par, nan);
  std::vector<unsigned char> failed(
      static_cast<std::size_t>(reps) * n_methods, 0);

  auto run_block = [&](int rep_begin, int rep_end) {
    for (int rep = rep_begin; rep < rep_end; ++rep) {
      std::mt19937_64 rng =
          replication_rng(config.seed, static_cast<std::uint64_t>(rep));
      SeriesData base;
      try {
        base = (config.generator == Generator::kExactGaussian)
                   ? simulate_gaussian(config.model, config.T, rng)
                   : simulate_recursive_arma(config.model.ar, config.model.ma,
                                             config.model.sigma2, config.T,
                                             config.burn_in, rng);
      } catch (const std::exception&) {
        for (int m = 0; m < n_methods; ++m) {
          failed[static_cast<std::size_t>(rep) * n_methods + m] = 1;
        }
        continue;
      }
      const SeriesData series =
          apply_trend(base, config.trend, config.alpha, config.beta);
      for (int m = 0; m < n_methods; ++m) {
        EstimationOptions options = config.options;
        options.method = config.methods[static_cast<std::size_t>(m)];
        try {
          const EstimateResult result =
              fit(series, structure, config.trend, options);
          for (int i = 0; i < n_par; ++i) {
            estimates[(static_cast<std::size_t>(rep) * n_methods + m) *
                          n_par +
                      i] = result.params[static_cast<std::size_t>(i)];
          }
        } catch (const std::exception&) {
          failed[static_cast<std::size_t>(rep) * n_methods + m] = 1;
        }
      }
    }
  };

  int n_threads = config.threads;
  if (n_threads <= 0) {
    n_threads = static_cast<int>(
        std::max(1u, std::thread::hardware_concurrency()));
  }
  n_threads = std::min(n_threads, reps);
  if (n_threads <= 1) {
    run_block(0, reps);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_threads));
    const int chunk = (reps + n_threads - 1) / n_threads;
    for (int w = 0; w < n_threads; ++w) {
      const int begin = w * chunk;
      const int end = std::min(reps, begin + chunk);
      if (begin >= end) break;
      workers.emplace_back(run_block, begin, end);
    }
    for (std::thread& worker : workers) worker.join();
  }

  McSummary summary;
  summary.truth = pack_parameters(config.model, structure);
  summary.reps = reps;
  summary.seed = config.seed;
  summary.estimators.reserve(static_cast<std::size_t>(n_methods));
  for (int m = 0; m < n_methods; ++m) {
    McEstimatorSummary s;
    s.method = config.methods[static_cast<std::size_t>(m)];
    s.mean.assign(static_cast<std::size_t>(n_par), nan);
    s.sd.assign(static_cast<std::size_t>(n_par), nan);
    s.rmse.assign(static_cast<std::size_t>(n_par), nan);
    int n_ok = 0;
    for (int rep = 0; rep < reps; ++rep) {
      if (failed[static_cast<std::size_t>(rep) * n_methods + m]) {
        ++s.failures;
      } else {
        ++n_ok;
      }
    }
    if (n_ok > 0) {
      for (int i = 0; i < n_par; ++i) {
        const double truth = summary.truth[static_cast<std::size_t>(i)];
        KahanSum sum;
        for (int rep = 0; rep < reps; ++rep) {
          if (failed[static_cast<std::size_t>(rep) * n_methods + m]) continue;
          sum.add(estimates[(static_cast<std::size_t>(rep) * n_methods + m) *
                                n_par +
                            i]);
        }
        const double mean = sum.value() / n_ok;
        KahanSum centered;
        KahanSum about_truth;
        for (int rep = 0; rep < reps; ++rep) {
          if (failed[static_cast<std::size_t>(rep) * n_methods + m]) continue;
          const double x =
              estimates[(static_cast<std::size_t>(rep) * n_methods + m) *
                            n_par +
                        i];
          centered.add((x - mean) * (x - mean));
          about_truth.add((x - truth) * (x - truth));
        }
        s.mean[static_cast<std::size_t>(i)] = mean;
        if (n_ok > 1) {
          s.sd[static_cast<std::size_t>(i)] =
              std::sqrt(centered.value() / (n_ok - 1));
        }
        s.rmse[static_cast<std::size_t>(i)] =
            std::sqrt(about_truth.value() / n_ok);
      }
    }
    summary.estimators.push_back(std::move(s));
  }
  return summary;
}

}  // namespace arfima
