// Command line interface: theoretical ACFs, finite-sample bias profiles,
// parameter estimation, simulation, and replicated benchmark experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arfima/benchmark_cells.hpp"
#include "arfima/bias.hpp"
#include "arfima/estimators.hpp"
#include "arfima/model_acf.hpp"
#include "arfima/montecarlo.hpp"
#include "arfima/sample_stats.hpp"

namespace {

using nlohmann::json;

std::string fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

std::string fmt_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Writes text to the given path, or to stdout when the path is "-".
void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  out << text;
}

std::vector<double> read_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open input file: " + path);
  }
  std::vector<double> values;
  double v = 0.0;
  while (in >> v) values.push_back(v);
  if (!in.eof()) {
    throw std::runtime_error("non-numeric content in input file: " + path);
  }
  return values;
}

struct ModelFlags {
  std::vector<double> phi;
  std::vector<double> theta;
  double d = 0.0;
  double sigma2 = 1.0;

  arfima::ModelSpec to_model() const {
    arfima::ModelSpec model;
    model.ar = phi;
    model.ma = theta;
    model.d = d;
    model.sigma2 = sigma2;
    model.validate();
    return model;
  }
};

void add_model_flags(CLI::App* cmd, ModelFlags* flags) {
  cmd->add_option("--phi", flags->phi, "AR coefficients phi_1..phi_p")
      ->delimiter(',');
  cmd->add_option("--theta", flags->theta, "MA coefficients theta_1..theta_q")
      ->delimiter(',');
  cmd->add_option("--d", flags->d, "fractional differencing parameter");
  cmd->add_option("--sigma2", flags->sigma2, "innovation variance");
}

struct TrendFlags {
  std::string trend = "constant";
  double mu = 0.0;
  std::string z_file;

  arfima::TrendSpec to_trend(int T) const {
    if (trend == "known") return arfima::TrendSpec::known_mean(mu);
    if (trend == "constant") return arfima::TrendSpec::constant_unknown();
    if (trend == "time") return arfima::TrendSpec::time_trend();
    if (trend == "regressor") {
      if (z_file.empty()) {
        throw std::runtime_error(
            "--trend regressor requires --z-file");
      }
      std::vector<double> z = read_values(z_file);
      if (static_cast<int>(z.size()) != T) {
        throw std::runtime_error(
            "regressor file must contain exactly T values");
      }
      return arfima::TrendSpec::linear_regressor(std::move(z));
    }
    throw std::runtime_error("unknown trend: " + trend);
  }
};

void add_trend_flags(CLI::App* cmd, TrendFlags* flags) {
  cmd->add_option("--trend", flags->trend,
                  "mean specification: known, constant, time, regressor")
      ->check(CLI::IsMember({"known", "constant", "time", "regressor"}));
  cmd->add_option("--mu", flags->mu, "known mean value (trend=known)");
  cmd->add_option("--z-file", flags->z_file,
                  "file with T regressor values (trend=regressor)");
}

int run_acf(const ModelFlags& model_flags, int max_lag,
            const std::string& output) {
  const arfima::ModelSpec model = model_flags.to_model();
  const arfima::AcvSequence acv = arfima::arfima_acv(model, max_lag);
  std::ostringstream out;
  out << "lag,gamma,rho\n";
  for (int k = 0; k <= max_lag; ++k) {
    out << k << ',' << fmt6(acv[k]) << ',' << fmt6(acv[k] / acv[0]) << '\n';
  }
  write_text(output, out.str());
  return 0;
}

int run_bias(const ModelFlags& model_flags, const TrendFlags& trend_flags,
             int T, int max_lag, const std::string& output) {
  const arfima::ModelSpec model = model_flags.to_model();
  if (max_lag < 0) max_lag = std::min(T - 1, 50);
  if (max_lag > T - 1) {
    throw std::runtime_error("--max-lag must be below T");
  }
  const arfima::TrendSpec trend = trend_flags.to_trend(T);
  std::vector<int> lags(static_cast<std::size_t>(max_lag) + 1);
  for (int k = 0; k <= max_lag; ++k) lags[static_cast<std::size_t>(k)] = k;
  const arfima::BiasProfile profile =
      arfima::corrected_acf(model, T, trend, lags);
  std::ostringstream out;
  out << "lag,gamma,expected_gamma,bias_gamma,bias_rho,corrected_rho\n";
  for (std::size_t i = 0; i < lags.size(); ++i) {
    out << profile.lags[i] << ',' << fmt6(profile.gamma[i]) << ','
        << fmt6(profile.expected_acv[i]) << ',' << fmt6(profile.bias_gamma[i])
        << ',' << fmt6(profile.bias_rho[i]) << ','
        << fmt6(profile.corrected_rho[i]) << '\n';
  }
  write_text(output, out.str());
  return 0;
}

int run_estimate(const std::string& input, const std::string& method,
                 int p, int q, bool fit_d, double d_fixed,
                 const TrendFlags& trend_flags, std::vector<int> lags,
                 const std::string& weighting, const std::string& output) {
  arfima::SeriesData series;
  series.values = read_values(input);
  series.validate();
  const arfima::TrendSpec trend = trend_flags.to_trend(series.size());

  arfima::FitStructure structure;
  structure.p = p;
  structure.q = q;
  structure.fit_d = fit_d;
  structure.d_fixed = d_fixed;

  arfima::EstimationOptions options;
  options.method = arfima::method_from_name(method);
  options.lags = std::move(lags);
  options.weighting = (weighting == "inverse-c")
                          ? arfima::Weighting::kInverseC
                          : arfima::Weighting::kIdentity;

  const arfima::EstimateResult result =
      arfima::fit(series, structure, trend, options);
  const arfima::DetrendResult det = arfima::detrend(series, trend);

  json j;
  j["method"] = method;
  j["p"] = p;
  j["q"] = q;
  j["fit_d"] = fit_d;
  j["phi"] = result.model.ar;
  j["theta"] = result.model.ma;
  j["d"] = result.model.d;
  j["sigma2_hat"] = result.sigma2_hat;
  j["objective"] = result.objective_value;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["lags"] = options.lags;
  j["trend"] = trend_flags.trend;
  j["T"] = series.size();
  if (det.alpha_hat) j["alpha_hat"] = *det.alpha_hat;
  if (det.beta_hat) j["beta_hat"] = *det.beta_hat;
  write_text(output, j.dump(2) + "\n");
  return 0;
}

int run_simulate(const ModelFlags& model_flags, int T, std::uint64_t seed,
                 std::uint64_t rep, const std::string& generator, int burn_in,
                 const std::string& trend, double alpha, double beta,
                 const std::string& z_file, const std::string& output) {
  const arfima::ModelSpec model = model_flags.to_model();
  std::mt19937_64 rng = arfima::replication_rng(seed, rep);
  arfima::SeriesData series;
  if (generator == "recursive") {
    if (model.d != 0.0) {
      throw std::runtime_error("--generator recursive requires d = 0");
    }
    series = arfima::simulate_recursive_arma(model.ar, model.ma, model.sigma2,
                                             T, burn_in, rng);
  } else {
    series = arfima::simulate_gaussian(model, T, rng);
  }
  if (trend != "none") {
    TrendFlags trend_flags;
    trend_flags.trend = trend;
    trend_flags.z_file = z_file;
    series = arfima::apply_trend(series, trend_flags.to_trend(T), alpha, beta);
  }
  std::ostringstream out;
  for (double v : series.values) out << fmt_full(v) << '\n';
  write_text(output, out.str());
  return 0;
}

arfima::ExperimentConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const char* ws = " \t\r\n";
      const std::size_t b = s.find_first_not_of(ws);
      if (b == std::string::npos) return std::string();
      const std::size_t e = s.find_last_not_of(ws);
      return s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = value;
  }

  auto split_list = [](const std::string& s) {
    std::vector<std::string> items;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::size_t b = item.find_first_not_of(" \t");
      if (b == std::string::npos) continue;
      const std::size_t e = item.find_last_not_of(" \t");
      items.push_back(item.substr(b, e - b + 1));
    }
    return items;
  };
  auto get = [&](const char* key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };

  arfima::ExperimentConfig config;
  if (const auto v = get("phi")) {
    for (const std::string& s : split_list(*v)) {
      config.model.ar.push_back(std::stod(s));
    }
  }
  if (const auto v = get("theta")) {
    for (const std::string& s : split_list(*v)) {
      config.model.ma.push_back(std::stod(s));
    }
  }
  if (const auto v = get("d")) config.model.d = std::stod(*v);
  if (const auto v = get("sigma2")) config.model.sigma2 = std::stod(*v);
  if (const auto v = get("T")) config.T = std::stoi(*v);
  if (const auto v = get("alpha")) config.alpha = std::stod(*v);
  if (const auto v = get("beta")) config.beta = std::stod(*v);
  if (const auto v = get("reps")) config.reps = std::stoi(*v);
  if (const auto v = get("burn_in")) config.burn_in = std::stoi(*v);
  if (const auto v = get("seed")) config.seed = std::stoull(*v);
  if (const auto v = get("threads")) config.threads = std::stoi(*v);
  if (const auto v = get("generator")) {
    if (*v == "exact") {
      config.generator = arfima::Generator::kExactGaussian;
    } else if (*v == "recursive") {
      config.generator = arfima::Generator::kRecursiveArma;
    } else {
      throw std::runtime_error("config: unknown generator: " + *v);
    }
  }
  if (const auto v = get("trend")) {
    if (*v == "known") {
      double mu = 0.0;
      if (const auto m = get("mu")) mu = std::stod(*m);
      config.trend = arfima::TrendSpec::known_mean(mu);
    } else if (*v == "constant") {
      config.trend = arfima::TrendSpec::constant_unknown();
    } else if (*v == "time") {
      config.trend = arfima::TrendSpec::time_trend();
    } else if (*v == "regressor") {
      const auto z = get("z");
      if (!z) throw std::runtime_error("config: trend=regressor requires z");
      std::vector<double> zv;
      for (const std::string& s : split_list(*z)) zv.push_back(std::stod(s));
      config.trend = arfima::TrendSpec::linear_regressor(std::move(zv));
    } else {
      throw std::runtime_error("config: unknown trend: " + *v);
    }
  }
  if (const auto v = get("methods")) {
    config.methods.clear();
    for (const std::string& s : split_list(*v)) {
      config.methods.push_back(arfima::method_from_name(s));
    }
  }
  if (const auto v = get("lags")) {
    config.options.lags.clear();
    for (const std::string& s : split_list(*v)) {
      config.options.lags.push_back(std::stoi(s));
    }
  }
  if (const auto v = get("weighting")) {
    if (*v == "identity") {
      config.options.weighting = arfima::Weighting::kIdentity;
    } else if (*v == "inverse-c") {
      config.options.weighting = arfima::Weighting::kInverseC;
    } else {
      throw std::runtime_error("config: unknown weighting: " + *v);
    }
  }
  if (const auto v = get("fit_d")) {
    if (*v != "auto") {
      config.structure.p = config.model.p();
      config.structure.q = config.model.q();
      config.structure.fit_d = (*v == "true" || *v == "1");
      config.structure.d_fixed = config.structure.fit_d ? 0.0 : config.model.d;
    }
  }
  return config;
}

std::string parameter_name(const arfima::FitStructure& structure, int i) {
  if (i < structure.p) return "phi" + std::to_string(i + 1);
  if (i < structure.p + structure.q) {
    return "theta" + std::to_string(i - structure.p + 1);
  }
  return "d";
}

struct McJob {
  std::string table;  // empty for config-file jobs
  std::string name;
  arfima::ExperimentConfig config;
  std::map<arfima::Method, arfima::ReferenceStats> reference;
};

int run_mc(const std::vector<McJob>& jobs, const std::string& output,
           const std::string& json_output) {
  std::ostringstream csv;
  csv << "table,cell,estimator,parameter,mean,sd,rmse,failures,"
         "ref_mean,ref_sd,ref_rmse,seed\n";
  json all = json::array();
  for (const McJob& job : jobs) {
    const arfima::McSummary summary = arfima::run_experiment(job.config);
    const arfima::FitStructure structure = job.config.effective_structure();
    json jj;
    jj["table"] = job.table;
    jj["cell"] = job.name;
    jj["reps"] = summary.reps;
    jj["seed"] = summary.seed;
    jj["truth"] = summary.truth;
    jj["estimators"] = json::array();
    for (const arfima::McEstimatorSummary& est : summary.estimators) {
      const auto ref = job.reference.find(est.method);
      json je;
      je["method"] = arfima::method_name(est.method);
      je["mean"] = est.mean;
      je["sd"] = est.sd;
      je["rmse"] = est.rmse;
      je["failures"] = est.failures;
      if (ref != job.reference.end()) {
        je["ref_mean"] = ref->second.mean;
        je["ref_sd"] = ref->second.sd;
        je["ref_rmse"] = ref->second.rmse;
      }
      jj["estimators"].push_back(je);
      for (std::size_t i = 0; i < est.mean.size(); ++i) {
        csv << job.table << ',' << job.name << ','
            << arfima::method_name(est.method) << ','
            << parameter_name(structure, static_cast<int>(i)) << ','
            << fmt6(est.mean[i]) << ',' << fmt6(est.sd[i]) << ','
            << fmt6(est.rmse[i]) << ',' << est.failures << ',';
        // The tabulated references apply to the single free parameter of
        // the benchmark models.
        if (ref != job.reference.end() && est.mean.size() == 1) {
          csv << fmt6(ref->second.mean) << ',' << fmt6(ref->second.sd) << ','
              << fmt6(ref->second.rmse);
        } else {
          csv << ",,";
        }
        csv << ',' << summary.seed << '\n';
      }
    }
    all.push_back(jj);
  }
  write_text(output, csv.str());
  if (!json_output.empty()) {
    write_text(json_output, all.dump(2) + "\n");
  }
  return 0;
}

std::string describe_cells() {
  std::ostringstream out;
  for (const std::string table : {"table2", "table3", "table4"}) {
    for (const arfima::BenchmarkCell& cell : arfima::cells_for_table(table)) {
      out << table << ' ' << cell.name << " (T=" << cell.config.T
          << ", reps=" << cell.config.reps << "):";
      for (const auto& [method, ref] : cell.reference) {
        out << ' ' << arfima::method_name(method) << " mean " << ref.mean;
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ARFIMA autocovariance bias and minimum distance estimation"};
  app.require_subcommand(1);

  // acf
  ModelFlags acf_model;
  int acf_max_lag = 20;
  std::string acf_output = "-";
  CLI::App* acf = app.add_subcommand(
      "acf", "theoretical autocovariances and autocorrelations");
  add_model_flags(acf, &acf_model);
  acf->add_option("--max-lag", acf_max_lag, "largest lag to print")
      ->check(CLI::NonNegativeNumber);
  acf->add_option("--output,-o", acf_output, "output CSV path ('-' = stdout)");

  // bias
  ModelFlags bias_model;
  TrendFlags bias_trend;
  int bias_T = 0;
  int bias_max_lag = -1;
  std::string bias_output = "-";
  CLI::App* bias = app.add_subcommand(
      "bias", "finite-sample expectation of the sample autocovariances");
  add_model_flags(bias, &bias_model);
  add_trend_flags(bias, &bias_trend);
  bias->add_option("--T", bias_T, "series length")->required();
  bias->add_option("--max-lag", bias_max_lag,
                   "largest lag to print (default min(T-1, 50))");
  bias->add_option("--output,-o", bias_output,
                   "output CSV path ('-' = stdout)");

  // estimate
  std::string est_input;
  std::string est_method;
  TrendFlags est_trend;
  int est_p = 0;
  int est_q = 0;
  bool est_fit_d = false;
  double est_d_fixed = 0.0;
  std::vector<int> est_lags = {1};
  std::string est_weighting = "identity";
  std::string est_output = "-";
  CLI::App* est = app.add_subcommand(
      "estimate", "fit model parameters to an observed series");
  est->add_option("--input,-i", est_input,
                  "file with one observation per line")
      ->required();
  est->add_option("--method", est_method, "mde, bcmde, whittle or mle")
      ->required()
      ->check(CLI::IsMember({"mde", "bcmde", "whittle", "mle"}));
  est->add_option("-p,--ar-order", est_p, "number of AR coefficients")
      ->check(CLI::NonNegativeNumber);
  est->add_option("-q,--ma-order", est_q, "number of MA coefficients")
      ->check(CLI::NonNegativeNumber);
  est->add_flag("--fit-d", est_fit_d, "estimate d as well");
  est->add_option("--d-fixed", est_d_fixed,
                  "value at which d is held when not estimated");
  est->add_option("--lags", est_lags, "ACF lags for mde/bcmde")
      ->delimiter(',');
  est->add_option("--weighting", est_weighting,
                  "weight matrix for mde/bcmde: identity or inverse-c")
      ->check(CLI::IsMember({"identity", "inverse-c"}));
  add_trend_flags(est, &est_trend);
  est->add_option("--output,-o", est_output,
                  "output JSON path ('-' = stdout)");

  // simulate
  ModelFlags sim_model;
  int sim_T = 0;
  std::uint64_t sim_seed = 12345;
  std::uint64_t sim_rep = 0;
  std::string sim_generator = "exact";
  int sim_burn_in = 500;
  std::string sim_trend = "none";
  double sim_alpha = 0.0;
  double sim_beta = 0.0;
  std::string sim_z_file;
  std::string sim_output = "-";
  CLI::App* sim = app.add_subcommand("simulate",
                                     "draw one series from the model");
  add_model_flags(sim, &sim_model);
  sim->add_option("--T", sim_T, "series length")->required();
  sim->add_option("--seed", sim_seed, "experiment seed");
  sim->add_option("--rep", sim_rep, "replication index within the seed");
  sim->add_option("--generator", sim_generator,
                  "exact (Durbin-Levinson) or recursive (burn-in)")
      ->check(CLI::IsMember({"exact", "recursive"}));
  sim->add_option("--burn-in", sim_burn_in,
                  "discarded start-up length (recursive generator)")
      ->check(CLI::NonNegativeNumber);
  sim->add_option("--trend", sim_trend,
                  "mean function to add: none, constant, time, regressor")
      ->check(CLI::IsMember({"none", "constant", "time", "regressor"}));
  sim->add_option("--alpha", sim_alpha, "trend level");
  sim->add_option("--beta", sim_beta, "trend slope");
  sim->add_option("--z-file", sim_z_file,
                  "file with T regressor values (trend=regressor)");
  sim->add_option("--output,-o", sim_output,
                  "output path, one value per line ('-' = stdout)");

  // mc
  std::string mc_config;
  std::string mc_table2;
  std::string mc_table3;
  std::string mc_table4;
  bool mc_list = false;
  int mc_reps = -1;
  std::int64_t mc_seed = -1;
  int mc_threads = -1;
  std::string mc_generator;
  std::string mc_output = "-";
  std::string mc_json;
  CLI::App* mc = app.add_subcommand(
      "mc", "replicated estimation experiments with summary statistics");
  mc->add_option("--config", mc_config, "experiment config file (key = value)");
  mc->add_option("--table2", mc_table2,
                 "benchmark cell from the constant-mean AR/MA table, or 'all'");
  mc->add_option("--table3", mc_table3,
                 "benchmark cell from the AR time-trend table, or 'all'");
  mc->add_option("--table4", mc_table4,
                 "benchmark cell from the ARFIMA time-trend table, or 'all'");
  mc->add_flag("--list", mc_list, "list benchmark cells and exit");
  mc->add_option("--reps", mc_reps, "override replication count");
  mc->add_option("--seed", mc_seed, "override seed");
  mc->add_option("--threads", mc_threads,
                 "worker threads (0 = one per hardware thread)");
  mc->add_option("--generator", mc_generator,
                 "override generator: exact or recursive")
      ->check(CLI::IsMember({"exact", "recursive"}));
  mc->add_option("--output,-o", mc_output, "output CSV path ('-' = stdout)");
  mc->add_option("--json", mc_json, "also write a JSON summary to this path");

  try {
    app.parse(argc, argv);

    if (acf->parsed()) return run_acf(acf_model, acf_max_lag, acf_output);
    if (bias->parsed()) {
      return run_bias(bias_model, bias_trend, bias_T, bias_max_lag,
                      bias_output);
    }
    if (est->parsed()) {
      return run_estimate(est_input, est_method, est_p, est_q, est_fit_d,
                          est_d_fixed, est_trend, est_lags, est_weighting,
                          est_output);
    }
    if (sim->parsed()) {
      return run_simulate(sim_model, sim_T, sim_seed, sim_rep, sim_generator,
                          sim_burn_in, sim_trend, sim_alpha, sim_beta,
                          sim_z_file, sim_output);
    }
    if (mc->parsed()) {
      if (mc_list) {
        std::cout << describe_cells();
        return 0;
      }
      std::vector<McJob> jobs;
      auto add_preset = [&](const std::string& table,
                            const std::string& name) {
        if (name.empty()) return;
        if (name == "all") {
          for (const arfima::BenchmarkCell& cell :
               arfima::cells_for_table(table)) {
            jobs.push_back({cell.table, cell.name, cell.config,
                            cell.reference});
          }
          return;
        }
        const arfima::BenchmarkCell* cell = arfima::find_cell(table, name);
        if (cell == nullptr) {
          throw std::runtime_error("unknown cell '" + name + "' in " + table +
                                   " (use 'mc --list')");
        }
        jobs.push_back({cell->table, cell->name, cell->config,
                        cell->reference});
      };
      add_preset("table2", mc_table2);
      add_preset("table3", mc_table3);
      add_preset("table4", mc_table4);
      if (!mc_config.empty()) {
        jobs.push_back({"", "config", config_from_file(mc_config), {}});
      }
      if (jobs.empty()) {
        throw std::runtime_error(
            "mc requires --config or a benchmark cell selection");
      }
      for (McJob& job : jobs) {
        if (mc_reps > 0) job.config.reps = mc_reps;
        if (mc_seed >= 0) {
          job.config.seed = static_cast<std::uint64_t>(mc_seed);
        }
        if (mc_threads >= 0) job.config.threads = mc_threads;
        if (mc_generator == "exact") {
          job.config.generator = arfima::Generator::kExactGaussian;
        } else if (mc_generator == "recursive") {
          job.config.generator = arfima::Generator::kRecursiveArma;
        }
      }
      return run_mc(jobs, mc_output, mc_json);
    }
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
