#include "arfima/benchmark_cells.hpp"

#include <stdexcept>

namespace arfima {

namespace {

constexpr std::uint64_t kDefaultSeed = 20260815;

ExperimentConfig base_config(ModelSpec model, int T, TrendSpec trend,
                             double beta, std::vector<Method> methods) {
  ExperimentConfig config;
  config.model = std::move(model);
  config.T = T;
  config.trend = std::move(trend);
  config.alpha = 0.0;
  config.beta = beta;
  config.methods = std::move(methods);
  config.reps = 1000;
  config.seed = kDefaultSeed;
  config.generator = Generator::kExactGaussian;
  return config;
}

BenchmarkCell ar1_constant_cell(double phi, int T,
                                std::map<Method, ReferenceStats> reference) {
  ModelSpec model;
  model.ar = {phi};
  BenchmarkCell cell;
  cell.table = "table2";
  cell.name = "ar-phi" + std::to_string(phi).substr(0, 3) + "-T" +
              std::to_string(T);
  cell.config = base_config(std::move(model), T, TrendSpec::constant_unknown(),
                            0.0,
                            {Method::kWhittle, Method::kMle, Method::kMde,
                             Method::kBcmde});
  cell.reference = std::move(reference);
  return cell;
}

BenchmarkCell ma1_constant_cell(double theta, int T,
                                std::map<Method, ReferenceStats> reference) {
  ModelSpec model;
  model.ma = {theta};
  BenchmarkCell cell;
  cell.table = "table2";
  cell.name = "ma-theta" + std::to_string(theta).substr(0, 3) + "-T" +
              std::to_string(T);
  cell.config = base_config(std::move(model), T, TrendSpec::constant_unknown(),
                            0.0,
                            {Method::kWhittle, Method::kMle, Method::kMde,
                             Method::kBcmde});
  cell.reference = std::move(reference);
  return cell;
}

BenchmarkCell ar1_trend_cell(double phi, int T,
                             std::map<Method, ReferenceStats> reference) {
  ModelSpec model;
  model.ar = {phi};
  BenchmarkCell cell;
  cell.table = "table3";
  cell.name = "phi" + std::to_string(phi).substr(0, 3) + "-T" +
              std::to_string(T);
  cell.config = base_config(std::move(model), T, TrendSpec::time_trend(), 1.0,
                            {Method::kWhittle, Method::kMle, Method::kMde,
                             Method::kBcmde});
  cell.reference = std::move(reference);
  return cell;
}

BenchmarkCell arfima_trend_cell(double d, int T,
                                std::map<Method, ReferenceStats> reference) {
  ModelSpec model;
  model.d = d;
  BenchmarkCell cell;
  cell.table = "table4";
  cell.name = "d" + std::to_string(d).substr(0, 3) + "-T" + std::to_string(T);
  cell.config = base_config(std::move(model), T, TrendSpec::time_trend(), 1.0,
                            {Method::kWhittle, Method::kMde, Method::kBcmde});
  cell.reference = std::move(reference);
  return cell;
}

}  // namespace

const std::vector<BenchmarkCell>& table2_cells() {
  static const std::vector<BenchmarkCell> cells = {
      ar1_constant_cell(0.4, 25,
                        {{Method::kWhittle, {0.3551, 0.1947, 0.1997}},
                         {Method::kMle, {0.3124, 0.1884, 0.2077}},
                         {Method::kMde, {0.3090, 0.1862, 0.2072}},
                         {Method::kBcmde, {0.3699, 0.1978, 0.2000}}}),
      ar1_constant_cell(0.4, 100,
                        {{Method::kWhittle, {0.3876, 0.0960, 0.0967}},
                         {Method::kMle, {0.3774, 0.0950, 0.0976}},
                         {Method::kMde, {0.3775, 0.0955, 0.0981}},
                         {Method::kBcmde, {0.3918, 0.0966, 0.0969}}}),
      ar1_constant_cell(0.8, 25,
                        {{Method::kWhittle, {0.7208, 0.2024, 0.2172}},
                         {Method::kMle, {0.6616, 0.1602, 0.2117}},
                         {Method::kMde, {0.6432, 0.1646, 0.2273}},
                         {Method::kBcmde, {0.7361, 0.1852, 0.1958}}}),
      ar1_constant_cell(0.8, 100,
                        {{Method::kWhittle, {0.7789, 0.0688, 0.0720}},
                         {Method::kMle, {0.7673, 0.0661, 0.0737}},
                         {Method::kMde, {0.7669, 0.0668, 0.0745}},
                         {Method::kBcmde, {0.7864, 0.0681, 0.0694}}}),
      ma1_constant_cell(0.4, 25,
                        {{Method::kWhittle, {0.3868, 0.2310, 0.2313}},
                         {Method::kMle, {0.3786, 0.2796, 0.2803}},
                         {Method::kMde, {0.3676, 0.2973, 0.3111}},
                         {Method::kBcmde, {0.4422, 0.3111, 0.3137}}}),
      ma1_constant_cell(0.4, 100,
                        {{Method::kWhittle, {0.3956, 0.0991, 0.0992}},
                         {Method::kMle, {0.3936, 0.0990, 0.0991}},
                         {Method::kMde, {0.3992, 0.1590, 0.1589}},
                         {Method::kBcmde, {0.4194, 0.1660, 0.1671}}}),
      ma1_constant_cell(0.8, 25,
                        {{Method::kWhittle, {0.7212, 0.1843, 0.2004}},
                         {Method::kMle, {0.8135, 0.1870, 0.1874}},
                         {Method::kMde, {0.6285, 0.3106, 0.3547}},
                         {Method::kBcmde, {0.7039, 0.2938, 0.3090}}}),
      ma1_constant_cell(0.8, 100,
                        {{Method::kWhittle, {0.7791, 0.0803, 0.0829}},
                         {Method::kMle, {0.8080, 0.0712, 0.0716}},
                         {Method::kMde, {0.7686, 0.2280, 0.2300}},
                         {Method::kBcmde, {0.7929, 0.2201, 0.2201}}}),
  };
  return cells;
}

const std::vector<BenchmarkCell>& table3_cells() {
  static const std::vector<BenchmarkCell> cells = {
      ar1_trend_cell(0.5, 50,
                     {{Method::kWhittle, {0.4475, 0.1346, 0.1444}},
                      {Method::kMle, {0.4239, 0.1325, 0.1527}},
                      {Method::kMde, {0.4226, 0.1319, 0.1529}},
                      {Method::kBcmde, {0.4873, 0.1401, 0.1406}}}),
      ar1_trend_cell(0.5, 100,
                     {{Method::kWhittle, {0.4689, 0.0933, 0.0983}},
                      {Method::kMle, {0.4581, 0.0923, 0.1014}},
                      {Method::kMde, {0.4581, 0.0926, 0.1016}},
                      {Method::kBcmde, {0.4891, 0.0949, 0.0955}}}),
      ar1_trend_cell(0.7, 50,
                     {{Method::kWhittle, {0.6126, 0.1324, 0.1586}},
                      {Method::kMle, {0.5914, 0.1238, 0.1646}},
                      {Method::kMde, {0.5882, 0.1256, 0.1682}},
                      {Method::kBcmde, {0.6667, 0.1385, 0.1424}}}),
      ar1_trend_cell(0.7, 100,
                     {{Method::kWhittle, {0.6617, 0.0809, 0.0895}},
                      {Method::kMle, {0.6516, 0.0795, 0.0930}},
                      {Method::kMde, {0.6500, 0.0802, 0.0945}},
                      {Method::kBcmde, {0.6865, 0.0829, 0.0839}}}),
  };
  return cells;
}

const std::vector<BenchmarkCell>& table4_cells() {
  static const std::vector<BenchmarkCell> cells = {
      arfima_trend_cell(0.2, 100,
                        {{Method::kWhittle, {0.1688, 0.0973, 0.1021}},
                         {Method::kMde, {0.1434, 0.0810, 0.0988}},
                         {Method::kBcmde, {0.1936, 0.0998, 0.1000}}}),
      arfima_trend_cell(0.2, 500,
                        {{Method::kWhittle, {0.1902, 0.0387, 0.0399}},
                         {Method::kMde, {0.1804, 0.0352, 0.0402}},
                         {Method::kBcmde, {0.1975, 0.0395, 0.0395}}}),
      arfima_trend_cell(0.4, 100,
                        {{Method::kWhittle, {0.3475, 0.0924, 0.1062}},
                         {Method::kMde, {0.2767, 0.0626, 0.1383}},
                         {Method::kBcmde, {0.3729, 0.0878, 0.0919}}}),
      arfima_trend_cell(0.4, 500,
                        {{Method::kWhittle, {0.3822, 0.0377, 0.0417}},
                         {Method::kMde, {0.3349, 0.0264, 0.0703}},
                         {Method::kBcmde, {0.3936, 0.0384, 0.0389}}}),
  };
  return cells;
}

std::vector<BenchmarkCell> cells_for_table(std::string_view table) {
  if (table == "table2") return table2_cells();
  if (table == "table3") return table3_cells();
  if (table == "table4") return table4_cells();
  if (table == "all") {
    std::vector<BenchmarkCell> all = table2_cells();
    all.insert(all.end(), table3_cells().begin(), table3_cells().end());
    all.insert(all.end(), table4_cells().begin(), table4_cells().end());
    return all;
  }
  throw std::invalid_argument("unknown benchmark table: " +
                              std::string(table));
}

const BenchmarkCell* find_cell(std::string_view table,
                               std::string_view name) {
  const std::vector<BenchmarkCell>* cells = nullptr;
  if (table == "table2") {
    cells = &table2_cells();
  } else if (table == "table3") {
    cells = &table3_cells();
  } else if (table == "table4") {
    cells = &table4_cells();
  } else {
    return nullptr;
  }
  for (const BenchmarkCell& cell : *cells) {
    if (cell.name == name) return &cell;
  }
  return nullptr;
}

}  // namespace arfima
