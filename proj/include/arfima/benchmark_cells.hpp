#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "arfima/montecarlo.hpp"

// Preconfigured replication experiments for the published AR(1), MA(1) and
// ARFIMA(0,d,0) benchmark tables, with the tabulated mean / SD / RMSE of
// each estimator attached for comparison.

namespace arfima {

struct ReferenceStats {
  double mean = 0.0;
  double sd = 0.0;
  double rmse = 0.0;
};

struct BenchmarkCell {
  std::string table;  // "table2", "table3" or "table4"
  std::string name;   // e.g. "ar-phi0.4-T25"
  ExperimentConfig config;
  std::map<Method, ReferenceStats> reference;
};

// AR(1) and MA(1) with unknown constant mean; parameter 0.4 or 0.8,
// T = 25 or 100; Whittle, MLE, MDE and BCMDE.
const std::vector<BenchmarkCell>& table2_cells();

// AR(1) with a linear time trend; phi = 0.5 or 0.7, T = 50 or 100;
// Whittle, MLE, MDE and BCMDE.
const std::vector<BenchmarkCell>& table3_cells();

// ARFIMA(0,d,0) with a linear time trend; d = 0.2 or 0.4, T = 100 or 500;
// Whittle, MDE and BCMDE.
const std::vector<BenchmarkCell>& table4_cells();

// All cells of one table ("table2", "table3", "table4") or of all tables
// ("all").  Throws std::invalid_argument for other names.
std::vector<BenchmarkCell> cells_for_table(std::string_view table);

// Pointer to a cell by table and name, or nullptr when absent.
const BenchmarkCell* find_cell(std::string_view table, std::string_view name);

}  // namespace arfima
