#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "graphadapt/csv.hpp"
#include "graphadapt/distsim.hpp"
#include "graphadapt/experiment_spec.hpp"

namespace graphadapt {

/// One trained model evaluated once.
struct RunRecord {
  std::string method;
  int features = 0;
  int filter_order = 0;
  int resolution = 0;
  int graph = 0;  ///< realization index
  int split = 0;
  std::string sweep_axis;
  double sweep_value = 0.0;
  std::string metric;
  double value = 0.0;
};

struct ExperimentOutput {
  std::vector<RunRecord> runs;
  std::vector<MetricRow> metrics;  ///< per-run rows, then mean/std aggregates
  std::vector<HistoryRow> history;
  MessageLog messages;    ///< distributed replay of one trained model
  std::string table_csv;  ///< accuracy table (source_loc only)
};

/// Runs the experiment named by spec.experiment. Progress lines go to `log`
/// when given.
ExperimentOutput run_experiment(const ExperimentSpec& spec, std::ostream* log = nullptr);

ExperimentOutput run_source_localization(const ExperimentSpec& spec, std::ostream* log = nullptr);
ExperimentOutput run_consensus(const ExperimentSpec& spec, std::ostream* log = nullptr);
ExperimentOutput run_regression(const ExperimentSpec& spec, std::ostream* log = nullptr);
ExperimentOutput run_recsys(const ExperimentSpec& spec, std::ostream* log = nullptr);

/// Writes metrics.csv, history.csv, messages.csv, config.echo.json (and
/// table.csv when present) into `dir`, creating it if needed.
void write_experiment_outputs(const ExperimentSpec& spec, const ExperimentOutput& output,
                              const std::filesystem::path& dir);

/// Mean of every run matching the filter; NaN when none match.
double mean_value(const std::vector<RunRecord>& runs, const std::string& method, int resolution,
                  const std::string& sweep_axis, double sweep_value, int graph = -1);

}  // namespace graphadapt
