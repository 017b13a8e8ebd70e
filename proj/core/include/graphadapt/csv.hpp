#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace graphadapt {

/// One result line. The first five columns identify the run that produced it.
struct MetricRow {
  std::string experiment;
  std::uint64_t seed = 0;
  std::uint64_t graph_seed = 0;
  std::uint64_t split_seed = 0;
  std::string config_hash;
  std::string method;
  int features = 0;
  int filter_order = 0;
  int resolution = 0;
  std::string sweep_axis;
  double sweep_value = 0.0;
  std::string metric;
  double value = 0.0;
};

struct HistoryRow {
  std::string method;
  std::string run;  ///< e.g. "g0/s1/F4"
  int epoch = 0;
  double train_loss = 0.0;
  double validation_metric = 0.0;
};

inline constexpr std::string_view kMetricsHeader =
    "experiment,seed,graph_seed,split_seed,config_hash,method,features,filter_order,resolution,"
    "sweep_axis,sweep_value,metric,value";

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

void write_metrics_csv(std::ostream& out, const std::vector<MetricRow>& rows);
void write_history_csv(std::ostream& out, const std::vector<HistoryRow>& rows);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

}  // namespace graphadapt
