#include "graphadapt/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace graphadapt {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricRow>& rows) {
  out << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.seed << ',' << r.graph_seed << ',' << r.split_seed << ','
        << r.config_hash << ',' << r.method << ',' << r.features << ',' << r.filter_order << ','
        << r.resolution << ',' << r.sweep_axis << ',' << format_double(r.sweep_value) << ','
        << r.metric << ',' << format_double(r.value) << '\n';
  }
}

void write_history_csv(std::ostream& out, const std::vector<HistoryRow>& rows) {
  out << "method,run,epoch,train_loss,validation_metric\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.run << ',' << r.epoch << ',' << format_double(r.train_loss) << ','
        << format_double(r.validation_metric) << '\n';
  }
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
  return buf.data();
}

}  // namespace graphadapt
