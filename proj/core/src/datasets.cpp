#include "graphadapt/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "graphadapt/error.hpp"
#include "graphadapt/rng.hpp"

namespace graphadapt {

Dataset split_dataset(std::vector<Sample> samples, double train_fraction,
                      double validation_fraction, std::uint64_t seed) {
  if (train_fraction <= 0.0 || validation_fraction < 0.0 ||
      train_fraction + validation_fraction > 1.0) {
    throw InvalidArgument("split_dataset: fractions must be positive and sum to <= 1");
  }
  auto rng = make_rng(seed);
  std::shuffle(samples.begin(), samples.end(), rng);
  const auto n = samples.size();
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(std::llround(validation_fraction * static_cast<double>(n)));
  if (n_train + n_val > n) throw InvalidArgument("split_dataset: not enough samples");
  Dataset d;
  auto it = std::make_move_iterator(samples.begin());
  d.train.assign(it, it + static_cast<std::ptrdiff_t>(n_train));
  d.validation.assign(it + static_cast<std::ptrdiff_t>(n_train),
                      it + static_cast<std::ptrdiff_t>(n_train + n_val));
  d.test.assign(it + static_cast<std::ptrdiff_t>(n_train + n_val), std::make_move_iterator(samples.end()));
  return d;
}

std::vector<int> community_readout_nodes(const Graph& graph, const std::vector<int>& community,
                                         int communities) {
  std::vector<int> best(static_cast<std::size_t>(communities), -1);
  for (int i = 0; i < graph.num_nodes(); ++i) {
    const int c = community.at(i);
    if (c < 0 || c >= communities) throw InvalidArgument("community label out of range");
    if (best[c] < 0 || graph.degree(i) > graph.degree(best[c])) best[c] = i;
  }
  for (int b : best) {
    if (b < 0) throw InvalidArgument("community_readout_nodes: empty community");
  }
  return best;
}

std::vector<Sample> gen_source_localization(const Graph& normalized,
                                            const std::vector<int>& community,
                                            std::uint64_t seed, int draws_per_source, int max_t) {
  const int n = normalized.num_nodes();
  if (static_cast<int>(community.size()) != n) throw InvalidArgument("community labels size mismatch");
  if (draws_per_source < 1 || max_t < 0) throw InvalidArgument("source localization: bad draw settings");
  auto rng = make_rng(seed);
  std::uniform_int_distribution<int> t_dist(0, max_t);
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(n) * draws_per_source);
  for (int c = 0; c < n; ++c) {
    // S^t delta_c for every t up to max_t, computed once per source.
    std::vector<Signal> diffused;
    Signal x(static_cast<std::size_t>(n), 0.0);
    x[c] = 1.0;
    diffused.push_back(x);
    for (int t = 1; t <= max_t; ++t) diffused.push_back(normalized.shift(diffused.back()));
    for (int d = 0; d < draws_per_source; ++d) {
      Sample s;
      s.input = {diffused[t_dist(rng)]};
      s.label = community[c];
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<Sample> gen_consensus(int nodes, int count, std::uint64_t seed) {
  if (nodes < 1 || count < 0) throw InvalidArgument("gen_consensus: bad sizes");
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Sample> out(static_cast<std::size_t>(count));
  for (auto& s : out) {
    Signal x(static_cast<std::size_t>(nodes));
    double sum = 0.0;
    for (auto& v : x) {
      v = normal(rng);
      sum += v;
    }
    s.input = {x};
    s.target = {Signal(static_cast<std::size_t>(nodes), sum / nodes)};
  }
  return out;
}

std::vector<Signal> gen_smooth_signals(const Graph& normalized, int count, int smoothing,
                                       std::uint64_t seed) {
  if (count < 0 || smoothing < 0) throw InvalidArgument("gen_smooth_signals: bad sizes");
  const auto n = static_cast<std::size_t>(normalized.num_nodes());
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Signal> out(static_cast<std::size_t>(count));
  for (auto& x : out) {
    x.resize(n);
    for (auto& v : x) v = normal(rng);
    for (int r = 0; r < smoothing; ++r) {
      const Signal sx = normalized.shift(x);
      for (std::size_t i = 0; i < n; ++i) x[i] = 0.5 * (x[i] + sx[i]);
    }
  }
  return out;
}

DenoisingData add_noise(std::vector<Signal> clean, double snr_db, std::uint64_t seed) {
  DenoisingData d;
  d.noisy = clean;
  double signal_power = 0.0;
  for (const auto& x : clean) {
    for (double v : x) signal_power += v * v;
  }
  if (std::isinf(snr_db) && snr_db > 0) {
    d.measured_snr_db = std::numeric_limits<double>::infinity();
    d.clean = std::move(clean);
    return d;
  }
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Signal> noise(clean.size());
  double noise_power = 0.0;
  for (std::size_t t = 0; t < clean.size(); ++t) {
    noise[t].resize(clean[t].size());
    for (auto& v : noise[t]) {
      v = normal(rng);
      noise_power += v * v;
    }
  }
  const double wanted = signal_power / std::pow(10.0, snr_db / 10.0);
  const double scale = noise_power > 0.0 ? std::sqrt(wanted / noise_power) : 0.0;
  double realized = 0.0;
  for (std::size_t t = 0; t < clean.size(); ++t) {
    for (std::size_t i = 0; i < clean[t].size(); ++i) {
      const double e = scale * noise[t][i];
      realized += e * e;
      d.noisy[t][i] += e;
    }
  }
  d.measured_snr_db = 10.0 * std::log10(signal_power / realized);
  d.clean = std::move(clean);
  return d;
}

std::vector<Sample> denoising_samples(const DenoisingData& data) {
  std::vector<Sample> out(data.clean.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t].input = {data.noisy[t]};
    out[t].target = {data.clean[t]};
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  return s.substr(b);
}

}  // namespace

StationData read_station_data(std::istream& measurements, std::istream& coordinates) {
  StationData data;
  std::map<std::string, int> station_index;
  std::string line;
  int line_no = 0;
  while (std::getline(coordinates, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv_line(line);
    Point2 p;
    if (cells.size() != 3 || !parse_double(cells[1], p.x) || !parse_double(cells[2], p.y)) {
      if (line_no == 1) continue;  // header
      throw ParseError("coordinates line " + std::to_string(line_no) + ": expected station_id,x,y");
    }
    const std::string id = trim(cells[0]);
    if (!station_index.emplace(id, static_cast<int>(data.coords.size())).second) {
      throw ParseError("coordinates line " + std::to_string(line_no) + ": duplicate station '" + id + "'");
    }
    data.coords.push_back(p);
  }
  if (data.coords.empty()) throw ParseError("coordinates: no stations");

  std::map<std::string, Signal> by_time;
  std::map<std::string, std::vector<bool>> seen;
  const std::size_t n = data.coords.size();
  line_no = 0;
  while (std::getline(measurements, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv_line(line);
    double value = 0.0;
    if (cells.size() != 3 || !parse_double(cells[2], value)) {
      if (line_no == 1) continue;
      throw ParseError("measurements line " + std::to_string(line_no) +
                       ": expected station_id,timestamp,temperature_C");
    }
    const auto it = station_index.find(trim(cells[0]));
    if (it == station_index.end()) {
      throw ParseError("measurements line " + std::to_string(line_no) + ": unknown station '" +
                       trim(cells[0]) + "'");
    }
    const std::string ts = trim(cells[1]);
    auto& sig = by_time.try_emplace(ts, Signal(n, 0.0)).first->second;
    auto& flags = seen.try_emplace(ts, std::vector<bool>(n, false)).first->second;
    if (flags[it->second]) {
      throw ParseError("measurements line " + std::to_string(line_no) + ": duplicate reading");
    }
    flags[it->second] = true;
    sig[it->second] = value;
  }
  for (auto& [ts, sig] : by_time) {
    const auto& flags = seen[ts];
    if (std::find(flags.begin(), flags.end(), false) != flags.end()) {
      throw ParseError("measurements: timestamp '" + ts + "' misses some stations");
    }
    data.signals.push_back(std::move(sig));
  }
  if (data.signals.empty()) throw ParseError("measurements: no readings");
  return data;
}

StationData load_station_data(const std::filesystem::path& measurements,
                              const std::filesystem::path& coordinates) {
  std::ifstream m(measurements);
  if (!m) throw ParseError("cannot open " + measurements.string());
  std::ifstream c(coordinates);
  if (!c) throw ParseError("cannot open " + coordinates.string());
  return read_station_data(m, c);
}

}  // namespace graphadapt
