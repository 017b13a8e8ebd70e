#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <vector>

#include "graphadapt/graph.hpp"
#include "graphadapt/objective.hpp"

namespace graphadapt {

/// Shuffles with `seed` and cuts into train / validation / test by the given
/// fractions (test takes the remainder).
Dataset split_dataset(std::vector<Sample> samples, double train_fraction,
                      double validation_fraction, std::uint64_t seed);

/// Highest-degree vertex of every community, lowest index on ties.
std::vector<int> community_readout_nodes(const Graph& graph, const std::vector<int>& community,
                                         int communities);

/// Diffused deltas x = S^t delta_c for every source c with `draws_per_source`
/// uniform integer t in [0, max_t]; label = community(c). Sample order is
/// source-major.
std::vector<Sample> gen_source_localization(const Graph& normalized,
                                            const std::vector<int>& community,
                                            std::uint64_t seed, int draws_per_source = 30,
                                            int max_t = 30);

/// x ~ N(0, I); target = mean(x) at every vertex.
std::vector<Sample> gen_consensus(int nodes, int count, std::uint64_t seed);

/// Clean signals and their noisy copies, [time][vertex].
struct DenoisingData {
  std::vector<Signal> clean;
  std::vector<Signal> noisy;
  double measured_snr_db = 0.0;
};

/// Smooth signals ((I + S) / 2)^smoothing w with w ~ N(0, I).
std::vector<Signal> gen_smooth_signals(const Graph& normalized, int count, int smoothing,
                                       std::uint64_t seed);

/// Adds zero-mean Gaussian noise rescaled so that total signal power over total
/// noise power equals 10^(snr_db / 10) exactly. snr_db = +inf adds nothing.
DenoisingData add_noise(std::vector<Signal> clean, double snr_db, std::uint64_t seed);

/// Denoising samples: input = noisy, target = clean.
std::vector<Sample> denoising_samples(const DenoisingData& data);

/// Temperature table read from CSV `station_id,timestamp,temperature_C` and
/// station coordinates from CSV `station_id,x,y`. A header row is optional.
struct StationData {
  std::vector<Point2> coords;   ///< indexed by station order of the coordinates file
  std::vector<Signal> signals;  ///< [timestamp][station], timestamps sorted
};

StationData read_station_data(std::istream& measurements, std::istream& coordinates);
StationData load_station_data(const std::filesystem::path& measurements,
                              const std::filesystem::path& coordinates);

}  // namespace graphadapt
