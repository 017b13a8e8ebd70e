#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "graphadapt/model.hpp"

namespace graphadapt {

inline constexpr int kSpecVersion = 1;

/// Everything one experiment run depends on. Unset seeds derive from `seed`.
struct ExperimentSpec {
  int version = kSpecVersion;
  std::string experiment;  ///< source_loc | consensus | regression | recsys
  std::uint64_t seed = 1;
  std::uint64_t graph_seed = 0;
  std::uint64_t split_seed = 0;
  bool graph_seed_set = false;
  bool split_seed_set = false;
  bool paper_scale = false;
  std::string output_dir;  ///< empty: $GRAPHADAPT_OUT, else "out"
  int threads = 1;

  // Graph.
  int nodes = 40;
  int communities = 4;
  double p_intra = 0.8;
  double p_inter = 0.1;
  int knn = 10;
  int graphs = 3;  ///< graph realizations
  int splits = 3;  ///< data splits per graph

  // Model and training.
  int layers = 2;
  std::vector<std::string> methods;  ///< activation kinds, plus "fir"
  std::vector<int> features;
  std::vector<int> filter_orders;
  std::vector<int> resolutions;
  int epochs = 100;
  int batch_size = 100;
  double lr = 1e-3;
  double gamma = 0.1;
  BetaScope beta_scope = BetaScope::per_layer_feature;
  ClassLogits class_logits = ClassLogits::across_readout;  ///< source_loc only

  // Data.
  int samples = 0;
  int draws_per_source = 30;
  int max_t = 30;
  std::vector<double> snr_db;
  std::vector<double> link_loss;
  int link_loss_draws = 10;
  std::string data_source = "synthetic";  ///< synthetic | file
  std::string data_path;
  std::string coords_path;
  int smoothing = 4;
  int users = 200;
  int movies = 100;
  int rank = 1;
  double density = 0.5;
  int knn_movies = 10;
  int max_movies = 0;  ///< 0 keeps every rated movie
  std::vector<int> target_movies;  ///< 0-based movie columns

  void validate() const;
  std::uint64_t resolved_graph_seed() const;
  std::uint64_t resolved_split_seed() const;
  std::filesystem::path resolved_output_dir() const;
};

const std::vector<std::string>& experiment_ids();

/// Desk-scale defaults, or the published protocol sizes with `paper_scale`.
ExperimentSpec default_spec(std::string_view experiment, bool paper_scale = false);

/// Parses a JSON spec; keys override the defaults of its "experiment". Throws
/// ParseError with line and column for malformed JSON and InvalidArgument for
/// schema or range violations.
ExperimentSpec spec_from_json(std::string_view text);
ExperimentSpec load_spec(const std::filesystem::path& path);

/// Canonical JSON (sorted keys, resolved seeds).
std::string spec_to_json(const ExperimentSpec& spec, bool pretty = false);

/// FNV-1a of the canonical JSON without output_dir and threads, which do not
/// affect results.
std::string config_hash(const ExperimentSpec& spec);

}  // namespace graphadapt
