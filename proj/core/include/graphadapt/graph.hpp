#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "graphadapt/types.hpp"

namespace graphadapt {

/// Undirected weighted edge. Canonical form has u < v.
struct Edge {
  int u = 0;
  int v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Square sparse matrix in compressed row form with ascending column order per row.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(int n, std::vector<std::size_t> row_ptr, std::vector<int> columns,
            std::vector<double> values);

  int rows() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return columns_.size(); }

  std::span<const int> row_columns(int i) const noexcept {
    return {columns_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const double> row_values(int i) const noexcept {
    return {values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  /// Entry (i, j), zero when not stored.
  double at(int i, int j) const;

  /// y = A x. Row sums accumulate in ascending column order starting from 0.
  void multiply(std::span<const double> x, std::span<double> y) const;

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

 private:
  int n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<int> columns_;
  std::vector<double> values_;
};

/// Undirected graph with its shift operator S (weighted adjacency, zero diagonal).
///
/// Edge weights are the GSO entries: normalization rescales them, and link-loss
/// sampling rebuilds S from the surviving (already scaled) weights. Row i of the
/// GSO lists exactly the neighborhood N_i, sorted ascending, so neighbor lists and
/// S share storage. Values are immutable after construction.
class Graph {
 public:
  Graph() = default;

  /// Validates and canonicalizes the edge list (u < v, sorted, no duplicates,
  /// no self loops, finite weights).
  static Graph from_edges(int n, std::vector<Edge> edges);

  int num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const int> neighbors(int i) const noexcept { return gso_.row_columns(i); }
  /// Weights [S]_{ij} aligned with neighbors(i).
  std::span<const double> neighbor_weights(int i) const noexcept { return gso_.row_values(i); }
  int degree(int i) const noexcept { return static_cast<int>(neighbors(i).size()); }
  bool has_edge(int i, int j) const;

  const CsrMatrix& gso() const noexcept { return gso_; }

  /// Sx by one sparse row traversal; O(M).
  Signal shift(std::span<const double> x) const;
  void shift_into(std::span<const double> x, std::span<double> y) const;

  bool is_connected() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  CsrMatrix gso_;
};

/// Bijection on {0..N-1}. Relabeling convention: new vertex i is old vertex map[i],
/// i.e. (P^T x)_i = x_{map[i]} and (P^T S P)_{ij} = S_{map[i], map[j]}.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> map);

  static Permutation identity(int n);
  static Permutation random(int n, std::uint64_t seed);

  int size() const noexcept { return static_cast<int>(map_.size()); }
  int operator[](int i) const noexcept { return map_[i]; }
  std::span<const int> map() const noexcept { return map_; }
  Permutation inverse() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> map_;
};

struct SbmParams {
  int nodes = 40;
  int communities = 4;
  double p_intra = 0.8;
  double p_inter = 0.1;
  int max_attempts = 50;
};

struct SbmGraph {
  Graph graph;
  std::vector<int> community;
};

/// Undirected unweighted stochastic block model, contiguous blocks of n/c
/// vertices. Redraws until connected, up to `max_attempts` draws.
SbmGraph sbm_generate(const SbmParams& params, std::uint64_t seed);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// k-nearest-neighbor geometric graph symmetrized by union. Weights are
/// exp(-d^2 / sigma^2) with sigma^2 the mean squared length of retained edges.
/// Distance ties resolve to the lower vertex index.
Graph knn_geometric(std::span<const Point2> coords, int k);

struct PowerIterationOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
};

struct PowerIterationResult {
  double spectral_radius = 0.0;
  int iterations = 0;
};

/// Spectral radius of the (symmetric) GSO by power iteration on S^2 with a
/// Rayleigh-quotient estimate, which handles the +-rho pair of bipartite graphs.
PowerIterationResult spectral_radius(const Graph& graph, const PowerIterationOptions& options = {});

/// S / |lambda_max(S)|.
Graph normalize_gso(const Graph& graph, const PowerIterationOptions& options = {});

Graph permute(const Graph& graph, const Permutation& perm);
Signal permute_signal(std::span<const double> x, const Permutation& perm);
FeatureStack permute_stack(const FeatureStack& x, const Permutation& perm);

/// Independently removes each undirected edge with probability drop_prob.
/// Surviving weights are kept as-is (no renormalization).
Graph sample_link_loss(const Graph& graph, double drop_prob, std::uint64_t seed);

/// max_{1<=k<=K} ||S^k||_inf (maximum absolute row sum).
double inf_norm_max_power(const Graph& graph, int max_order);

}  // namespace graphadapt
