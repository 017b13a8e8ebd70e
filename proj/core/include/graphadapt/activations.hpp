#pragma once

#include <array>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphadapt/graph.hpp"
#include "graphadapt/types.hpp"

namespace graphadapt {

enum class ActivationKind { relu, localized_max, localized_median, ga_max, ga_median, ga_kernel };

/// Local aggregation f applied over a neighborhood.
enum class Aggregator { max, median };

std::string_view to_string(ActivationKind kind);
ActivationKind activation_kind_from_string(std::string_view name);

inline bool is_localized(ActivationKind k) {
  return k == ActivationKind::localized_max || k == ActivationKind::localized_median;
}
inline bool is_graph_adaptive(ActivationKind k) {
  return k == ActivationKind::ga_max || k == ActivationKind::ga_median ||
         k == ActivationKind::ga_kernel;
}
/// Aggregator used by a max/median kind. Precondition: kind is not relu or ga_kernel.
Aggregator aggregator_of(ActivationKind kind);

/// Coefficients of one nonlinearity: beta * ReLU(z) + sum_k h_sigma[k-1] * op_k(z).
struct ActivationParams {
  ActivationKind kind = ActivationKind::relu;
  double beta = 1.0;
  std::vector<double> h_sigma;  ///< resolution K = h_sigma.size(); empty for relu
  double gamma = 0.1;           ///< Gaussian kernel width, ga_kernel only

  int resolution() const noexcept { return static_cast<int>(h_sigma.size()); }
  /// C = max_k |h_sigma_k|.
  double coefficient_bound() const noexcept;
  /// Throws InvalidArgument on K < 1 for non-relu kinds or gamma <= 0 for ga_kernel.
  void validate() const;
};

/// Balls N_i^k = { j != i : hop distance(i, j) <= k } for k = 1..depth, sorted.
class KHopNeighborhoods {
 public:
  KHopNeighborhoods() = default;
  KHopNeighborhoods(int n, int depth, std::vector<std::vector<std::vector<int>>> sets);

  int depth() const noexcept { return depth_; }
  int num_nodes() const noexcept { return n_; }
  std::span<const int> ball(int node, int k) const { return sets_[node][k - 1]; }

 private:
  int n_ = 0;
  int depth_ = 0;
  std::vector<std::vector<std::vector<int>>> sets_;  // [node][k-1]
};

/// BFS from every vertex, truncated at depth K.
KHopNeighborhoods khop_sets(const Graph& graph, int depth);

/// Which entries of a signal a max/median picked, and with what weight.
/// Max selects one vertex (lowest index among ties); an even-size median
/// selects the two middle vertices with weight 1/2 each. Empty sets select none.
struct Selection {
  std::array<int, 2> node{-1, -1};
  std::array<double, 2> weight{0.0, 0.0};
  int count = 0;
  /// Distance from the decision boundary: gap to the nearest competing value.
  double margin = std::numeric_limits<double>::infinity();
};

Selection select_over(std::span<const int> nodes, std::span<const double> signal,
                      Aggregator agg);
double selection_value(const Selection& sel, std::span<const double> signal);

/// f over the values themselves: max, or median (mean of the middle pair for
/// even sizes). Zero for an empty list.
double aggregate_values(std::span<const double> values, Aggregator agg);

/// exp(-sum_j (center - neighbor_j)^2 / (2 gamma^2)); 1 for an empty list.
double kernel_value(double center, std::span<const double> neighbor_values, double gamma);

Signal relu(std::span<const double> x);

/// Gaussian kernel exp(-||a - b||^2 / (2 gamma^2)).
double gaussian_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// f over the one-hop neighborhood of each vertex applied to an already shifted signal.
Signal neighborhood_aggregate(const Graph& graph, std::span<const double> shifted, Aggregator agg);

/// Kernel over the one-hop neighborhood applied to an already shifted signal.
Signal neighborhood_kernel(const Graph& graph, std::span<const double> shifted, double gamma);

/// z_i = f({[S^k x]_j : j in N_i}).
Signal shifted_localized_operator(const Graph& graph, std::span<const double> x, int k,
                                  Aggregator agg);

/// z = sum_k h_sigma[k-1] * SLO_k(x).
Signal shifted_localized_graph_filter(const Graph& graph, std::span<const double> x,
                                      std::span<const double> h_sigma, Aggregator agg);

/// beta * ReLU(z) + shifted localized graph filter; kind ga_max or ga_median.
Signal ga_localized_activation(const Graph& graph, std::span<const double> z,
                               const ActivationParams& params);

/// z_i = exp(-sum_{j in N_i} ([S^k x]_i - [S^k x]_j)^2 / (2 gamma^2)).
Signal kernel_operator(const Graph& graph, std::span<const double> x, int k, double gamma);

/// z = sum_k h_sigma[k-1] * kernel_operator_k(x).
Signal kernel_graph_filter(const Graph& graph, std::span<const double> x,
                           std::span<const double> h_sigma, double gamma);

/// beta * ReLU(z) + kernel graph filter; kind ga_kernel.
Signal ga_kernel_activation(const Graph& graph, std::span<const double> z,
                            const ActivationParams& params);

/// Localized baseline: beta * ReLU(x_i) + sum_k h_sigma[k-1] * f(x over N_i^k).
/// Operates on raw values over k-hop balls, never on shifted signals.
Signal localized_activation(const Graph& graph, std::span<const double> x,
                            const ActivationParams& params, const KHopNeighborhoods& hoods);

/// Dispatches on params.kind. `hoods` is required for the localized kinds.
Signal apply_activation(const Graph& graph, std::span<const double> z,
                        const ActivationParams& params,
                        const KHopNeighborhoods* hoods = nullptr);

/// |beta| + K C max_{k<=K} ||S^k||_inf for the graph-adaptive max activation,
/// with K = params.resolution().
double lipschitz_bound(const ActivationParams& params, const Graph& graph);

}  // namespace graphadapt
