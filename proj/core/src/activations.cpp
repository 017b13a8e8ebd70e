#include "graphadapt/activations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>

#include "graphadapt/error.hpp"

namespace graphadapt {

std::string_view to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::relu: return "relu";
    case ActivationKind::localized_max: return "localized_max";
    case ActivationKind::localized_median: return "localized_median";
    case ActivationKind::ga_max: return "ga_max";
    case ActivationKind::ga_median: return "ga_median";
    case ActivationKind::ga_kernel: return "ga_kernel";
  }
  return "unknown";
}

ActivationKind activation_kind_from_string(std::string_view name) {
  for (auto k : {ActivationKind::relu, ActivationKind::localized_max,
                 ActivationKind::localized_median, ActivationKind::ga_max,
                 ActivationKind::ga_median, ActivationKind::ga_kernel}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown activation kind '" + std::string(name) + "'");
}

Aggregator aggregator_of(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::localized_max:
    case ActivationKind::ga_max: return Aggregator::max;
    case ActivationKind::localized_median:
    case ActivationKind::ga_median: return Aggregator::median;
    default: break;
  }
  throw InvalidArgument("activation kind '" + std::string(to_string(kind)) +
                        "' has no max/median aggregator");
}

double ActivationParams::coefficient_bound() const noexcept {
  double c = 0.0;
  for (double h : h_sigma) c = std::max(c, std::abs(h));
  return c;
}

void ActivationParams::validate() const {
  if (kind != ActivationKind::relu && h_sigma.empty()) {
    throw InvalidArgument("activation '" + std::string(to_string(kind)) +
                          "' needs resolution K >= 1");
  }
  if (kind == ActivationKind::ga_kernel && !(gamma > 0.0)) {
    throw InvalidArgument("ga_kernel needs gamma > 0");
  }
}

KHopNeighborhoods::KHopNeighborhoods(int n, int depth,
                                     std::vector<std::vector<std::vector<int>>> sets)
    : n_(n), depth_(depth), sets_(std::move(sets)) {}

KHopNeighborhoods khop_sets(const Graph& graph, int depth) {
  if (depth < 1) throw InvalidArgument("khop_sets: K must be >= 1");
  const int n = graph.num_nodes();
  std::vector<std::vector<std::vector<int>>> sets(static_cast<std::size_t>(n));
  std::vector<int> dist(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::queue<int> frontier;
    frontier.push(s);
    while (!frontier.empty()) {
      const int i = frontier.front();
      frontier.pop();
      if (dist[i] == depth) continue;
      for (int j : graph.neighbors(i)) {
        if (dist[j] < 0) {
          dist[j] = dist[i] + 1;
          frontier.push(j);
        }
      }
    }
    auto& balls = sets[s];
    balls.resize(static_cast<std::size_t>(depth));
    for (int k = 1; k <= depth; ++k) {
      for (int j = 0; j < n; ++j) {
        if (j != s && dist[j] >= 1 && dist[j] <= k) balls[k - 1].push_back(j);
      }
    }
  }
  return KHopNeighborhoods(n, depth, std::move(sets));
}

Selection select_over(std::span<const int> nodes, std::span<const double> signal,
                      Aggregator agg) {
  Selection sel;
  const std::size_t m = nodes.size();
  if (m == 0) return sel;

  if (agg == Aggregator::max) {
    int best = nodes[0];
    double best_v = signal[best];
    double second = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 1; p < m; ++p) {
      const double v = signal[nodes[p]];
      if (v > best_v) {
        second = best_v;
        best_v = v;
        best = nodes[p];
      } else {
        second = std::max(second, v);
      }
    }
    sel.node[0] = best;
    sel.weight[0] = 1.0;
    sel.count = 1;
    sel.margin = m > 1 ? best_v - second : std::numeric_limits<double>::infinity();
    return sel;
  }

  std::vector<std::pair<double, int>> sorted;
  sorted.reserve(m);
  for (int j : nodes) sorted.emplace_back(signal[j], j);
  std::sort(sorted.begin(), sorted.end());
  const double inf = std::numeric_limits<double>::infinity();
  if (m % 2 == 1) {
    const std::size_t mid = m / 2;
    sel.node[0] = sorted[mid].second;
    sel.weight[0] = 1.0;
    sel.count = 1;
    const double below = mid > 0 ? sorted[mid].first - sorted[mid - 1].first : inf;
    const double above = mid + 1 < m ? sorted[mid + 1].first - sorted[mid].first : inf;
    sel.margin = std::min(below, above);
  } else {
    const std::size_t a = m / 2 - 1;
    const std::size_t b = m / 2;
    sel.node = {sorted[a].second, sorted[b].second};
    sel.weight = {0.5, 0.5};
    sel.count = 2;
    const double below = a > 0 ? sorted[a].first - sorted[a - 1].first : inf;
    const double above = b + 1 < m ? sorted[b + 1].first - sorted[b].first : inf;
    sel.margin = std::min(below, above);
  }
  return sel;
}

double selection_value(const Selection& sel, std::span<const double> signal) {
  if (sel.count == 0) return 0.0;
  if (sel.count == 1) return signal[sel.node[0]];
  return (signal[sel.node[0]] + signal[sel.node[1]]) / 2.0;
}

double aggregate_values(std::span<const double> values, Aggregator agg) {
  if (values.empty()) return 0.0;
  if (agg == Aggregator::max) return *std::max_element(values.begin(), values.end());
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  if (m % 2 == 1) return v[m / 2];
  return (v[m / 2 - 1] + v[m / 2]) / 2.0;
}

namespace {

// exp(-d2 / (2 gamma^2)) floored at the smallest normal double, so the kernel
// stays strictly positive where exp would underflow.
double gaussian_of(double d2, double gamma) {
  return std::max(std::exp(-d2 / (2.0 * gamma * gamma)), std::numeric_limits<double>::min());
}

}  // namespace

double kernel_value(double center, std::span<const double> neighbor_values, double gamma) {
  double sum = 0.0;
  for (double v : neighbor_values) {
    const double d = center - v;
    sum += d * d;
  }
  return gaussian_of(sum, gamma);
}

Signal relu(std::span<const double> x) {
  Signal y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
  return y;
}

double gaussian_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  if (a.size() != b.size()) throw InvalidArgument("gaussian_kernel: dimension mismatch");
  if (!(gamma > 0.0)) throw InvalidArgument("gaussian_kernel: gamma must be > 0");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return gaussian_of(sum, gamma);
}

Signal neighborhood_aggregate(const Graph& graph, std::span<const double> shifted,
                              Aggregator agg) {
  require_signal_size(shifted, static_cast<std::size_t>(graph.num_nodes()),
                      "neighborhood_aggregate");
  Signal z(shifted.size());
  for (int i = 0; i < graph.num_nodes(); ++i) {
    z[i] = selection_value(select_over(graph.neighbors(i), shifted, agg), shifted);
  }
  return z;
}

Signal neighborhood_kernel(const Graph& graph, std::span<const double> shifted, double gamma) {
  require_signal_size(shifted, static_cast<std::size_t>(graph.num_nodes()), "neighborhood_kernel");
  if (!(gamma > 0.0)) throw InvalidArgument("kernel operator: gamma must be > 0");
  Signal z(shifted.size());
  std::vector<double> values;
  for (int i = 0; i < graph.num_nodes(); ++i) {
    values.clear();
    for (int j : graph.neighbors(i)) values.push_back(shifted[j]);
    z[i] = kernel_value(shifted[i], values, gamma);
  }
  return z;
}

namespace {

Signal shift_times(const Graph& graph, std::span<const double> x, int k) {
  Signal s(x.begin(), x.end());
  for (int r = 0; r < k; ++r) s = graph.shift(s);
  return s;
}

void require_resolution(int k) {
  if (k < 1) throw InvalidArgument("hop order k must be >= 1");
}

}  // namespace

Signal shifted_localized_operator(const Graph& graph, std::span<const double> x, int k,
                                  Aggregator agg) {
  require_resolution(k);
  require_signal_size(x, static_cast<std::size_t>(graph.num_nodes()), "shifted_localized_operator");
  return neighborhood_aggregate(graph, shift_times(graph, x, k), agg);
}

Signal shifted_localized_graph_filter(const Graph& graph, std::span<const double> x,
                                      std::span<const double> h_sigma, Aggregator agg) {
  if (h_sigma.empty()) throw InvalidArgument("shifted_localized_graph_filter: K must be >= 1");
  require_signal_size(x, static_cast<std::size_t>(graph.num_nodes()),
                      "shifted_localized_graph_filter");
  Signal z(x.size(), 0.0);
  Signal s(x.begin(), x.end());
  for (std::size_t k = 1; k <= h_sigma.size(); ++k) {
    s = graph.shift(s);
    const Signal op = neighborhood_aggregate(graph, s, agg);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += h_sigma[k - 1] * op[i];
  }
  return z;
}

namespace {

Signal beta_relu(std::span<const double> z, double beta) {
  Signal y(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) y[i] = beta * (z[i] > 0.0 ? z[i] : 0.0);
  return y;
}

}  // namespace

Signal ga_localized_activation(const Graph& graph, std::span<const double> z,
                               const ActivationParams& params) {
  params.validate();
  if (params.kind != ActivationKind::ga_max && params.kind != ActivationKind::ga_median) {
    throw InvalidArgument("ga_localized_activation: kind must be ga_max or ga_median");
  }
  require_signal_size(z, static_cast<std::size_t>(graph.num_nodes()), "ga_localized_activation");
  const Aggregator agg = aggregator_of(params.kind);
  Signal out = beta_relu(z, params.beta);
  Signal s(z.begin(), z.end());
  for (int k = 1; k <= params.resolution(); ++k) {
    s = graph.shift(s);
    const Signal op = neighborhood_aggregate(graph, s, agg);
    const double h = params.h_sigma[k - 1];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * op[i];
  }
  return out;
}

Signal kernel_operator(const Graph& graph, std::span<const double> x, int k, double gamma) {
  require_resolution(k);
  require_signal_size(x, static_cast<std::size_t>(graph.num_nodes()), "kernel_operator");
  return neighborhood_kernel(graph, shift_times(graph, x, k), gamma);
}

Signal kernel_graph_filter(const Graph& graph, std::span<const double> x,
                           std::span<const double> h_sigma, double gamma) {
  if (h_sigma.empty()) throw InvalidArgument("kernel_graph_filter: K must be >= 1");
  require_signal_size(x, static_cast<std::size_t>(graph.num_nodes()), "kernel_graph_filter");
  Signal z(x.size(), 0.0);
  Signal s(x.begin(), x.end());
  for (std::size_t k = 1; k <= h_sigma.size(); ++k) {
    s = graph.shift(s);
    const Signal op = neighborhood_kernel(graph, s, gamma);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += h_sigma[k - 1] * op[i];
  }
  return z;
}

Signal ga_kernel_activation(const Graph& graph, std::span<const double> z,
                            const ActivationParams& params) {
  params.validate();
  if (params.kind != ActivationKind::ga_kernel) {
    throw InvalidArgument("ga_kernel_activation: kind must be ga_kernel");
  }
  require_signal_size(z, static_cast<std::size_t>(graph.num_nodes()), "ga_kernel_activation");
  Signal out = beta_relu(z, params.beta);
  Signal s(z.begin(), z.end());
  for (int k = 1; k <= params.resolution(); ++k) {
    s = graph.shift(s);
    const Signal op = neighborhood_kernel(graph, s, params.gamma);
    const double h = params.h_sigma[k - 1];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * op[i];
  }
  return out;
}

Signal localized_activation(const Graph& graph, std::span<const double> x,
                            const ActivationParams& params, const KHopNeighborhoods& hoods) {
  params.validate();
  if (!is_localized(params.kind)) {
    throw InvalidArgument("localized_activation: kind must be localized_max or localized_median");
  }
  require_signal_size(x, static_cast<std::size_t>(graph.num_nodes()), "localized_activation");
  if (hoods.num_nodes() != graph.num_nodes() || hoods.depth() < params.resolution()) {
    throw InvalidArgument("localized_activation: k-hop sets too shallow for resolution " +
                          std::to_string(params.resolution()));
  }
  const Aggregator agg = aggregator_of(params.kind);
  Signal out = beta_relu(x, params.beta);
  for (int k = 1; k <= params.resolution(); ++k) {
    const double h = params.h_sigma[k - 1];
    for (int i = 0; i < graph.num_nodes(); ++i) {
      out[i] += h * selection_value(select_over(hoods.ball(i, k), x, agg), x);
    }
  }
  return out;
}

Signal apply_activation(const Graph& graph, std::span<const double> z,
                        const ActivationParams& params, const KHopNeighborhoods* hoods) {
  switch (params.kind) {
    case ActivationKind::relu:
      require_signal_size(z, static_cast<std::size_t>(graph.num_nodes()), "relu");
      return relu(z);
    case ActivationKind::localized_max:
    case ActivationKind::localized_median: {
      if (hoods) return localized_activation(graph, z, params, *hoods);
      return localized_activation(graph, z, params, khop_sets(graph, std::max(1, params.resolution())));
    }
    case ActivationKind::ga_max:
    case ActivationKind::ga_median: return ga_localized_activation(graph, z, params);
    case ActivationKind::ga_kernel: return ga_kernel_activation(graph, z, params);
  }
  throw InvalidArgument("apply_activation: unknown kind");
}

double lipschitz_bound(const ActivationParams& params, const Graph& graph) {
  if (params.kind != ActivationKind::ga_max) {
    throw InvalidArgument("lipschitz_bound: the bound holds for ga_max only, got '" +
                          std::string(to_string(params.kind)) + "'");
  }
  params.validate();
  const int K = params.resolution();
  return std::abs(params.beta) +
         K * params.coefficient_bound() * inf_norm_max_power(graph, K);
}

}  // namespace graphadapt
