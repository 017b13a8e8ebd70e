#include "graphadapt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

#include "graphadapt/error.hpp"
#include "graphadapt/rng.hpp"

namespace graphadapt {

CsrMatrix::CsrMatrix(int n, std::vector<std::size_t> row_ptr, std::vector<int> columns,
                     std::vector<double> values)
    : n_(n), row_ptr_(std::move(row_ptr)), columns_(std::move(columns)), values_(std::move(values)) {
  if (n_ < 0 || row_ptr_.size() != static_cast<std::size_t>(n_) + 1 ||
      columns_.size() != values_.size() || row_ptr_.back() != columns_.size()) {
    throw InvalidArgument("CsrMatrix: inconsistent compressed row arrays");
  }
}

double CsrMatrix::at(int i, int j) const {
  const auto cols = row_columns(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return row_values(i)[static_cast<std::size_t>(it - cols.begin())];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      sum += values_[p] * x[columns_[p]];
    }
    y[i] = sum;
  }
}

Graph Graph::from_edges(int n, std::vector<Edge> edges) {
  if (n < 1) throw InvalidArgument("graph needs at least one vertex");
  for (auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw InvalidArgument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") out of range for N=" + std::to_string(n));
    }
    if (e.u == e.v) throw InvalidArgument("self loop at vertex " + std::to_string(e.u));
    if (!std::isfinite(e.weight)) throw InvalidArgument("non-finite edge weight");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
  for (std::size_t e = 1; e < edges.size(); ++e) {
    if (edges[e].u == edges[e - 1].u && edges[e].v == edges[e - 1].v) {
      throw InvalidArgument("duplicate edge (" + std::to_string(edges[e].u) + "," +
                            std::to_string(edges[e].v) + ")");
    }
  }

  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : edges) {
    ++row_ptr[e.u + 1];
    ++row_ptr[e.v + 1];
  }
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  std::vector<int> columns(row_ptr.back());
  std::vector<double> values(row_ptr.back());
  std::vector<std::size_t> fill(row_ptr.begin(), row_ptr.end() - 1);
  for (const auto& e : edges) {
    columns[fill[e.u]] = e.v;
    values[fill[e.u]++] = e.weight;
    columns[fill[e.v]] = e.u;
    values[fill[e.v]++] = e.weight;
  }
  // Edges are sorted by (u, v); rows still need ascending column order.
  for (int i = 0; i < n; ++i) {
    const auto begin = row_ptr[i];
    const auto end = row_ptr[i + 1];
    std::vector<std::pair<int, double>> row;
    row.reserve(end - begin);
    for (auto p = begin; p < end; ++p) row.emplace_back(columns[p], values[p]);
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto p = begin; p < end; ++p) {
      columns[p] = row[p - begin].first;
      values[p] = row[p - begin].second;
    }
  }

  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.gso_ = CsrMatrix(n, std::move(row_ptr), std::move(columns), std::move(values));
  return g;
}

bool Graph::has_edge(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) return false;
  const auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

Signal Graph::shift(std::span<const double> x) const {
  Signal y(static_cast<std::size_t>(n_));
  shift_into(x, y);
  return y;
}

void Graph::shift_into(std::span<const double> x, std::span<double> y) const {
  require_signal_size(x, static_cast<std::size_t>(n_), "shift input");
  require_signal_size(y, static_cast<std::size_t>(n_), "shift output");
  gso_.multiply(x, y);
}

bool Graph::is_connected() const {
  if (n_ == 0) return true;
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int i = frontier.front();
    frontier.pop();
    for (int j : neighbors(i)) {
      if (!seen[j]) {
        seen[j] = 1;
        ++reached;
        frontier.push(j);
      }
    }
  }
  return reached == n_;
}

Permutation::Permutation(std::vector<int> map) : map_(std::move(map)) {
  std::vector<char> hit(map_.size(), 0);
  for (int v : map_) {
    if (v < 0 || static_cast<std::size_t>(v) >= map_.size() || hit[v]) {
      throw InvalidArgument("permutation index array is not a bijection");
    }
    hit[v] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> map(static_cast<std::size_t>(n));
  std::iota(map.begin(), map.end(), 0);
  return Permutation(std::move(map));
}

Permutation Permutation::random(int n, std::uint64_t seed) {
  std::vector<int> map(static_cast<std::size_t>(n));
  std::iota(map.begin(), map.end(), 0);
  auto rng = make_rng(seed);
  std::shuffle(map.begin(), map.end(), rng);
  return Permutation(std::move(map));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = static_cast<int>(i);
  return Permutation(std::move(inv));
}

SbmGraph sbm_generate(const SbmParams& params, std::uint64_t seed) {
  const int n = params.nodes;
  const int c = params.communities;
  if (n < 1 || c < 1 || n % c != 0) {
    throw InvalidArgument("SBM: vertex count " + std::to_string(n) +
                          " not divisible by community count " + std::to_string(c));
  }
  if (!(params.p_intra > 0.0 && params.p_intra <= 1.0 && params.p_inter >= 0.0 &&
        params.p_inter <= params.p_intra)) {
    throw InvalidArgument("SBM: need 0 <= q <= p <= 1 and p > 0");
  }
  const int block = n / c;
  std::vector<int> community(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) community[i] = i / block;

  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double p = community[i] == community[j] ? params.p_intra : params.p_inter;
        if (unit(rng) < p) edges.push_back({i, j, 1.0});
      }
    }
    auto g = Graph::from_edges(n, std::move(edges));
    if (g.is_connected()) return {std::move(g), community};
  }
  throw GenerationFailure("SBM: no connected graph after " + std::to_string(params.max_attempts) +
                          " consecutive draws");
}

Graph knn_geometric(std::span<const Point2> coords, int k) {
  const int n = static_cast<int>(coords.size());
  if (k < 1 || k >= n) {
    throw InvalidArgument("knn_geometric: need 1 <= k < N (k=" + std::to_string(k) +
                          ", N=" + std::to_string(n) + ")");
  }
  for (const auto& p : coords) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidArgument("knn_geometric: non-finite coordinate");
    }
  }
  auto dist2 = [&](int a, int b) {
    const double dx = coords[a].x - coords[b].x;
    const double dy = coords[a].y - coords[b].y;
    return dx * dx + dy * dy;
  };

  std::vector<std::pair<int, int>> pairs;
  std::vector<std::pair<double, int>> cand;
  for (int i = 0; i < n; ++i) {
    cand.clear();
    for (int j = 0; j < n; ++j) {
      if (j != i) cand.emplace_back(dist2(i, j), j);
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    for (int r = 0; r < k; ++r) {
      const int j = cand[r].second;
      pairs.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  double mean_d2 = 0.0;
  for (const auto& [a, b] : pairs) mean_d2 += dist2(a, b);
  mean_d2 /= static_cast<double>(pairs.size());

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    const double w = mean_d2 > 0.0 ? std::exp(-dist2(a, b) / mean_d2) : 1.0;
    edges.push_back({a, b, w});
  }
  return Graph::from_edges(n, std::move(edges));
}

PowerIterationResult spectral_radius(const Graph& graph, const PowerIterationOptions& options) {
  const auto n = static_cast<std::size_t>(graph.num_nodes());
  if (graph.num_edges() == 0) throw InvalidArgument("spectral_radius: graph has no edges");

  // Fixed, strictly positive start so the Perron direction is never missed.
  Signal x(n);
  auto rng = make_rng(0x5eed);
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  for (auto& v : x) v = unit(rng);
  Signal y(n), z(n);

  auto norm = [](const Signal& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
  };

  double estimate = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const double nx = norm(x);
    for (auto& v : x) v /= nx;
    graph.shift_into(x, y);
    const double next = norm(y);  // sqrt(x^T S^2 x) with |x| = 1
    if (next == 0.0) throw ConvergenceError("spectral_radius: iterate vanished", 0.0);
    if (it > 1 && std::abs(next - estimate) <= options.tolerance * std::max(1.0, next)) {
      return {next, it};
    }
    estimate = next;
    graph.shift_into(y, z);
    std::swap(x, z);
  }
  throw ConvergenceError("spectral_radius: no convergence after " +
                             std::to_string(options.max_iterations) + " iterations",
                         estimate);
}

Graph normalize_gso(const Graph& graph, const PowerIterationOptions& options) {
  const double rho = spectral_radius(graph, options).spectral_radius;
  std::vector<Edge> edges(graph.edges().begin(), graph.edges().end());
  for (auto& e : edges) e.weight /= rho;
  return Graph::from_edges(graph.num_nodes(), std::move(edges));
}

Graph permute(const Graph& graph, const Permutation& perm) {
  if (perm.size() != graph.num_nodes()) {
    throw InvalidArgument("permute: permutation size does not match vertex count");
  }
  const Permutation inv = perm.inverse();
  std::vector<Edge> edges;
  edges.reserve(graph.num_edges());
  for (const auto& e : graph.edges()) edges.push_back({inv[e.u], inv[e.v], e.weight});
  return Graph::from_edges(graph.num_nodes(), std::move(edges));
}

Signal permute_signal(std::span<const double> x, const Permutation& perm) {
  require_signal_size(x, static_cast<std::size_t>(perm.size()), "permute_signal");
  Signal out(x.size());
  for (int i = 0; i < perm.size(); ++i) out[i] = x[perm[i]];
  return out;
}

FeatureStack permute_stack(const FeatureStack& x, const Permutation& perm) {
  FeatureStack out;
  out.reserve(x.size());
  for (const auto& s : x) out.push_back(permute_signal(s, perm));
  return out;
}

Graph sample_link_loss(const Graph& graph, double drop_prob, std::uint64_t seed) {
  if (!(drop_prob >= 0.0 && drop_prob < 1.0)) {
    throw InvalidArgument("sample_link_loss: drop probability must lie in [0, 1)");
  }
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> kept;
  kept.reserve(graph.num_edges());
  for (const auto& e : graph.edges()) {
    if (!(unit(rng) < drop_prob)) kept.push_back(e);
  }
  return Graph::from_edges(graph.num_nodes(), std::move(kept));
}

double inf_norm_max_power(const Graph& graph, int max_order) {
  if (max_order < 1) throw InvalidArgument("inf_norm_max_power: K must be >= 1");
  const auto n = static_cast<std::size_t>(graph.num_nodes());
  // Columns of S^k, advanced one sparse product at a time.
  std::vector<Signal> cols(n, Signal(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) cols[j][j] = 1.0;
  double best = 0.0;
  Signal next(n);
  for (int k = 1; k <= max_order; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      graph.gso().multiply(cols[j], next);
      std::swap(cols[j], next);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += std::abs(cols[j][i]);
      norm = std::max(norm, row);
    }
    best = std::max(best, norm);
  }
  return best;
}

}  // namespace graphadapt
