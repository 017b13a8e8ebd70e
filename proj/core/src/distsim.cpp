#include "graphadapt/distsim.hpp"

#include <string>

#include "graphadapt/error.hpp"

namespace graphadapt {
namespace {

// What one vertex knows: its id, incident edges with their weights, its own
// values and the inbox of the current round (aligned with `neighbors`).
struct NodeState {
  int id = 0;
  std::vector<int> neighbors;
  std::vector<double> weights;
  std::vector<double> features;  // current layer's features at this vertex
  std::vector<double> inbox;

  double weighted_inbox_sum() const {
    double s = 0.0;
    for (std::size_t p = 0; p < inbox.size(); ++p) s += weights[p] * inbox[p];
    return s;
  }
};

class Network {
 public:
  explicit Network(const Graph& graph) : graph_(graph) {
    const int n = graph.num_nodes();
    nodes_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      auto& s = nodes_[i];
      s.id = i;
      s.neighbors.assign(graph.neighbors(i).begin(), graph.neighbors(i).end());
      s.weights.assign(graph.neighbor_weights(i).begin(), graph.neighbor_weights(i).end());
      s.inbox.assign(s.neighbors.size(), 0.0);
    }
    // slot_[i][p]: position of i inside the inbox of its p-th neighbor.
    slot_.resize(nodes_.size());
    for (auto& s : nodes_) {
      for (int j : s.neighbors) {
        const auto& nj = nodes_[j].neighbors;
        std::size_t q = 0;
        while (q < nj.size() && nj[q] != s.id) ++q;
        slot_[s.id].push_back(q);
      }
    }
  }

  std::vector<NodeState>& nodes() noexcept { return nodes_; }

  /// One lockstep round: every vertex sends `outgoing[i]` to all neighbors.
  void round(const std::vector<double>& outgoing) {
    MessageRound rec;
    rec.round = static_cast<int>(log_.rounds.size()) + 1;
    for (auto& s : nodes_) {
      for (std::size_t p = 0; p < s.neighbors.size(); ++p) {
        deliver(s.id, s.neighbors[p], slot_[s.id][p], outgoing[s.id]);
        ++rec.messages;
        ++rec.payload_scalars;
      }
    }
    log_.rounds.push_back(rec);
  }

  MessageLog take_log() { return std::move(log_); }

 private:
  void deliver(int from, int to, std::size_t slot, double value) {
    auto& dst = nodes_[to];
    if (!graph_.has_edge(from, to) || slot >= dst.neighbors.size() || dst.neighbors[slot] != from) {
      throw Error("distsim: message " + std::to_string(from) + " -> " + std::to_string(to) +
                  " does not follow an edge");
    }
    dst.inbox[slot] = value;
  }

  const Graph& graph_;
  std::vector<NodeState> nodes_;
  std::vector<std::vector<std::size_t>> slot_;
  MessageLog log_;
};

double relu_scalar(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

std::size_t MessageLog::total_messages() const noexcept {
  std::size_t t = 0;
  for (const auto& r : rounds) t += r.messages;
  return t;
}

std::size_t MessageLog::total_payload() const noexcept {
  std::size_t t = 0;
  for (const auto& r : rounds) t += r.payload_scalars;
  return t;
}

void MessageLog::write_csv(std::ostream& out) const {
  out << "round,messages,payload_scalars\n";
  for (const auto& r : rounds) out << r.round << ',' << r.messages << ',' << r.payload_scalars << '\n';
}

void check_distributable(const GcnnConfig& config) {
  for (int l = 0; l < config.num_layers(); ++l) {
    const auto& L = config.layers[l];
    if (is_localized(L.activation) && L.resolution >= 2) {
      throw NotDistributable("layer " + std::to_string(l + 1) + ": activation '" +
                                 std::string(to_string(L.activation)) + "' with resolution " +
                                 std::to_string(L.resolution) +
                                 " reads beyond the one-hop neighborhood and is not distributable",
                             l + 1);
    }
  }
}

std::size_t round_count(const GcnnConfig& config) {
  check_distributable(config);
  std::size_t rounds = 0;
  for (int l = 0; l < config.num_layers(); ++l) {
    const auto& L = config.layers[l];
    rounds += static_cast<std::size_t>(L.filter_order) * config.features_in(l);
    if (is_graph_adaptive(L.activation)) {
      rounds += static_cast<std::size_t>(L.resolution + 1) * L.features;
    } else if (is_localized(L.activation)) {
      rounds += static_cast<std::size_t>(L.features);
    }
  }
  return rounds;
}

std::size_t message_count(const GcnnConfig& config, const Graph& graph) {
  return round_count(config) * 2 * graph.num_edges();
}

DistributedResult run_distributed_forward(const Graph& graph, const GcnnModel& model,
                                          const FeatureStack& input) {
  const GcnnConfig& config = model.config();
  check_distributable(config);
  const auto n = static_cast<std::size_t>(graph.num_nodes());
  require_stack_shape(input, static_cast<std::size_t>(config.input_features), n,
                      "distributed input");

  Network net(graph);
  auto& nodes = net.nodes();
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].features.resize(input.size());
    for (std::size_t g = 0; g < input.size(); ++g) nodes[i].features[g] = input[g][i];
  }
  std::vector<double> outgoing(n);

  for (int l = 0; l < config.num_layers(); ++l) {
    const auto& L = config.layers[l];
    const FilterBank bank = model.filter_bank(l);
    const int G = bank.in_features();
    const int K = bank.order();

    // powers[i][g][k] = [S^k x^g]_i, built by K exchanges per input feature.
    std::vector<std::vector<std::vector<double>>> powers(
        n, std::vector<std::vector<double>>(static_cast<std::size_t>(G),
                                            std::vector<double>(static_cast<std::size_t>(K) + 1)));
    for (int g = 0; g < G; ++g) {
      for (std::size_t i = 0; i < n; ++i) powers[i][g][0] = nodes[i].features[g];
      for (int k = 1; k <= K; ++k) {
        for (std::size_t i = 0; i < n; ++i) outgoing[i] = powers[i][g][k - 1];
        net.round(outgoing);
        for (std::size_t i = 0; i < n; ++i) powers[i][g][k] = nodes[i].weighted_inbox_sum();
      }
    }

    std::vector<std::vector<double>> z(n, std::vector<double>(static_cast<std::size_t>(L.features)));
    for (std::size_t i = 0; i < n; ++i) {
      for (int f = 0; f < L.features; ++f) {
        double acc = 0.0;
        for (int g = 0; g < G; ++g) {
          for (int k = 0; k <= K; ++k) acc += bank.tap(f, g, k) * powers[i][g][k];
        }
        z[i][f] = acc;
      }
    }

    for (std::size_t i = 0; i < n; ++i) nodes[i].features.assign(static_cast<std::size_t>(L.features), 0.0);
    for (int f = 0; f < L.features; ++f) {
      const ActivationParams p = model.activation(l, f);
      if (p.kind == ActivationKind::relu) {
        for (std::size_t i = 0; i < n; ++i) nodes[i].features[f] = relu_scalar(z[i][f]);
        continue;
      }
      std::vector<double> out(n);
      for (std::size_t i = 0; i < n; ++i) out[i] = p.beta * relu_scalar(z[i][f]);

      if (is_localized(p.kind)) {
        for (std::size_t i = 0; i < n; ++i) outgoing[i] = z[i][f];
        net.round(outgoing);
        const Aggregator agg = aggregator_of(p.kind);
        for (std::size_t i = 0; i < n; ++i) out[i] += p.h_sigma[0] * aggregate_values(nodes[i].inbox, agg);
      } else {
        // Round r ships S^{r-1} z: it feeds both the next shift and the
        // neighborhood term at resolution r-1. The last round only aggregates.
        std::vector<double> cur(n);
        for (std::size_t i = 0; i < n; ++i) cur[i] = z[i][f];
        const int Ks = p.resolution();
        for (int r = 1; r <= Ks + 1; ++r) {
          net.round(cur);
          if (r >= 2) {
            const double h = p.h_sigma[r - 2];
            for (std::size_t i = 0; i < n; ++i) {
              const auto& inbox = nodes[i].inbox;
              const double term = p.kind == ActivationKind::ga_kernel
                                      ? kernel_value(cur[i], inbox, p.gamma)
                                      : aggregate_values(inbox, aggregator_of(p.kind));
              out[i] += h * term;
            }
          }
          if (r <= Ks) {
            for (std::size_t i = 0; i < n; ++i) cur[i] = nodes[i].weighted_inbox_sum();
          }
        }
      }
      for (std::size_t i = 0; i < n; ++i) nodes[i].features[f] = out[i];
    }
  }

  DistributedResult result;
  const int F_last = config.layers.back().features;
  result.outputs.assign(static_cast<std::size_t>(config.output_features), Signal(n, 0.0));
  for (int o = 0; o < config.output_features; ++o) {
    for (std::size_t i = 0; i < n; ++i) {
      double y = 0.0;
      for (int f = 0; f < F_last; ++f) y += model.readout(o, f) * nodes[i].features[f];
      result.outputs[o][i] = y;
    }
  }
  result.log = net.take_log();
  return result;
}

}  // namespace graphadapt
