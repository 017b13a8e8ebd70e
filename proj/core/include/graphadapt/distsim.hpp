#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "graphadapt/graph.hpp"
#include "graphadapt/model.hpp"

namespace graphadapt {

struct MessageRound {
  int round = 0;  ///< 1-based
  std::size_t messages = 0;
  std::size_t payload_scalars = 0;
};

/// Per-round traffic of one distributed forward pass.
struct MessageLog {
  std::vector<MessageRound> rounds;

  std::size_t total_messages() const noexcept;
  std::size_t total_payload() const noexcept;
  /// CSV `round,messages,payload_scalars`.
  void write_csv(std::ostream& out) const;
};

struct DistributedResult {
  FeatureStack outputs;  ///< [output][vertex]
  MessageLog log;
};

/// Throws NotDistributable naming the first layer (1-based) whose activation
/// needs more than one-hop information: localized max/median with K_sigma >= 2.
void check_distributable(const GcnnConfig& config);

/// Executes the model's forward pass as synchronous one-hop rounds. Each node
/// computes from its own memory, its incident edge weights and the scalars its
/// neighbors sent in the current round; every delivery is checked against the
/// edge set.
///
/// Round schedule per layer: K rounds per input feature for the filter bank;
/// per output feature, K_sigma shift rounds plus one aggregation round for the
/// graph-adaptive kinds and a single round for localized kinds (K_sigma = 1).
DistributedResult run_distributed_forward(const Graph& graph, const GcnnModel& model,
                                          const FeatureStack& input);

/// sum_l K_l F_{l-1} + [ga] (K_sigma,l + 1) F_l + [localized] F_l.
std::size_t round_count(const GcnnConfig& config);

/// Every round sends one scalar along each edge in both directions: rounds * 2M.
std::size_t message_count(const GcnnConfig& config, const Graph& graph);

}  // namespace graphadapt
