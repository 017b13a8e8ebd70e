#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "graphadapt/activations.hpp"
#include "graphadapt/filters.hpp"
#include "graphadapt/graph.hpp"
#include "graphadapt/types.hpp"

namespace graphadapt {

// Reverse-mode differentiation for the fixed operation set of a GCNN: filter
// banks, the six activations and the per-vertex readout. Every forward
// primitive records what its vector-Jacobian product needs; the VJPs consume
// those records. S is symmetric (undirected graphs), so (S^k)^T = S^k.

/// Forward record of one activation applied to one feature.
struct ActivationRecord {
  ActivationParams params;
  Signal input;                                    ///< z
  std::vector<Signal> shifted;                     ///< [k-1] = S^k z (graph-adaptive kinds)
  std::vector<std::vector<Selection>> selections;  ///< [k-1][i] (max/median kinds)
  std::vector<Signal> terms;                       ///< [k-1][i] operator output at resolution k
  Signal output;
};

/// Runs the activation and keeps its intermediates. The output is bitwise equal
/// to apply_activation.
ActivationRecord record_activation(const Graph& graph, std::span<const double> z,
                                   const ActivationParams& params,
                                   const KHopNeighborhoods* hoods = nullptr);

/// Smallest distance of any discrete decision (ReLU sign, max/median choice)
/// from its switching point; +inf when there is none.
double decision_margin(const ActivationRecord& record);

/// Hash of every discrete decision taken in the record.
std::uint64_t decision_signature(const ActivationRecord& record, std::uint64_t seed = 0);

struct ActivationGrads {
  Signal input;
  double beta = 0.0;
  std::vector<double> h_sigma;
};

/// Dispatches to the relu / localized / graph-adaptive max-median / kernel rule.
/// Max routes each vertex's upstream gradient to the selected neighbor (lowest
/// index on ties); an even median splits it 1/2-1/2 over the middle pair.
ActivationGrads vjp_activation(const Graph& graph, const ActivationRecord& record,
                               std::span<const double> upstream);

struct ConvolutionGrads {
  Signal input;
  std::vector<double> taps;
};

/// d/dh_k = <S^k x, g>, d/dx = sum_k h_k S^k g (Horner, K shifts).
ConvolutionGrads vjp_graph_convolution(const Graph& graph, std::span<const Signal> powers,
                                       const FilterTaps& taps, std::span<const double> upstream);

struct FilterBankGrads {
  FeatureStack input;        ///< empty unless requested
  std::vector<double> taps;  ///< layout of FilterBank::coefficients()
};

FilterBankGrads vjp_filter_bank(const Graph& graph, const std::vector<std::vector<Signal>>& powers,
                                const FilterBank& bank, const FeatureStack& upstream,
                                bool need_input_grad);

/// Everything one GCNN layer needs for its backward pass.
struct LayerRecord {
  std::vector<std::vector<Signal>> powers;  ///< [g][k] = S^k x^g of the layer input
  std::vector<ActivationRecord> activations;
};

/// Ordered record of one forward pass; replayable in reverse exactly once.
class Tape {
 public:
  std::vector<LayerRecord> layers;
  FeatureStack readout_input;  ///< chi, [feature][vertex]

  bool replayed() const noexcept { return replayed_; }
  void mark_replayed();

  double decision_margin() const;
  std::uint64_t decision_signature() const;

 private:
  bool replayed_ = false;
};

}  // namespace graphadapt
