#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphadapt/activations.hpp"
#include "graphadapt/adam.hpp"
#include "graphadapt/filters.hpp"
#include "graphadapt/graph.hpp"
#include "graphadapt/objective.hpp"
#include "graphadapt/param_store.hpp"
#include "graphadapt/tape.hpp"

namespace graphadapt {

enum class BetaScope { global, per_layer_feature };

std::string_view to_string(BetaScope scope);
BetaScope beta_scope_from_string(std::string_view name);

/// One graph convolutional layer: filter bank of order K, then an activation of
/// resolution K_sigma applied per output feature.
struct LayerSpec {
  int features = 1;
  int filter_order = 1;
  ActivationKind activation = ActivationKind::relu;
  int resolution = 0;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct TrainOptions {
  int epochs = 100;
  int batch_size = 100;
  AdamOptions adam;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct GcnnConfig {
  int input_features = 1;
  std::vector<LayerSpec> layers;
  int output_features = 1;
  std::vector<int> readout_nodes;  ///< empty: every vertex is a readout vertex
  LossKind loss = LossKind::mse;
  ClassLogits class_logits = ClassLogits::per_vertex;
  BetaScope beta_scope = BetaScope::per_layer_feature;
  double gamma = 0.1;
  TrainOptions train;

  void validate() const;
  int num_layers() const noexcept { return static_cast<int>(layers.size()); }
  int features_in(int layer) const noexcept {
    return layer == 0 ? input_features : layers[layer - 1].features;
  }
  Objective objective() const { return {loss, readout_nodes, class_logits}; }
};

std::string config_to_json(const GcnnConfig& config);
GcnnConfig config_from_json(std::string_view text);

/// sum_l F_l F_{l-1} (K_l+1) + sum_{l non-relu} F_l (K_sigma,l + 1) + F_o F_L,
/// with the per-feature betas replaced by one shared scalar for BetaScope::global.
std::size_t expected_parameter_count(const GcnnConfig& config);

/// Deepest k-hop ball any localized layer of the config reads.
int required_hop_depth(const GcnnConfig& config);

/// A graph plus the derived structures a forward pass may need.
class GraphContext {
 public:
  explicit GraphContext(const Graph& graph, int hop_depth = 0);

  const Graph& graph() const noexcept { return *graph_; }
  const KHopNeighborhoods* hoods() const noexcept { return hoods_ ? hoods_.get() : nullptr; }

 private:
  const Graph* graph_;
  std::shared_ptr<const KHopNeighborhoods> hoods_;
};

/// A parametric map from input features to per-vertex outputs that can be
/// trained by `train`.
class Trainable {
 public:
  virtual ~Trainable() = default;

  virtual ParamStore& params() = 0;
  virtual const ParamStore& params() const = 0;

  /// Outputs [output][vertex].
  virtual FeatureStack predict(const GraphContext& ctx, const FeatureStack& input) const = 0;

  /// Forward pass, loss from `objective`, then adds d loss / d params into
  /// `grad_flat` (ParamStore flat layout). Returns the sample loss.
  virtual double loss_and_gradient(const GraphContext& ctx, const Sample& sample,
                                   const Objective& objective,
                                   std::span<double> grad_flat) const = 0;
};

struct ForwardResult {
  FeatureStack outputs;
  Tape tape;
};

/// Graph convolutional network: L x (filter bank -> activation), then the
/// shared per-vertex readout H_FC (F_o x F_L). Parameters never depend on N or M.
class GcnnModel final : public Trainable {
 public:
  /// Taps and readout ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)); beta = 1, h_sigma = 0.
  GcnnModel(GcnnConfig config, std::uint64_t init_seed);

  const GcnnConfig& config() const noexcept { return config_; }
  ParamStore& params() override { return store_; }
  const ParamStore& params() const override { return store_; }

  FilterBank filter_bank(int layer) const;
  ActivationParams activation(int layer, int feature) const;
  double readout(int output, int feature) const;

  /// Context with the k-hop balls this model's localized layers need.
  GraphContext context(const Graph& graph) const;

  FeatureStack predict(const GraphContext& ctx, const FeatureStack& input) const override;
  ForwardResult forward(const GraphContext& ctx, const FeatureStack& input) const;

  /// Replays `tape` in reverse; adds parameter gradients to `grad_flat` and,
  /// when requested, writes the gradient w.r.t. the input features.
  void backward(const GraphContext& ctx, Tape& tape, const FeatureStack& output_grad,
                std::span<double> grad_flat, FeatureStack* input_grad = nullptr) const;

  double loss_and_gradient(const GraphContext& ctx, const Sample& sample,
                           const Objective& objective,
                           std::span<double> grad_flat) const override;

  // Tensor indices inside the store.
  std::size_t taps_tensor(int layer) const { return layer_tensors_.at(layer).taps; }
  std::size_t readout_tensor() const noexcept { return readout_; }

 private:
  struct LayerTensors {
    std::size_t taps = 0;
    std::ptrdiff_t h_sigma = -1;
    std::ptrdiff_t beta = -1;
  };

  double beta_value(int layer, int feature) const;
  std::size_t beta_flat_index(int layer, int feature) const;

  GcnnConfig config_;
  ParamStore store_;
  std::vector<LayerTensors> layer_tensors_;
  std::ptrdiff_t global_beta_ = -1;
  std::size_t readout_ = 0;
};

/// Trained single graph convolution without nonlinearity or readout
/// (the linear comparison method). One input and one output feature.
class FirModel final : public Trainable {
 public:
  FirModel(int order, std::uint64_t init_seed);

  int order() const noexcept { return order_; }
  FilterTaps taps() const;

  ParamStore& params() override { return store_; }
  const ParamStore& params() const override { return store_; }

  FeatureStack predict(const GraphContext& ctx, const FeatureStack& input) const override;
  double loss_and_gradient(const GraphContext& ctx, const Sample& sample,
                           const Objective& objective,
                           std::span<double> grad_flat) const override;

 private:
  int order_;
  ParamStore store_;
};

/// max over `trials` random P of || Phi(P^T x; P^T S P) - P^T Phi(x; S) ||_inf.
double equivariance_test(const GcnnModel& model, const Graph& graph, const FeatureStack& input,
                         int trials, std::uint64_t seed);

/// Same, for one given permutation.
double equivariance_deviation(const GcnnModel& model, const Graph& graph,
                              const FeatureStack& input, const Permutation& perm);

}  // namespace graphadapt
