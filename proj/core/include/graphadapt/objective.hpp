#pragma once

#include <string_view>
#include <vector>

#include "graphadapt/loss.hpp"
#include "graphadapt/types.hpp"

namespace graphadapt {

/// One supervised example. `target` is [output][vertex] for regression losses;
/// `label` is the class index for cross-entropy.
struct Sample {
  FeatureStack input;
  FeatureStack target;
  int label = -1;
};

struct Dataset {
  std::vector<Sample> train;
  std::vector<Sample> validation;
  std::vector<Sample> test;
};

enum class Metric { accuracy, rmse };

std::string_view to_string(Metric metric);

/// Where cross-entropy reads its class scores. per_vertex: every readout vertex
/// carries one logit per output feature and is scored on its own.
/// across_readout: output 0 at the c-th readout vertex is the logit of class c.
enum class ClassLogits { per_vertex, across_readout };

std::string_view to_string(ClassLogits layout);
ClassLogits class_logits_from_string(std::string_view name);

/// Loss of a sample restricted to the readout vertices (all vertices when
/// `readout_nodes` is empty), averaged over readout vertices and outputs.
struct Objective {
  LossKind loss = LossKind::mse;
  std::vector<int> readout_nodes;
  ClassLogits logits = ClassLogits::per_vertex;

  struct Evaluation {
    double loss = 0.0;
    FeatureStack output_grad;  ///< [output][vertex], zero off the readout set
  };

  Evaluation evaluate(const FeatureStack& outputs, const Sample& sample) const;

  /// The readout vertex list, expanded to 0..n-1 when empty.
  std::vector<int> nodes(int n) const;

  bool across_readout() const noexcept {
    return loss == LossKind::cross_entropy && logits == ClassLogits::across_readout;
  }
};

}  // namespace graphadapt
