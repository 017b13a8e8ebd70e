#pragma once

#include <vector>

#include "graphadapt/model.hpp"
#include "graphadapt/objective.hpp"

namespace graphadapt {

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double validation_metric = 0.0;
};

struct TrainResult {
  std::vector<EpochRecord> history;
  int best_epoch = 0;  ///< 0 means the initial parameters were kept
  double best_validation = 0.0;
};

/// Mini-batch ADAM. Each epoch shuffles the training set with the run seed;
/// per-sample gradients are reduced in ascending sample order and averaged.
/// The parameters with the best validation metric (ties to the earlier epoch)
/// are restored at the end. Throws TrainingError on a non-finite loss.
TrainResult train(Trainable& model, const GraphContext& ctx, const Dataset& data,
                  const Objective& objective, Metric metric, const TrainOptions& options);

/// Accuracy (argmax at each readout vertex against the label, or one argmax
/// over the readout vertices for ClassLogits::across_readout) or RMSE over the
/// readout entries of every output.
double evaluate(const Trainable& model, const GraphContext& ctx, const std::vector<Sample>& samples,
                const Objective& objective, Metric metric, int threads = 1);

/// True when a larger value of `metric` is better.
constexpr bool higher_is_better(Metric metric) { return metric == Metric::accuracy; }

}  // namespace graphadapt
