#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace graphadapt {

enum class LossKind { cross_entropy, mse, smooth_l1 };

std::string_view to_string(LossKind kind);
LossKind loss_kind_from_string(std::string_view name);

/// Scalar loss with its gradient w.r.t. the prediction.
struct LossValue {
  double value = 0.0;
  std::vector<double> grad;
};

/// -log softmax(logits)[label], computed with the log-sum-exp shift.
LossValue cross_entropy(std::span<const double> logits, int label);

/// mean_i (pred_i - target_i)^2.
LossValue mse(std::span<const double> pred, std::span<const double> target);

/// mean_i of 0.5 d^2 for |d| < 1, |d| - 0.5 otherwise.
LossValue smooth_l1(std::span<const double> pred, std::span<const double> target);

}  // namespace graphadapt
