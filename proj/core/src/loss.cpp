#include "graphadapt/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "graphadapt/error.hpp"

namespace graphadapt {

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::cross_entropy: return "cross_entropy";
    case LossKind::mse: return "mse";
    case LossKind::smooth_l1: return "smooth_l1";
  }
  return "unknown";
}

LossKind loss_kind_from_string(std::string_view name) {
  for (auto k : {LossKind::cross_entropy, LossKind::mse, LossKind::smooth_l1}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown loss kind '" + std::string(name) + "'");
}

LossValue cross_entropy(std::span<const double> logits, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= logits.size()) {
    throw InvalidArgument("cross_entropy: label " + std::to_string(label) + " out of range [0, " +
                          std::to_string(logits.size()) + ")");
  }
  const double shift = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - shift);
  const double log_z = shift + std::log(sum);
  LossValue out;
  out.value = log_z - logits[label];
  out.grad.resize(logits.size());
  for (std::size_t c = 0; c < logits.size(); ++c) out.grad[c] = std::exp(logits[c] - log_z);
  out.grad[label] -= 1.0;
  return out;
}

namespace {

void require_same(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size() || a.empty()) {
    throw InvalidArgument(std::string(what) + ": prediction/target size mismatch");
  }
}

}  // namespace

LossValue mse(std::span<const double> pred, std::span<const double> target) {
  require_same(pred, target, "mse");
  const double n = static_cast<double>(pred.size());
  LossValue out;
  out.grad.resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    out.value += d * d;
    out.grad[i] = 2.0 * d / n;
  }
  out.value /= n;
  return out;
}

LossValue smooth_l1(std::span<const double> pred, std::span<const double> target) {
  require_same(pred, target, "smooth_l1");
  const double n = static_cast<double>(pred.size());
  LossValue out;
  out.grad.resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    if (std::abs(d) < 1.0) {
      out.value += 0.5 * d * d;
      out.grad[i] = d / n;
    } else {
      out.value += std::abs(d) - 0.5;
      out.grad[i] = (d > 0.0 ? 1.0 : -1.0) / n;
    }
  }
  out.value /= n;
  return out;
}

}  // namespace graphadapt
