#include "graphadapt/objective.hpp"

#include <numeric>
#include <string>

#include "graphadapt/error.hpp"

namespace graphadapt {

std::string_view to_string(Metric metric) {
  return metric == Metric::accuracy ? "accuracy" : "rmse";
}

std::string_view to_string(ClassLogits layout) {
  return layout == ClassLogits::per_vertex ? "per_vertex" : "across_readout";
}

ClassLogits class_logits_from_string(std::string_view name) {
  for (auto l : {ClassLogits::per_vertex, ClassLogits::across_readout}) {
    if (to_string(l) == name) return l;
  }
  throw InvalidArgument("unknown class logit layout '" + std::string(name) + "'");
}

std::vector<int> Objective::nodes(int n) const {
  if (!readout_nodes.empty()) return readout_nodes;
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  return all;
}

Objective::Evaluation Objective::evaluate(const FeatureStack& outputs, const Sample& sample) const {
  if (outputs.empty()) throw InvalidArgument("objective: model produced no outputs");
  const int n = static_cast<int>(outputs[0].size());
  const auto readout = nodes(n);
  const std::size_t F = outputs.size();
  Evaluation ev;
  ev.output_grad.assign(F, Signal(static_cast<std::size_t>(n), 0.0));
  for (int r : readout) {
    if (r < 0 || r >= n) throw InvalidArgument("objective: readout vertex out of range");
  }

  if (across_readout()) {
    std::vector<double> logits(readout.size());
    for (std::size_t c = 0; c < readout.size(); ++c) logits[c] = outputs[0][readout[c]];
    const LossValue lv = cross_entropy(logits, sample.label);
    ev.loss = lv.value;
    for (std::size_t c = 0; c < readout.size(); ++c) ev.output_grad[0][readout[c]] += lv.grad[c];
    return ev;
  }

  const double scale = 1.0 / static_cast<double>(readout.size());
  for (int r : readout) {
    std::vector<double> pred(F);
    for (std::size_t o = 0; o < F; ++o) pred[o] = outputs[o][r];
    LossValue lv;
    if (loss == LossKind::cross_entropy) {
      lv = cross_entropy(pred, sample.label);
    } else {
      if (sample.target.size() != F) {
        throw InvalidArgument("objective: target has " + std::to_string(sample.target.size()) +
                              " outputs, model has " + std::to_string(F));
      }
      std::vector<double> target(F);
      for (std::size_t o = 0; o < F; ++o) target[o] = sample.target[o].at(r);
      lv = loss == LossKind::mse ? mse(pred, target) : smooth_l1(pred, target);
    }
    ev.loss += lv.value * scale;
    for (std::size_t o = 0; o < F; ++o) ev.output_grad[o][r] += lv.grad[o] * scale;
  }
  return ev;
}

}  // namespace graphadapt
