#include "graphadapt/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "graphadapt/adam.hpp"
#include "graphadapt/error.hpp"
#include "graphadapt/rng.hpp"

namespace graphadapt {
namespace {

// Runs fn(i) for i in [0, count) on up to `threads` workers; fn must only write
// to slot i of its own output.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t used = std::min(workers, count);
  pool.reserve(used);
  for (std::size_t w = 0; w < used; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += used) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Sum of per-entry scores of one sample: correct predictions for accuracy,
// squared errors for rmse.
double sample_score(const FeatureStack& out, const Sample& s, const std::vector<int>& nodes,
                    const Objective& objective, Metric metric) {
  if (metric == Metric::accuracy && objective.across_readout()) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < nodes.size(); ++c) {
      if (out[0][nodes[c]] > out[0][nodes[best]]) best = c;
    }
    return static_cast<int>(best) == s.label ? 1.0 : 0.0;
  }
  double acc = 0.0;
  for (int r : nodes) {
    if (metric == Metric::accuracy) {
      std::size_t best = 0;
      for (std::size_t o = 1; o < out.size(); ++o) {
        if (out[o][r] > out[best][r]) best = o;
      }
      acc += static_cast<int>(best) == s.label ? 1.0 : 0.0;
    } else {
      for (std::size_t o = 0; o < out.size(); ++o) {
        const double d = out[o][r] - s.target.at(o).at(r);
        acc += d * d;
      }
    }
  }
  return acc;
}

}  // namespace

double evaluate(const Trainable& model, const GraphContext& ctx, const std::vector<Sample>& samples,
                const Objective& objective, Metric metric, int threads) {
  if (samples.empty()) throw InvalidArgument("evaluate: empty sample set");
  const auto nodes = objective.nodes(ctx.graph().num_nodes());
  std::vector<double> scores(samples.size());
  std::size_t outputs = 1;
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    const auto out = model.predict(ctx, samples[i].input);
    scores[i] = sample_score(out, samples[i], nodes, objective, metric);
    if (i == 0) outputs = out.size();
  });
  double total = 0.0;
  for (double s : scores) total += s;
  if (metric == Metric::accuracy) {
    const std::size_t per_sample = objective.across_readout() ? 1 : nodes.size();
    return total / static_cast<double>(samples.size() * per_sample);
  }
  return std::sqrt(total / static_cast<double>(samples.size() * nodes.size() * outputs));
}

TrainResult train(Trainable& model, const GraphContext& ctx, const Dataset& data,
                  const Objective& objective, Metric metric, const TrainOptions& options) {
  if (data.train.empty()) throw InvalidArgument("train: empty training set");
  if (options.batch_size < 1) throw InvalidArgument("train: batch size must be >= 1");
  ParamStore& store = model.params();
  const std::size_t P = store.parameter_count();
  const auto& validation = data.validation.empty() ? data.train : data.validation;
  const bool maximize = higher_is_better(metric);

  TrainResult result;
  result.best_validation = evaluate(model, ctx, validation, objective, metric, options.threads);
  std::vector<double> best_params = store.flat_values();

  std::vector<std::size_t> order(data.train.size());
  std::iota(order.begin(), order.end(), 0);
  auto rng = make_rng(options.seed);

  std::vector<std::vector<double>> sample_grads;
  std::vector<double> sample_losses;
  std::vector<double> batch_grad(P);

  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(options.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(options.batch_size));
      const std::size_t B = end - start;
      sample_grads.assign(B, std::vector<double>(P, 0.0));
      sample_losses.assign(B, 0.0);
      parallel_for(B, options.threads, [&](std::size_t b) {
        sample_losses[b] =
            model.loss_and_gradient(ctx, data.train[order[start + b]], objective, sample_grads[b]);
      });
      std::fill(batch_grad.begin(), batch_grad.end(), 0.0);
      for (std::size_t b = 0; b < B; ++b) {
        if (!std::isfinite(sample_losses[b])) {
          throw TrainingError("train: non-finite loss at epoch " + std::to_string(epoch) +
                              ", sample " + std::to_string(order[start + b]));
        }
        epoch_loss += sample_losses[b];
        for (std::size_t p = 0; p < P; ++p) batch_grad[p] += sample_grads[b][p];
      }
      const double inv = 1.0 / static_cast<double>(B);
      for (double& g : batch_grad) g *= inv;
      store.zero_grad();
      store.accumulate_grad(batch_grad);
      adam_step(store, options.adam);
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = epoch_loss / static_cast<double>(order.size());
    rec.validation_metric = evaluate(model, ctx, validation, objective, metric, options.threads);
    result.history.push_back(rec);
    const bool better = maximize ? rec.validation_metric > result.best_validation
                                 : rec.validation_metric < result.best_validation;
    if (better) {
      result.best_validation = rec.validation_metric;
      result.best_epoch = epoch;
      best_params = store.flat_values();
    }
  }
  store.set_flat_values(best_params);
  return result;
}

}  // namespace graphadapt
