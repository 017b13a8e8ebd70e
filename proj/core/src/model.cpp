#include "graphadapt/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "graphadapt/error.hpp"
#include "graphadapt/rng.hpp"
#include "json_support.hpp"

namespace graphadapt {

std::string_view to_string(BetaScope scope) {
  return scope == BetaScope::global ? "global" : "per_layer_feature";
}

BetaScope beta_scope_from_string(std::string_view name) {
  if (name == "global") return BetaScope::global;
  if (name == "per_layer_feature") return BetaScope::per_layer_feature;
  throw InvalidArgument("unknown beta scope '" + std::string(name) + "'");
}

void GcnnConfig::validate() const {
  if (input_features < 1) throw InvalidArgument("config: input_features must be >= 1");
  if (layers.empty()) throw InvalidArgument("config: at least one layer is required");
  if (output_features < 1) throw InvalidArgument("config: output_features must be >= 1");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& L = layers[l];
    const std::string where = "config: layer " + std::to_string(l + 1);
    if (L.features < 1) throw InvalidArgument(where + " needs >= 1 feature");
    if (L.filter_order < 0) throw InvalidArgument(where + " filter order must be >= 0");
    if (L.activation == ActivationKind::relu) {
      if (L.resolution != 0) throw InvalidArgument(where + " relu takes resolution 0");
    } else if (L.resolution < 1) {
      throw InvalidArgument(where + " activation '" + std::string(to_string(L.activation)) +
                            "' needs resolution >= 1");
    }
  }
  if (!(gamma > 0.0)) throw InvalidArgument("config: gamma must be > 0");
  if (objective().across_readout() && output_features != 1) {
    throw InvalidArgument("config: across_readout class logits need exactly one output feature");
  }
  for (int r : readout_nodes) {
    if (r < 0) throw InvalidArgument("config: negative readout vertex");
  }
  if (train.epochs < 0 || train.batch_size < 1 || train.threads < 1) {
    throw InvalidArgument("config: epochs >= 0, batch_size >= 1 and threads >= 1 required");
  }
}

std::size_t expected_parameter_count(const GcnnConfig& config) {
  std::size_t count = 0;
  bool any_nonlinear_params = false;
  for (int l = 0; l < config.num_layers(); ++l) {
    const auto& L = config.layers[l];
    count += static_cast<std::size_t>(L.features) * config.features_in(l) * (L.filter_order + 1);
    if (L.activation != ActivationKind::relu) {
      any_nonlinear_params = true;
      const std::size_t per_feature =
          static_cast<std::size_t>(L.resolution) + (config.beta_scope == BetaScope::global ? 0 : 1);
      count += static_cast<std::size_t>(L.features) * per_feature;
    }
  }
  if (any_nonlinear_params && config.beta_scope == BetaScope::global) count += 1;
  count += static_cast<std::size_t>(config.output_features) * config.layers.back().features;
  return count;
}

int required_hop_depth(const GcnnConfig& config) {
  int depth = 0;
  for (const auto& L : config.layers) {
    if (is_localized(L.activation)) depth = std::max(depth, L.resolution);
  }
  return depth;
}

GraphContext::GraphContext(const Graph& graph, int hop_depth) : graph_(&graph) {
  if (hop_depth > 0) hoods_ = std::make_shared<const KHopNeighborhoods>(khop_sets(graph, hop_depth));
}

GcnnModel::GcnnModel(GcnnConfig config, std::uint64_t init_seed) : config_(std::move(config)) {
  config_.validate();
  auto rng = make_rng(init_seed);
  auto fill_uniform = [&](std::vector<double>& v, std::size_t fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (auto& e : v) e = dist(rng);
  };

  for (int l = 0; l < config_.num_layers(); ++l) {
    const auto& L = config_.layers[l];
    const auto f_out = static_cast<std::size_t>(L.features);
    const auto f_in = static_cast<std::size_t>(config_.features_in(l));
    const auto taps_len = static_cast<std::size_t>(L.filter_order) + 1;
    const std::string prefix = "layer" + std::to_string(l + 1);
    LayerTensors t;
    t.taps = store_.add(prefix + ".taps", {f_out, f_in, taps_len});
    fill_uniform(store_.tensor(t.taps).value, f_in * taps_len);
    if (L.activation != ActivationKind::relu) {
      t.h_sigma = static_cast<std::ptrdiff_t>(
          store_.add(prefix + ".h_sigma", {f_out, static_cast<std::size_t>(L.resolution)}));
      if (config_.beta_scope == BetaScope::per_layer_feature) {
        t.beta = static_cast<std::ptrdiff_t>(store_.add(prefix + ".beta", {f_out}));
        auto& b = store_.tensor(static_cast<std::size_t>(t.beta)).value;
        std::fill(b.begin(), b.end(), 1.0);
      }
    }
    layer_tensors_.push_back(t);
  }
  const bool needs_global_beta =
      config_.beta_scope == BetaScope::global &&
      std::any_of(config_.layers.begin(), config_.layers.end(),
                  [](const LayerSpec& L) { return L.activation != ActivationKind::relu; });
  if (needs_global_beta) {
    global_beta_ = static_cast<std::ptrdiff_t>(store_.add("beta", {1}));
    store_.tensor(static_cast<std::size_t>(global_beta_)).value[0] = 1.0;
  }
  const auto f_last = static_cast<std::size_t>(config_.layers.back().features);
  readout_ = store_.add("readout", {static_cast<std::size_t>(config_.output_features), f_last});
  fill_uniform(store_.tensor(readout_).value, f_last);

  if (store_.parameter_count() != expected_parameter_count(config_)) {
    throw Error("GcnnModel: parameter layout disagrees with the closed-form count");
  }
}

FilterBank GcnnModel::filter_bank(int layer) const {
  const auto& L = config_.layers.at(layer);
  return FilterBank(L.features, config_.features_in(layer), L.filter_order,
                    store_.tensor(layer_tensors_[layer].taps).value);
}

double GcnnModel::beta_value(int layer, int feature) const {
  const auto& t = layer_tensors_[layer];
  if (t.beta >= 0) return store_.tensor(static_cast<std::size_t>(t.beta)).value[feature];
  if (global_beta_ >= 0) return store_.tensor(static_cast<std::size_t>(global_beta_)).value[0];
  return 1.0;
}

std::size_t GcnnModel::beta_flat_index(int layer, int feature) const {
  const auto& t = layer_tensors_[layer];
  if (t.beta >= 0) return store_.offset(static_cast<std::size_t>(t.beta)) + feature;
  return store_.offset(static_cast<std::size_t>(global_beta_));
}

ActivationParams GcnnModel::activation(int layer, int feature) const {
  const auto& L = config_.layers.at(layer);
  ActivationParams p;
  p.kind = L.activation;
  p.gamma = config_.gamma;
  if (L.activation == ActivationKind::relu) return p;
  p.beta = beta_value(layer, feature);
  const auto& h = store_.tensor(static_cast<std::size_t>(layer_tensors_[layer].h_sigma)).value;
  const auto K = static_cast<std::size_t>(L.resolution);
  p.h_sigma.assign(h.begin() + static_cast<std::ptrdiff_t>(feature * K),
                   h.begin() + static_cast<std::ptrdiff_t>((feature + 1) * K));
  return p;
}

double GcnnModel::readout(int output, int feature) const {
  return store_.tensor(readout_).value[static_cast<std::size_t>(output) *
                                           config_.layers.back().features +
                                       feature];
}

GraphContext GcnnModel::context(const Graph& graph) const {
  return GraphContext(graph, required_hop_depth(config_));
}

ForwardResult GcnnModel::forward(const GraphContext& ctx, const FeatureStack& input) const {
  const Graph& graph = ctx.graph();
  const auto n = static_cast<std::size_t>(graph.num_nodes());
  require_stack_shape(input, static_cast<std::size_t>(config_.input_features), n, "GCNN input");
  ForwardResult result;
  FeatureStack x = input;
  for (int l = 0; l < config_.num_layers(); ++l) {
    const FilterBank bank = filter_bank(l);
    LayerRecord rec;
    rec.powers.reserve(x.size());
    for (const auto& xg : x) rec.powers.push_back(shift_powers(graph, xg, bank.order()));
    const FeatureStack z = filter_bank_combine(rec.powers, bank);
    FeatureStack next;
    next.reserve(z.size());
    for (int f = 0; f < bank.out_features(); ++f) {
      rec.activations.push_back(record_activation(graph, z[f], activation(l, f), ctx.hoods()));
      next.push_back(rec.activations.back().output);
    }
    result.tape.layers.push_back(std::move(rec));
    x = std::move(next);
  }

  const auto& H = store_.tensor(readout_).value;
  const int F_last = config_.layers.back().features;
  result.outputs.assign(static_cast<std::size_t>(config_.output_features), Signal(n, 0.0));
  for (int o = 0; o < config_.output_features; ++o) {
    auto& y = result.outputs[o];
    for (int f = 0; f < F_last; ++f) {
      const double h = H[static_cast<std::size_t>(o) * F_last + f];
      for (std::size_t i = 0; i < n; ++i) y[i] += h * x[f][i];
    }
  }
  result.tape.readout_input = std::move(x);
  return result;
}

FeatureStack GcnnModel::predict(const GraphContext& ctx, const FeatureStack& input) const {
  return forward(ctx, input).outputs;
}

void GcnnModel::backward(const GraphContext& ctx, Tape& tape, const FeatureStack& output_grad,
                         std::span<double> grad_flat, FeatureStack* input_grad) const {
  tape.mark_replayed();
  const Graph& graph = ctx.graph();
  const auto n = static_cast<std::size_t>(graph.num_nodes());
  if (grad_flat.size() != store_.parameter_count()) {
    throw InvalidArgument("backward: gradient buffer has the wrong size");
  }
  require_stack_shape(output_grad, static_cast<std::size_t>(config_.output_features), n,
                      "output gradient");

  const auto& H = store_.tensor(readout_).value;
  const int F_last = config_.layers.back().features;
  const auto& chi = tape.readout_input;
  FeatureStack grad_x(static_cast<std::size_t>(F_last), Signal(n, 0.0));
  const std::size_t h_off = store_.offset(readout_);
  for (int o = 0; o < config_.output_features; ++o) {
    const auto& up = output_grad[o];
    for (int f = 0; f < F_last; ++f) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d += up[i] * chi[f][i];
      grad_flat[h_off + static_cast<std::size_t>(o) * F_last + f] += d;
      const double h = H[static_cast<std::size_t>(o) * F_last + f];
      auto& gx = grad_x[f];
      for (std::size_t i = 0; i < n; ++i) gx[i] += h * up[i];
    }
  }

  for (int l = config_.num_layers() - 1; l >= 0; --l) {
    const auto& L = config_.layers[l];
    const auto& rec = tape.layers[l];
    const auto& t = layer_tensors_[l];
    FeatureStack grad_z(static_cast<std::size_t>(L.features));
    for (int f = 0; f < L.features; ++f) {
      ActivationGrads ag = vjp_activation(graph, rec.activations[f], grad_x[f]);
      if (L.activation != ActivationKind::relu) {
        grad_flat[beta_flat_index(l, f)] += ag.beta;
        const std::size_t off = store_.offset(static_cast<std::size_t>(t.h_sigma)) +
                                static_cast<std::size_t>(f) * L.resolution;
        for (int k = 0; k < L.resolution; ++k) grad_flat[off + k] += ag.h_sigma[k];
      }
      grad_z[f] = std::move(ag.input);
    }
    const bool need_input = l > 0 || input_grad != nullptr;
    FilterBankGrads bg = vjp_filter_bank(graph, rec.powers, filter_bank(l), grad_z, need_input);
    const std::size_t off = store_.offset(t.taps);
    for (std::size_t e = 0; e < bg.taps.size(); ++e) grad_flat[off + e] += bg.taps[e];
    grad_x = std::move(bg.input);
  }
  if (input_grad) *input_grad = std::move(grad_x);
}

double GcnnModel::loss_and_gradient(const GraphContext& ctx, const Sample& sample,
                                    const Objective& objective,
                                    std::span<double> grad_flat) const {
  ForwardResult fr = forward(ctx, sample.input);
  const auto ev = objective.evaluate(fr.outputs, sample);
  backward(ctx, fr.tape, ev.output_grad, grad_flat);
  return ev.loss;
}

FirModel::FirModel(int order, std::uint64_t init_seed) : order_(order) {
  if (order < 0) throw InvalidArgument("FirModel: order must be >= 0");
  const std::size_t t = store_.add("fir.taps", {static_cast<std::size_t>(order) + 1});
  auto rng = make_rng(init_seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(order + 1));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (auto& v : store_.tensor(t).value) v = dist(rng);
}

FilterTaps FirModel::taps() const { return FilterTaps{store_.tensor(0).value}; }

FeatureStack FirModel::predict(const GraphContext& ctx, const FeatureStack& input) const {
  require_stack_shape(input, 1, static_cast<std::size_t>(ctx.graph().num_nodes()), "FIR input");
  return {graph_convolution(ctx.graph(), input[0], taps())};
}

double FirModel::loss_and_gradient(const GraphContext& ctx, const Sample& sample,
                                   const Objective& objective,
                                   std::span<double> grad_flat) const {
  require_stack_shape(sample.input, 1, static_cast<std::size_t>(ctx.graph().num_nodes()),
                      "FIR input");
  const FilterTaps h = taps();
  const auto powers = shift_powers(ctx.graph(), sample.input[0], order_);
  Signal y(sample.input[0].size(), 0.0);
  for (int k = 0; k <= order_; ++k) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h.h[k] * powers[k][i];
  }
  const auto ev = objective.evaluate({y}, sample);
  const auto g = vjp_graph_convolution(ctx.graph(), powers, h, ev.output_grad[0]);
  for (std::size_t k = 0; k < g.taps.size(); ++k) grad_flat[k] += g.taps[k];
  return ev.loss;
}

double equivariance_deviation(const GcnnModel& model, const Graph& graph,
                              const FeatureStack& input, const Permutation& perm) {
  const auto ctx = model.context(graph);
  const FeatureStack reference = model.predict(ctx, input);
  const Graph permuted = permute(graph, perm);
  const auto pctx = model.context(permuted);
  const FeatureStack moved = model.predict(pctx, permute_stack(input, perm));
  return max_abs_diff(moved, permute_stack(reference, perm));
}

double equivariance_test(const GcnnModel& model, const Graph& graph, const FeatureStack& input,
                         int trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("equivariance_test: trials must be >= 1");
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto perm = Permutation::random(graph.num_nodes(), derive_seed(seed, t));
    worst = std::max(worst, equivariance_deviation(model, graph, input, perm));
  }
  return worst;
}

namespace detail {

json config_to_value(const GcnnConfig& c) {
  json layers = json::array();
  for (const auto& L : c.layers) {
    layers.push_back({{"features", L.features},
                      {"filter_order", L.filter_order},
                      {"activation", std::string(to_string(L.activation))},
                      {"resolution", L.resolution}});
  }
  return {{"input_features", c.input_features},
          {"layers", layers},
          {"output_features", c.output_features},
          {"readout_nodes", c.readout_nodes},
          {"loss", std::string(to_string(c.loss))},
          {"class_logits", std::string(to_string(c.class_logits))},
          {"beta_scope", std::string(to_string(c.beta_scope))},
          {"gamma", c.gamma},
          {"train",
           {{"epochs", c.train.epochs},
            {"batch_size", c.train.batch_size},
            {"lr", c.train.adam.lr},
            {"beta1", c.train.adam.beta1},
            {"beta2", c.train.adam.beta2},
            {"eps", c.train.adam.eps},
            {"seed", c.train.seed},
            {"threads", c.train.threads}}}};
}

GcnnConfig config_from_value(const json& v) {
  GcnnConfig c;
  try {
    c.input_features = v.at("input_features").get<int>();
    for (const auto& L : v.at("layers")) {
      LayerSpec s;
      s.features = L.at("features").get<int>();
      s.filter_order = L.at("filter_order").get<int>();
      s.activation = activation_kind_from_string(L.at("activation").get<std::string>());
      s.resolution = L.value("resolution", 0);
      c.layers.push_back(s);
    }
    c.output_features = v.at("output_features").get<int>();
    c.readout_nodes = v.value("readout_nodes", std::vector<int>{});
    c.loss = loss_kind_from_string(v.value("loss", std::string("mse")));
    c.class_logits = class_logits_from_string(v.value("class_logits", std::string("per_vertex")));
    c.beta_scope = beta_scope_from_string(v.value("beta_scope", std::string("per_layer_feature")));
    c.gamma = v.value("gamma", 0.1);
    if (v.contains("train")) {
      const auto& t = v.at("train");
      c.train.epochs = t.value("epochs", c.train.epochs);
      c.train.batch_size = t.value("batch_size", c.train.batch_size);
      c.train.adam.lr = t.value("lr", c.train.adam.lr);
      c.train.adam.beta1 = t.value("beta1", c.train.adam.beta1);
      c.train.adam.beta2 = t.value("beta2", c.train.adam.beta2);
      c.train.adam.eps = t.value("eps", c.train.adam.eps);
      c.train.seed = t.value("seed", c.train.seed);
      c.train.threads = t.value("threads", c.train.threads);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("model config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace detail

std::string config_to_json(const GcnnConfig& config) {
  return detail::config_to_value(config).dump();
}

GcnnConfig config_from_json(std::string_view text) {
  detail::json v;
  try {
    v = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    throw ParseError(std::string("model config: ") + e.what());
  }
  return detail::config_from_value(v);
}

}  // namespace graphadapt
