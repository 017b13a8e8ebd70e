#include "graphadapt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "graphadapt/distsim.hpp"
#include "graphadapt/error.hpp"
#include "graphadapt/rng.hpp"

namespace graphadapt {

const std::vector<ActivationKind>& all_activation_kinds() {
  static const std::vector<ActivationKind> kinds{
      ActivationKind::relu,   ActivationKind::localized_max, ActivationKind::localized_median,
      ActivationKind::ga_max, ActivationKind::ga_median,     ActivationKind::ga_kernel};
  return kinds;
}

GcnnModel random_model(ActivationKind kind, int input_features, int layers, int features,
                       int filter_order, int resolution, int outputs, std::uint64_t seed) {
  GcnnConfig c;
  c.input_features = input_features;
  for (int l = 0; l < layers; ++l) {
    c.layers.push_back({features, filter_order, kind, kind == ActivationKind::relu ? 0 : resolution});
  }
  c.output_features = outputs;
  GcnnModel model(c, seed);
  auto& store = model.params();
  auto rng = make_rng(derive_seed(seed, 7));
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (std::size_t t = 0; t < store.num_tensors(); ++t) {
    auto& tensor = store.tensor(t);
    if (tensor.name.find("h_sigma") != std::string::npos || tensor.name.find("beta") != std::string::npos) {
      for (auto& v : tensor.value) v = coef(rng);
    }
  }
  return model;
}

Graph random_graph(int n, std::uint64_t seed) {
  SbmParams p;
  p.nodes = n;
  p.communities = 2;
  p.p_intra = 0.6;
  p.p_inter = 0.2;
  return normalize_gso(sbm_generate(p, seed).graph);
}

FeatureStack random_features(int features, int n, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  FeatureStack x(static_cast<std::size_t>(features), Signal(static_cast<std::size_t>(n)));
  for (auto& s : x) {
    for (auto& v : s) v = normal(rng);
  }
  return x;
}

EquivarianceReport check_equivariance(ActivationKind kind, int graphs, int permutations,
                                      std::uint64_t seed) {
  EquivarianceReport rep;
  rep.kind = kind;
  for (int g = 0; g < graphs; ++g) {
    const int n = g % 2 == 0 ? 10 : 20;
    const Graph graph = random_graph(n, derive_seed(seed, static_cast<std::uint64_t>(g)));
    const auto model = random_model(kind, 2, 2, 3, 3, 2, 2, derive_seed(seed, 1000 + g));
    const auto x = random_features(2, n, derive_seed(seed, 2000 + g));
    rep.max_deviation = std::max(
        rep.max_deviation, equivariance_test(model, graph, x, permutations, derive_seed(seed, 3000 + g)));
    ++rep.graphs;
    rep.permutations += permutations;
  }
  return rep;
}

LipschitzReport check_lipschitz(int pairs, std::uint64_t seed) {
  LipschitzReport rep;
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(1e-6, 2.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int per_setup = 500;
  int setup = 0;
  while (rep.pairs < pairs) {
    const int n = 8 + 4 * (setup % 4);
    const Graph graph = random_graph(n, derive_seed(seed, static_cast<std::uint64_t>(setup)));
    ActivationParams p;
    p.kind = ActivationKind::ga_max;
    p.beta = 2.0 * coef(rng);
    p.h_sigma.resize(static_cast<std::size_t>(1 + setup % 3));
    for (auto& h : p.h_sigma) h = coef(rng);
    const double L = lipschitz_bound(p, graph);
    for (int i = 0; i < per_setup && rep.pairs < pairs; ++i, ++rep.pairs) {
      Signal x(static_cast<std::size_t>(n)), xt(static_cast<std::size_t>(n));
      const double s = scale(rng);
      for (int v = 0; v < n; ++v) {
        x[v] = normal(rng);
        xt[v] = x[v] + s * normal(rng);
      }
      const Signal z = apply_activation(graph, x, p);
      const Signal zt = apply_activation(graph, xt, p);
      const double dz = max_abs_diff(std::span<const double>(z), std::span<const double>(zt));
      const double dx = max_abs_diff(std::span<const double>(x), std::span<const double>(xt));
      if (dz > L * dx + 1e-12) ++rep.violations;
      if (L * dx > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, dz / (L * dx));
    }
    ++setup;
  }
  return rep;
}

DistributedReport check_distributed(int models, int graphs, std::uint64_t seed) {
  DistributedReport rep;
  const auto& kinds = all_activation_kinds();
  for (int m = 0; m < models; ++m) {
    const ActivationKind kind = kinds[static_cast<std::size_t>(m) % kinds.size()];
    auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(m)));
    std::uniform_int_distribution<int> small(1, 3);
    const int layers = small(rng) == 3 ? 1 : 2;
    const int resolution = is_localized(kind) ? 1 : small(rng);
    const int order = small(rng) - 1;
    const auto model = random_model(kind, small(rng), layers, small(rng), order, resolution, small(rng),
                                    derive_seed(seed, 100 + m));
    for (int g = 0; g < graphs; ++g) {
      const int n = 6 + 4 * g;
      const Graph graph = random_graph(n, derive_seed(seed, 1000 + m * graphs + g));
      const auto x = random_features(model.config().input_features, n, derive_seed(seed, 5000 + m * graphs + g));
      const auto central = model.predict(model.context(graph), x);
      const auto dist = run_distributed_forward(graph, model, x);
      rep.max_deviation = std::max(rep.max_deviation, max_abs_diff(central, dist.outputs));
      const auto rounds = round_count(model.config());
      if (dist.log.rounds.size() != rounds || dist.log.total_messages() != message_count(model.config(), graph) ||
          dist.log.total_payload() != message_count(model.config(), graph)) {
        rep.counts_match = false;
      }
      ++rep.cases;
    }
  }
  rep.rejects_nonlocal = true;
  for (ActivationKind kind : {ActivationKind::localized_max, ActivationKind::localized_median}) {
    const auto model = random_model(kind, 1, 1, 1, 1, 2, 1, seed);
    try {
      (void)run_distributed_forward(random_graph(6, seed), model, random_features(1, 6, seed));
      rep.rejects_nonlocal = false;
    } catch (const NotDistributable& e) {
      rep.rejects_nonlocal = rep.rejects_nonlocal && e.layer() == 1;
    }
  }
  return rep;
}

double gradient_tolerance(ActivationKind kind) {
  return kind == ActivationKind::relu || kind == ActivationKind::ga_kernel ? 1e-5 : 1e-4;
}

GradCheckReport check_gcnn_gradient(ActivationKind kind, std::uint64_t seed,
                                    const GradCheckOptions& options) {
  const int n = 8;
  const Graph graph = random_graph(n, derive_seed(seed, 1));
  GcnnModel model = random_model(kind, 1, 2, 4, 2, 2, 2, derive_seed(seed, 2));
  const auto ctx = model.context(graph);
  const Objective objective{LossKind::mse, {}};
  Sample sample;
  sample.input = random_features(1, n, derive_seed(seed, 3));
  sample.target = random_features(2, n, derive_seed(seed, 4));
  ParamStore& store = model.params();

  GradCheckProblem problem;
  problem.loss = [&] { return objective.evaluate(model.predict(ctx, sample.input), sample).loss; };
  problem.gradient = [&] {
    std::vector<double> g(store.parameter_count(), 0.0);
    model.loss_and_gradient(ctx, sample, objective, g);
    store.zero_grad();
    store.accumulate_grad(g);
  };
  problem.decision_margin = [&] { return model.forward(ctx, sample.input).tape.decision_margin(); };
  problem.decision_signature = [&] { return model.forward(ctx, sample.input).tape.decision_signature(); };
  problem.resample = [&](std::uint64_t s) { sample.input = random_features(1, n, s); };
  return finite_difference_check(store, problem, derive_seed(seed, 5), options);
}

}  // namespace graphadapt
