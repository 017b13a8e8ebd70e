#include <benchmark/benchmark.h>

#include <vector>

#include "graphadapt/activations.hpp"
#include "graphadapt/diagnostics.hpp"
#include "graphadapt/distsim.hpp"
#include "graphadapt/filters.hpp"
#include "graphadapt/graph.hpp"
#include "graphadapt/model.hpp"

namespace ga = graphadapt;

namespace {

ga::Graph sbm_graph(int n) {
  ga::SbmParams p;
  p.nodes = n;
  p.communities = 4;
  p.p_intra = 0.8;
  p.p_inter = 0.1;
  return ga::normalize_gso(ga::sbm_generate(p, 11).graph);
}

ga::GcnnConfig two_layer(ga::ActivationKind kind) {
  ga::GcnnConfig c;
  c.input_features = 1;
  const int res = kind == ga::ActivationKind::relu ? 0 : (ga::is_localized(kind) ? 1 : 2);
  c.layers = {{4, 3, kind, res}, {4, 3, kind, res}};
  c.output_features = 1;
  return c;
}

void BM_Shift(benchmark::State& state) {
  const auto g = sbm_graph(static_cast<int>(state.range(0)));
  const auto x = ga::random_features(1, g.num_nodes(), 1)[0];
  std::vector<double> y(x.size());
  for (auto _ : state) {
    g.shift_into(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.num_edges()));
}
BENCHMARK(BM_Shift)->Arg(40)->Arg(100)->Arg(400);

void BM_FilterBank(benchmark::State& state) {
  const auto g = sbm_graph(100);
  const int F = static_cast<int>(state.range(0));
  const auto x = ga::random_features(F, g.num_nodes(), 2);
  ga::FilterBank bank(F, F, 5, std::vector<double>(static_cast<std::size_t>(F * F * 6), 0.1));
  for (auto _ : state) benchmark::DoNotOptimize(ga::filter_bank_apply(g, x, bank));
}
BENCHMARK(BM_FilterBank)->Arg(1)->Arg(4)->Arg(32);

void BM_Activation(benchmark::State& state) {
  const auto kind = static_cast<ga::ActivationKind>(state.range(0));
  const auto g = sbm_graph(100);
  const auto x = ga::random_features(1, g.num_nodes(), 3)[0];
  ga::ActivationParams params;
  params.kind = kind;
  if (kind != ga::ActivationKind::relu) params.h_sigma = {0.5, 0.25};
  const auto hoods = ga::khop_sets(g, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ga::apply_activation(g, x, params, &hoods));
  state.SetLabel(std::string(ga::to_string(kind)));
}
BENCHMARK(BM_Activation)->DenseRange(0, 5);

void BM_ForwardBackward(benchmark::State& state) {
  const auto kind = static_cast<ga::ActivationKind>(state.range(0));
  const auto g = sbm_graph(40);
  const ga::GcnnModel model(two_layer(kind), 5);
  const auto ctx = model.context(g);
  ga::Sample sample;
  sample.input = ga::random_features(1, g.num_nodes(), 4);
  sample.target = ga::random_features(1, g.num_nodes(), 6);
  std::vector<double> grad(model.params().parameter_count());
  const ga::Objective objective{ga::LossKind::mse, {}};
  for (auto _ : state) benchmark::DoNotOptimize(model.loss_and_gradient(ctx, sample, objective, grad));
  state.SetLabel(std::string(ga::to_string(kind)));
}
BENCHMARK(BM_ForwardBackward)->DenseRange(0, 5);

void BM_DistributedForward(benchmark::State& state) {
  const auto g = sbm_graph(40);
  const ga::GcnnModel model(two_layer(ga::ActivationKind::ga_max), 7);
  const auto x = ga::random_features(1, g.num_nodes(), 8);
  for (auto _ : state) benchmark::DoNotOptimize(ga::run_distributed_forward(g, model, x));
}
BENCHMARK(BM_DistributedForward);

}  // namespace

BENCHMARK_MAIN();
