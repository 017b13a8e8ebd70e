#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "../oracles.hpp"
#include "graphadapt/checkpoint.hpp"
#include "graphadapt/diagnostics.hpp"
#include "graphadapt/error.hpp"
#include "graphadapt/model.hpp"
#include "graphadapt/rng.hpp"
#include "graphadapt/training.hpp"

using namespace graphadapt;

namespace {

Graph path3() { return Graph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }

GcnnConfig single_layer(ActivationKind kind, int resolution, int order = 1) {
  GcnnConfig c;
  c.layers = {{1, order, kind, resolution}};
  return c;
}

void set(GcnnModel& m, const std::string& name, std::vector<double> v) {
  m.params().tensor(m.params().index_of(name)).value = std::move(v);
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("graphadapt_test_" + name);
}

}  // namespace

TEST(Forward, IdentityPipelineIsRelu) {
  GcnnModel m(single_layer(ActivationKind::relu, 0, 0), 1);
  set(m, "layer1.taps", {1.0});
  set(m, "readout", {1.0});
  const Graph g = path3();
  EXPECT_EQ(m.predict(GraphContext(g), {{-1.0, 2.0, 0.5}})[0], (Signal{0.0, 2.0, 0.5}));
}

TEST(Forward, ZeroReadoutGivesZeroOutputs) {
  const auto m0 = random_model(ActivationKind::ga_max, 2, 2, 3, 2, 2, 2, 5);
  GcnnModel m = m0;
  auto& r = m.params().tensor(m.readout_tensor()).value;
  std::fill(r.begin(), r.end(), 0.0);
  const Graph g = random_graph(10, 1);
  for (const auto& o : m.predict(m.context(g), random_features(2, 10, 2)))
    for (double v : o) EXPECT_EQ(v, 0.0);
}

TEST(Forward, PathGraphGaMaxComposesOracles) {
  GcnnModel m(single_layer(ActivationKind::ga_max, 1), 1);
  set(m, "layer1.taps", {0.0, 1.0});
  set(m, "layer1.beta", {0.0});
  set(m, "layer1.h_sigma", {1.0});
  set(m, "readout", {1.0});
  const Graph g = path3();
  const auto a = oracle::dense(g);
  const Signal x{0.3, -1.0, 2.0};
  const auto ssx = oracle::matvec(a, oracle::matvec(a, x));
  const Signal y = m.predict(GraphContext(g), {x})[0];
  for (int i = 0; i < 3; ++i) {
    std::vector<double> vals;
    for (int j : oracle::neighbors(a, i)) vals.push_back(ssx[j]);
    EXPECT_EQ(y[i], oracle::max_of(vals));
  }
}

TEST(Config, ValidationErrors) {
  EXPECT_THROW(GcnnModel(single_layer(ActivationKind::relu, 1), 1), InvalidArgument);
  EXPECT_THROW(GcnnModel(single_layer(ActivationKind::ga_max, 0), 1), InvalidArgument);
  GcnnConfig c = single_layer(ActivationKind::relu, 0);
  c.loss = LossKind::cross_entropy;
  c.class_logits = ClassLogits::across_readout;
  c.output_features = 3;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Config, JsonRoundTrip) {
  GcnnConfig c;
  c.input_features = 2;
  c.layers = {{4, 3, ActivationKind::ga_kernel, 2}, {3, 1, ActivationKind::localized_median, 1}};
  c.output_features = 2;
  c.readout_nodes = {0, 5};
  c.loss = LossKind::smooth_l1;
  c.beta_scope = BetaScope::global;
  c.gamma = 0.25;
  c.train.epochs = 7;
  c.train.adam.lr = 0.005;
  const GcnnConfig back = config_from_json(config_to_json(c));
  EXPECT_EQ(back.layers, c.layers);
  EXPECT_EQ(back.readout_nodes, c.readout_nodes);
  EXPECT_EQ(back.beta_scope, c.beta_scope);
  EXPECT_EQ(back.gamma, c.gamma);
  EXPECT_EQ(back.train.adam.lr, c.train.adam.lr);
  EXPECT_EQ(config_to_json(back), config_to_json(c));
}

TEST(ParameterCount, MatchesClosedFormAndIgnoresGraphSize) {
  for (auto kind : all_activation_kinds()) {
    for (auto scope : {BetaScope::per_layer_feature, BetaScope::global}) {
      GcnnConfig c;
      c.input_features = 2;
      const int res = kind == ActivationKind::relu ? 0 : 2;
      c.layers = {{4, 3, kind, res}, {5, 2, kind, res}};
      c.output_features = 3;
      c.beta_scope = scope;
      const GcnnModel m(c, 1);
      std::size_t expect = 4 * 2 * 4 + 5 * 4 * 3 + 3 * 5;
      if (kind != ActivationKind::relu) {
        expect += (4 + 5) * 2;
        expect += scope == BetaScope::global ? 1 : 4 + 5;
      }
      EXPECT_EQ(m.params().parameter_count(), expect);
      EXPECT_EQ(expected_parameter_count(c), expect);
    }
  }
}

TEST(Init, CoefficientsStartAsRelu) {
  GcnnConfig c = single_layer(ActivationKind::ga_median, 3);
  c.layers[0].features = 6;
  const GcnnModel m(c, 9);
  for (int f = 0; f < 6; ++f) {
    const auto p = m.activation(0, f);
    EXPECT_EQ(p.beta, 1.0);
    for (double h : p.h_sigma) EXPECT_EQ(h, 0.0);
  }
  const double bound = 1.0 / std::sqrt(2.0);
  for (double v : m.params().tensor(m.taps_tensor(0)).value) EXPECT_LE(std::abs(v), bound);
}

class Equivariance : public ::testing::TestWithParam<ActivationKind> {};

TEST_P(Equivariance, PermutedGraphPermutesOutput) {
  const auto report = check_equivariance(GetParam(), 4, 5, 21);
  EXPECT_LE(report.max_deviation, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(AllKinds, Equivariance, ::testing::ValuesIn(all_activation_kinds()),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Objective, AcrossReadoutGradientMatchesFiniteDifferences) {
  const Graph g = random_graph(12, 3);
  GcnnConfig c;
  c.layers = {{3, 2, ActivationKind::ga_kernel, 1}};
  c.readout_nodes = {0, 6, 11};
  c.loss = LossKind::cross_entropy;
  c.class_logits = ClassLogits::across_readout;
  c.gamma = 0.5;
  GcnnModel m(c, 4);
  const GraphContext ctx = m.context(g);
  const Sample s{random_features(1, 12, 5), {}, 2};
  std::vector<double> grad(m.params().parameter_count(), 0.0);
  m.loss_and_gradient(ctx, s, c.objective(), grad);
  auto flat = m.params().flat_values();
  for (std::size_t p = 0; p < flat.size(); ++p) {
    const double v = flat[p];
    flat[p] = v + 1e-6;
    m.params().set_flat_values(flat);
    const double lp = c.objective().evaluate(m.predict(ctx, s.input), s).loss;
    flat[p] = v - 1e-6;
    m.params().set_flat_values(flat);
    const double lm = c.objective().evaluate(m.predict(ctx, s.input), s).loss;
    flat[p] = v;
    const double num = (lp - lm) / 2e-6;
    EXPECT_LE(std::abs(num - grad[p]) / std::max({std::abs(num), std::abs(grad[p]), 1e-6}), 1e-5);
  }
}

namespace {

Dataset toy_regression(const Graph& g, int count, std::uint64_t seed) {
  Dataset d;
  const auto xs = random_features(count, g.num_nodes(), seed);
  for (int i = 0; i < count; ++i) {
    Sample s{{xs[i]}, {g.shift(xs[i])}, -1};
    (i % 5 == 0 ? d.validation : d.train).push_back(s);
  }
  return d;
}

}  // namespace

TEST(Training, ZeroLearningRateKeepsParameters) {
  const Graph g = random_graph(10, 1);
  const Dataset d = toy_regression(g, 30, 2);
  GcnnConfig c = single_layer(ActivationKind::ga_max, 1);
  c.train.adam.lr = 0.0;
  c.train.epochs = 3;
  c.train.batch_size = 4;
  GcnnModel m(c, 3);
  const auto before = m.params().flat_values();
  train(m, m.context(g), d, c.objective(), Metric::rmse, c.train);
  EXPECT_EQ(m.params().flat_values(), before);
}

TEST(Training, SingleTapConvergesToLeastSquares) {
  const Graph g = random_graph(8, 4);
  const Signal x = random_features(1, 8, 5)[0];
  const Signal t = random_features(1, 8, 6)[0];
  double xt = 0.0, xx = 0.0;
  for (int i = 0; i < 8; ++i) {
    xt += x[i] * t[i];
    xx += x[i] * x[i];
  }
  FirModel m(0, 7);
  Dataset d;
  d.train = {Sample{{x}, {t}, -1}};
  TrainOptions o;
  o.epochs = 2000;
  o.batch_size = 1;
  o.adam.lr = 1e-2;
  train(m, GraphContext(g), d, Objective{LossKind::mse, {}}, Metric::rmse, o);
  EXPECT_NEAR(m.taps().h[0], xt / xx, 1e-3);
}

TEST(Training, FullBatchEqualsAccumulatedSampleGradients) {
  const Graph g = random_graph(10, 8);
  Dataset d = toy_regression(g, 12, 9);
  GcnnConfig c = single_layer(ActivationKind::ga_median, 2, 2);
  c.train.epochs = 1;
  c.train.batch_size = static_cast<int>(d.train.size());
  GcnnModel trained(c, 10), manual(c, 10);
  train(trained, trained.context(g), d, c.objective(), Metric::rmse, c.train);

  const auto ctx = manual.context(g);
  const std::size_t P = manual.params().parameter_count();
  std::vector<double> total(P, 0.0);
  for (const auto& s : d.train) {
    std::vector<double> gs(P, 0.0);
    manual.loss_and_gradient(ctx, s, c.objective(), gs);
    for (std::size_t p = 0; p < P; ++p) total[p] += gs[p];
  }
  for (auto& v : total) v /= static_cast<double>(d.train.size());
  manual.params().accumulate_grad(total);
  adam_step(manual.params(), c.train.adam);
  // Validation may keep the initial parameters; compare only when the step was kept.
  const auto after = trained.params().flat_values();
  const auto expect = manual.params().flat_values();
  GcnnModel initial(c, 10);
  if (after != initial.params().flat_values()) {
    for (std::size_t p = 0; p < P; ++p) EXPECT_NEAR(after[p], expect[p], 1e-15);
  }
}

TEST(Training, NonFiniteLossAborts) {
  const Graph g = random_graph(6, 1);
  Dataset d;
  Signal bad(6, 1.0);
  bad[2] = std::numeric_limits<double>::infinity();
  d.train = {Sample{{bad}, {Signal(6, 0.0)}, -1}};
  GcnnConfig c = single_layer(ActivationKind::relu, 0);
  c.train.epochs = 1;
  GcnnModel m(c, 2);
  EXPECT_THROW(train(m, m.context(g), d, c.objective(), Metric::rmse, c.train), TrainingError);
}

TEST(Training, LossDecreasesOnLearnableTask) {
  const Graph g = random_graph(10, 11);
  const Dataset d = toy_regression(g, 60, 12);
  GcnnConfig c = single_layer(ActivationKind::ga_max, 1, 2);
  c.train.epochs = 40;
  c.train.batch_size = 8;
  c.train.adam.lr = 1e-2;
  GcnnModel m(c, 13);
  const auto r = train(m, m.context(g), d, c.objective(), Metric::rmse, c.train);
  ASSERT_EQ(r.history.size(), 40u);
  EXPECT_LT(r.history.back().train_loss, r.history.front().train_loss);
}

TEST(Training, DeterministicForSeed) {
  const Graph g = random_graph(10, 14);
  const Dataset d = toy_regression(g, 40, 15);
  GcnnConfig c = single_layer(ActivationKind::ga_kernel, 2, 2);
  c.train.epochs = 5;
  c.train.batch_size = 7;
  GcnnModel a(c, 16), b(c, 16);
  train(a, a.context(g), d, c.objective(), Metric::rmse, c.train);
  c.train.threads = 3;
  train(b, b.context(g), d, c.objective(), Metric::rmse, c.train);
  EXPECT_EQ(a.params().flat_values(), b.params().flat_values());
}

TEST(Evaluate, PerfectPredictorAndEmptySet) {
  const Graph g = random_graph(8, 1);
  FirModel m(1, 1);
  auto& h = m.params().tensor(0).value;
  h = {0.0, 1.0};
  std::vector<Sample> samples;
  for (const auto& x : random_features(5, 8, 2)) samples.push_back({{x}, {g.shift(x)}, -1});
  EXPECT_EQ(evaluate(m, GraphContext(g), samples, Objective{LossKind::mse, {}}, Metric::rmse), 0.0);
  EXPECT_THROW(evaluate(m, GraphContext(g), {}, Objective{LossKind::mse, {}}, Metric::rmse), InvalidArgument);
}

TEST(Evaluate, HandScoredAccuracy) {
  // Identity FIR: logits are the input values.
  const Graph g = Graph::from_edges(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
  FirModel m(0, 1);
  m.params().tensor(0).value = {1.0};
  const Objective across{LossKind::cross_entropy, {0, 2, 3}, ClassLogits::across_readout};
  std::vector<Sample> samples{
      {{{5.0, 0.0, 1.0, 2.0}}, {}, 0},  // argmax over {0,2,3} is class 0: right
      {{{0.0, 9.0, 1.0, 2.0}}, {}, 2},  // class 2: right
      {{{0.0, 0.0, 3.0, 2.0}}, {}, 2},  // class 1: wrong
      {{{0.0, 0.0, 1.0, 1.0}}, {}, 2},  // tie goes to class 1: wrong
  };
  EXPECT_DOUBLE_EQ(evaluate(m, GraphContext(g), samples, across, Metric::accuracy), 0.5);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  const auto m = random_model(ActivationKind::ga_kernel, 2, 2, 3, 2, 2, 2, 17);
  const auto path = temp_file("roundtrip.ckpt");
  save_checkpoint(m, path);
  const GcnnModel back = load_checkpoint(path);
  EXPECT_EQ(back.params().flat_values(), m.params().flat_values());
  EXPECT_EQ(config_to_json(back.config()), config_to_json(m.config()));
  EXPECT_EQ(load_checkpoint_config(path).layers, m.config().layers);
  const Graph g = random_graph(10, 3);
  const auto x = random_features(2, 10, 4);
  EXPECT_EQ(back.predict(back.context(g), x), m.predict(m.context(g), x));
  std::filesystem::remove(path);
}

TEST(Checkpoint, RejectsTruncationAndBadMagic) {
  const auto m = random_model(ActivationKind::relu, 1, 1, 2, 1, 0, 1, 18);
  const auto path = temp_file("trunc.ckpt");
  save_checkpoint(m, path);
  const auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size - 3);
  EXPECT_THROW(load_checkpoint(path), CheckpointError);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "NOTACKPTxxxxxxxxxxxxxxxx";
  }
  EXPECT_THROW(load_checkpoint(path), CheckpointError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_checkpoint(path), CheckpointError);
}
