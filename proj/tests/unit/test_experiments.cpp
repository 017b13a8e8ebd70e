#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "graphadapt/csv.hpp"
#include "graphadapt/datasets.hpp"
#include "graphadapt/error.hpp"
#include "graphadapt/experiment_spec.hpp"
#include "graphadapt/experiments.hpp"
#include "graphadapt/ratings.hpp"

using namespace graphadapt;

TEST(SourceLocalization, DatasetShapeAndLabels) {
  const auto sbm = sbm_generate({40, 4, 0.8, 0.1, 50}, 1);
  const Graph S = normalize_gso(sbm.graph);
  const auto samples = gen_source_localization(S, sbm.community, 2);
  ASSERT_EQ(samples.size(), 1200u);
  for (std::size_t i = 0; i < samples.size(); ++i) EXPECT_EQ(samples[i].label, sbm.community[i / 30]);
  const auto t0 = gen_source_localization(S, sbm.community, 3, 1, 0);
  for (int c = 0; c < 40; ++c) {
    for (int i = 0; i < 40; ++i) EXPECT_EQ(t0[c].input[0][i], i == c ? 1.0 : 0.0);
  }
}

TEST(SourceLocalization, ReadoutIsMaxDegreePerCommunity) {
  // Community 0 = {0, 1, 2}, community 1 = {3, 4, 5}. Degrees: 1 -> 2, 4 -> 3, ties elsewhere.
  const Graph g = Graph::from_edges(6, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}, {1, 4, 1}});
  EXPECT_EQ(community_readout_nodes(g, {0, 0, 0, 1, 1, 1}, 2), (std::vector<int>{1, 4}));
  const Graph p = Graph::from_edges(4, {{0, 1, 1}, {2, 3, 1}, {1, 2, 1}});
  EXPECT_EQ(community_readout_nodes(p, {0, 0, 1, 1}, 2), (std::vector<int>{1, 2}));
}

TEST(Split, SizesAndDisjointness) {
  std::vector<Sample> s(1200);
  for (int i = 0; i < 1200; ++i) s[i].label = i;
  const Dataset d = split_dataset(s, 0.8, 0.1, 5);
  EXPECT_EQ(d.train.size(), 960u);
  EXPECT_EQ(d.validation.size(), 120u);
  EXPECT_EQ(d.test.size(), 120u);
  std::vector<int> seen;
  for (const auto* part : {&d.train, &d.validation, &d.test})
    for (const auto& x : *part) seen.push_back(x.label);
  std::sort(seen.begin(), seen.end());
  std::vector<int> all(1200);
  std::iota(all.begin(), all.end(), 0);
  EXPECT_EQ(seen, all);
}

TEST(Consensus, TargetIsMean) {
  for (const auto& s : gen_consensus(7, 5, 3)) {
    const double mean = std::accumulate(s.input[0].begin(), s.input[0].end(), 0.0) / 7.0;
    for (double v : s.target[0]) EXPECT_EQ(v, mean);
  }
}

TEST(Denoising, NoiseHitsRequestedSnr) {
  const Graph g = normalize_gso(knn_geometric(std::vector<Point2>{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 2}, {3, 1}}, 2));
  const auto clean = gen_smooth_signals(g, 50, 3, 4);
  const auto d = add_noise(clean, 3.0, 5);
  EXPECT_NEAR(d.measured_snr_db, 3.0, 1e-9);
  double ps = 0.0, pn = 0.0;
  for (std::size_t t = 0; t < clean.size(); ++t)
    for (std::size_t i = 0; i < clean[t].size(); ++i) {
      ps += clean[t][i] * clean[t][i];
      pn += (d.noisy[t][i] - clean[t][i]) * (d.noisy[t][i] - clean[t][i]);
    }
  EXPECT_NEAR(pn, ps / std::pow(10.0, 0.3), 1e-9 * ps);
  const auto none = add_noise(clean, std::numeric_limits<double>::infinity(), 5);
  EXPECT_EQ(none.noisy, clean);
}

TEST(Stations, ParsesAndReportsLine) {
  std::istringstream meas("station_id,timestamp,temperature_C\n0,1,10.5\n1,1,11\n0,2,9\n1,2,8.5\n");
  std::istringstream coords("station_id,x,y\n0,0.0,0.0\n1,1.0,2.0\n");
  const auto sd = read_station_data(meas, coords);
  ASSERT_EQ(sd.signals.size(), 2u);
  EXPECT_EQ(sd.signals[0], (Signal{10.5, 11.0}));
  std::istringstream bad("0,1,10\n1,1,abc\n");
  std::istringstream c2("0,0,0\n1,1,1\n");
  try {
    (void)read_station_data(bad, c2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Ratings, ParseAndRejectDuplicates) {
  std::istringstream in("1\t1\t5\t881250949\n1\t2\t3\t881250949\n2\t2\t4\t881250949\n");
  const auto r = read_movielens(in);
  EXPECT_EQ(r.users(), 2);
  EXPECT_EQ(r.movies(), 2);
  EXPECT_EQ(r.nonzeros(), 3u);
  EXPECT_EQ(r.at(1, 1), 4.0);
  std::istringstream dup("1 1 5 0\n1 1 4 0\n");
  EXPECT_THROW(read_movielens(dup), ParseError);
  std::istringstream range("1 1 6 0\n");
  EXPECT_THROW(read_movielens(range), ParseError);
}

TEST(Ratings, SimilarityGraphExcludesUnratedMovies) {
  RatingsMatrix r(4, 3);
  for (int u = 0; u < 4; ++u) {
    r.set(u, 0, 1.0 + u);
    r.set(u, 1, 2.0 + u);
  }
  const auto mg = movie_similarity_graph(r, {0, 1, 2, 3}, 1);
  EXPECT_EQ(mg.movies, (std::vector<int>{0, 1}));
  EXPECT_EQ(mg.excluded, (std::vector<int>{2}));
  EXPECT_EQ(mg.graph.num_edges(), 1u);
  const auto samples = rating_samples(r, mg, 1, {0, 3});
  ASSERT_EQ(samples.size(), 2u);
  EXPECT_EQ(samples[1].input[0], (Signal{4.0, 0.0}));
  EXPECT_EQ(samples[1].target[0][1], 5.0);
}

TEST(Csv, ShortestRoundTripFormatting) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 0.0}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(0.5), "0.5");
  std::ostringstream out;
  write_metrics_csv(out, {});
  EXPECT_EQ(out.str(), std::string(kMetricsHeader) + "\n");
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
}

TEST(Spec, RejectsUnknownKeysAndReportsPosition) {
  EXPECT_THROW(spec_from_json(R"({"experiment":"consensus","bogus":1})"), InvalidArgument);
  EXPECT_THROW(spec_from_json(R"({"experiment":"nope"})"), InvalidArgument);
  try {
    (void)spec_from_json("{\n  \"experiment\": \"consensus\",\n  oops\n}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Spec, JsonRoundTripAndHash) {
  for (const char* name : {"source_loc", "consensus", "regression", "recsys"}) {
    const auto s = default_spec(name);
    const auto back = spec_from_json(spec_to_json(s));
    EXPECT_EQ(spec_to_json(back), spec_to_json(s)) << name;
    EXPECT_EQ(config_hash(back), config_hash(s));
    auto other = s;
    other.seed += 1;
    EXPECT_NE(config_hash(other), config_hash(s));
    other = s;
    other.threads = 4;
    EXPECT_EQ(config_hash(other), config_hash(s));
  }
}

namespace {

ExperimentSpec tiny(const std::string& name) {
  auto s = default_spec(name);
  s.graphs = 1;
  s.splits = 1;
  s.epochs = 2;
  return s;
}

std::string metrics_text(const ExperimentOutput& out) {
  std::ostringstream o;
  write_metrics_csv(o, out.metrics);
  return o.str();
}

}  // namespace

TEST(Experiments, TinyRunsAreDeterministic) {
  for (const char* name : {"source_loc", "consensus", "regression", "recsys"}) {
    auto s = tiny(name);
    if (s.experiment == "source_loc") {
      s.methods = {"relu", "ga_max"};
      s.features = {2};
      s.resolutions = {1};
    }
    if (s.experiment == "consensus") {
      s.nodes = 20;
      s.communities = 2;
      s.samples = 40;
      s.filter_orders = {3};
      s.link_loss = {0.1};
      s.link_loss_draws = 2;
    }
    if (s.experiment == "regression") {
      s.samples = 40;
      s.filter_orders = {1};
    }
    if (s.experiment == "recsys") {
      s.users = 40;
      s.movies = 20;
      s.target_movies = {0};
    }
    const auto a = run_experiment(s);
    const auto b = run_experiment(s);
    EXPECT_FALSE(a.metrics.empty()) << name;
    EXPECT_EQ(metrics_text(a), metrics_text(b)) << name;
  }
}
