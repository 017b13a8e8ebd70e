#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "../oracles.hpp"
#include "graphadapt/error.hpp"
#include "graphadapt/graph.hpp"
#include "graphadapt/graph_io.hpp"
#include "graphadapt/rng.hpp"

using namespace graphadapt;

namespace {

Graph path3() { return Graph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }

Graph complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j, 1.0});
  return Graph::from_edges(n, e);
}

Graph random_weighted(int n, double p, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (u(rng) < p) e.push_back({i, j, 0.1 + u(rng)});
  return Graph::from_edges(n, e);
}

}  // namespace

TEST(Graph, RejectsSelfLoopsAndDuplicates) {
  EXPECT_THROW(Graph::from_edges(3, {{1, 1, 1.0}}), InvalidArgument);
  EXPECT_THROW(Graph::from_edges(3, {{0, 1, 1.0}, {1, 0, 1.0}}), InvalidArgument);
  EXPECT_THROW(Graph::from_edges(3, {{0, 3, 1.0}}), InvalidArgument);
}

TEST(Graph, NeighborListsMatchEdgesAndGsoIsSymmetric) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Graph g = random_weighted(12, 0.3, s);
    const auto a = oracle::dense(g);
    for (int i = 0; i < g.num_nodes(); ++i) {
      EXPECT_EQ(std::vector<int>(g.neighbors(i).begin(), g.neighbors(i).end()), oracle::neighbors(a, i));
      for (int j = 0; j < g.num_nodes(); ++j) {
        EXPECT_EQ(g.gso().at(i, j), g.gso().at(j, i));
        EXPECT_EQ(g.gso().at(i, j), a[i][j]);
      }
      EXPECT_EQ(g.gso().at(i, i), 0.0);
    }
  }
}

TEST(Graph, ShiftOfPath) {
  const Graph g = path3();
  EXPECT_EQ(g.shift(std::vector<double>{1, 2, 3}), (Signal{2, 4, 2}));
  EXPECT_EQ(g.shift(std::vector<double>{0, 0, 0}), (Signal{0, 0, 0}));
  EXPECT_THROW(g.shift(std::vector<double>{1, 2}), InvalidArgument);
}

TEST(Graph, ShiftOfOnesIsWeightedDegree) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Graph g = random_weighted(15, 0.4, 100 + s);
    const auto a = oracle::dense(g);
    const Signal ones(15, 1.0);
    const Signal y = g.shift(ones);
    const auto ref = oracle::matvec(a, ones);
    for (int i = 0; i < 15; ++i) EXPECT_EQ(y[i], ref[i]);
  }
}

TEST(Sbm, FortyNodesFourBlocks) {
  const auto sbm = sbm_generate({40, 4, 0.8, 0.1, 50}, 3);
  EXPECT_EQ(sbm.graph.num_nodes(), 40);
  EXPECT_TRUE(sbm.graph.is_connected());
  for (int i = 0; i < 40; ++i) EXPECT_EQ(sbm.community[i], i / 10);
}

TEST(Sbm, TwoSeparatedCliquesFail) {
  EXPECT_THROW(sbm_generate({4, 2, 1.0, 0.0, 50}, 1), GenerationFailure);
}

TEST(Sbm, AllOnesGivesCompleteGraph) {
  const auto sbm = sbm_generate({6, 2, 1.0, 1.0, 50}, 1);
  EXPECT_EQ(sbm.graph.num_edges(), 15u);
}

TEST(Sbm, RejectsBadParameters) {
  EXPECT_THROW(sbm_generate({10, 3, 0.8, 0.1, 50}, 1), InvalidArgument);
  EXPECT_THROW(sbm_generate({10, 2, 0.1, 0.8, 50}, 1), InvalidArgument);
}

TEST(Sbm, DeterministicForSeed) {
  EXPECT_EQ(sbm_generate({20, 2, 0.5, 0.1, 50}, 9).graph, sbm_generate({20, 2, 0.5, 0.1, 50}, 9).graph);
}

TEST(Knn, CollinearPointsGivePath) {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {2, 0}};
  const Graph g = knn_geometric(pts, 1);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.degree(1), 2);
}

TEST(Knn, SquareEveryNodeHasANeighbor) {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const Graph g = knn_geometric(pts, 1);
  for (int i = 0; i < 4; ++i) EXPECT_GE(g.degree(i), 1);
}

TEST(Knn, FullNeighborhoodIsComplete) {
  const std::vector<Point2> pts{{0, 0}, {3, 1}, {2, 5}, {-1, 2}, {4, 4}};
  EXPECT_EQ(knn_geometric(pts, 4).num_edges(), 10u);
  EXPECT_THROW(knn_geometric(pts, 5), InvalidArgument);
}

TEST(Knn, GaussianWeightsUseMeanSquaredEdgeLength) {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {3, 0}};
  const Graph g = knn_geometric(pts, 1);
  // Edges (0,1) length 1 and (1,2) length 2: sigma^2 = (1 + 4) / 2.
  EXPECT_NEAR(g.gso().at(0, 1), std::exp(-1.0 / 2.5), 1e-15);
  EXPECT_NEAR(g.gso().at(1, 2), std::exp(-4.0 / 2.5), 1e-15);
}

TEST(Knn, DuplicatePointsGetUnitWeight) {
  const std::vector<Point2> pts{{0, 0}, {0, 0}, {5, 5}};
  const Graph g = knn_geometric(pts, 1);
  EXPECT_DOUBLE_EQ(g.gso().at(0, 1), 1.0);
}

TEST(Normalize, KnownSpectra) {
  const Graph k2 = normalize_gso(complete(2));
  EXPECT_NEAR(k2.gso().at(0, 1), 1.0, 1e-12);
  const Graph k3 = normalize_gso(complete(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) EXPECT_NEAR(k3.gso().at(i, j), 0.5, 1e-10);
  const Graph star = normalize_gso(Graph::from_edges(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}));
  EXPECT_NEAR(star.gso().at(0, 1), 1.0 / std::sqrt(3.0), 1e-10);
}

TEST(Normalize, UnitSpectralRadiusAgainstJacobi) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Graph g = random_weighted(10, 0.5, 200 + s);
    if (g.num_edges() == 0) continue;
    const Graph n = normalize_gso(g);
    EXPECT_NEAR(oracle::spectral_radius(oracle::dense(n)), 1.0, 1e-8);
    EXPECT_NEAR(spectral_radius(n).spectral_radius, 1.0, 1e-6);
  }
}

TEST(Normalize, BipartiteGraphConverges) {
  const Graph path = Graph::from_edges(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  EXPECT_NEAR(spectral_radius(path).spectral_radius, golden, 1e-8);
}

TEST(Normalize, EmptyGraphRejected) {
  EXPECT_THROW(normalize_gso(Graph::from_edges(3, {})), InvalidArgument);
}

TEST(Permutation, RejectsNonBijection) {
  EXPECT_THROW(Permutation({0, 0, 1}), InvalidArgument);
  EXPECT_THROW(Permutation({0, 3, 1}), InvalidArgument);
}

TEST(Permutation, MatchesMatrixConjugation) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Graph g = random_weighted(9, 0.4, 300 + s);
    const Permutation p = Permutation::random(9, s);
    const Graph h = permute(g, p);
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) EXPECT_EQ(h.gso().at(i, j), g.gso().at(p[i], p[j]));
    Signal x(9);
    for (int i = 0; i < 9; ++i) x[i] = i * 1.5;
    const Signal px = permute_signal(x, p);
    for (int i = 0; i < 9; ++i) EXPECT_EQ(px[i], x[p[i]]);
  }
}

TEST(Permutation, RoundTripIsExact) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Graph g = random_weighted(11, 0.4, 400 + s);
    const Permutation p = Permutation::random(11, s);
    EXPECT_EQ(permute(permute(g, p), p.inverse()), g);
    EXPECT_EQ(permute(g, Permutation::identity(11)), g);
  }
}

TEST(Permutation, ReversedPathKeepsDegrees) {
  const Graph h = permute(path3(), Permutation({2, 1, 0}));
  EXPECT_EQ(h.degree(1), 2);
  EXPECT_EQ(h.degree(0), 1);
}

TEST(LinkLoss, ZeroProbabilityKeepsGraph) {
  const Graph g = random_weighted(10, 0.5, 7);
  EXPECT_EQ(sample_link_loss(g, 0.0, 1), g);
  EXPECT_THROW(sample_link_loss(g, 1.0, 1), InvalidArgument);
}

TEST(LinkLoss, SurvivorsAreSubsetWithSameWeights) {
  const Graph g = random_weighted(15, 0.5, 8);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Graph h = sample_link_loss(g, 0.3, s);
    for (const auto& e : h.edges()) {
      EXPECT_TRUE(g.has_edge(e.u, e.v));
      EXPECT_EQ(e.weight, g.gso().at(e.u, e.v));
    }
  }
}

TEST(LinkLoss, SurvivalCountIsBinomial) {
  // 100-edge graph, p = 0.1, 1000 draws: mean within 3 sigma of 90.
  std::vector<Edge> e;
  for (int i = 0; i < 100; ++i) e.push_back({2 * i, 2 * i + 1, 1.0});
  const Graph g = Graph::from_edges(200, e);
  double total = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) total += static_cast<double>(sample_link_loss(g, 0.1, s).num_edges());
  const double mean = total / 1000.0;
  const double sigma_of_mean = std::sqrt(100 * 0.1 * 0.9 / 1000.0);
  EXPECT_NEAR(mean, 90.0, 3 * sigma_of_mean);
}

TEST(LinkLoss, DeterministicSingleEdge) {
  const Graph g = Graph::from_edges(2, {{0, 1, 1.0}});
  EXPECT_EQ(sample_link_loss(g, 0.5, 42), sample_link_loss(g, 0.5, 42));
}

TEST(InfNorm, MatchesDensePowers) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Graph g = normalize_gso(random_weighted(10, 0.5, 500 + s));
    const auto a = oracle::dense(g);
    for (int K = 1; K <= 4; ++K) {
      double ref = 0.0;
      for (int k = 1; k <= K; ++k) ref = std::max(ref, oracle::inf_norm(oracle::power(a, k)));
      EXPECT_NEAR(inf_norm_max_power(g, K), ref, 1e-12);
      EXPECT_GE(inf_norm_max_power(g, K), 1.0 - 1e-9);
    }
  }
}

TEST(InfNorm, NormalizedTriangle) {
  EXPECT_NEAR(inf_norm_max_power(normalize_gso(complete(3)), 2), 1.0, 1e-10);
}

TEST(EdgeListIo, RoundTripIsBitExact) {
  const Graph g = normalize_gso(random_weighted(12, 0.4, 9));
  std::stringstream ss;
  write_edge_list(ss, g);
  EXPECT_EQ(read_edge_list(ss), g);
}

TEST(EdgeListIo, ReportsLineOfBadRecord) {
  std::stringstream ss("3 2\n0 1 1.0\n0 x 1.0\n");
  try {
    (void)read_edge_list(ss);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(CoordinatesIo, ReadsPermutedIds) {
  std::stringstream ss("1 2.0 3.0\n0 -1 0.5\n");
  const auto pts = read_coordinates(ss);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].x, -1.0);
  EXPECT_EQ(pts[1].y, 3.0);
}
