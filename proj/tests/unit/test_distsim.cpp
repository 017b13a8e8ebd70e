#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "graphadapt/diagnostics.hpp"
#include "graphadapt/distsim.hpp"
#include "graphadapt/error.hpp"

using namespace graphadapt;

TEST(RoundCount, HandExamples) {
  GcnnConfig c;
  c.layers = {{2, 3, ActivationKind::ga_max, 2}};
  EXPECT_EQ(round_count(c), 3u * 1 + 3u * 2);
  c.layers = {{2, 3, ActivationKind::ga_max, 2}, {4, 1, ActivationKind::relu, 0}};
  EXPECT_EQ(round_count(c), 9u + 1u * 2);
  c.layers = {{3, 2, ActivationKind::localized_median, 1}};
  EXPECT_EQ(round_count(c), 2u + 3u);
  const Graph g = Graph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  EXPECT_EQ(message_count(c, g), 5u * 4);
}

TEST(Distributed, MatchesCentralizedForEveryKind) {
  for (auto kind : all_activation_kinds()) {
    const int res = kind == ActivationKind::relu ? 0 : (kind == ActivationKind::localized_max ||
                                                        kind == ActivationKind::localized_median)
                                                           ? 1
                                                           : 2;
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto m = random_model(kind, 2, 2, 3, 2, res, 2, 40 + s);
      const Graph g = random_graph(10, 50 + s);
      const auto x = random_features(2, 10, 60 + s);
      const auto dist = run_distributed_forward(g, m, x);
      EXPECT_LE(max_abs_diff(dist.outputs, m.predict(m.context(g), x)), 1e-9) << to_string(kind);
      EXPECT_EQ(dist.log.rounds.size(), round_count(m.config()));
      EXPECT_EQ(dist.log.total_messages(), message_count(m.config(), g));
      EXPECT_EQ(dist.log.total_payload(), dist.log.total_messages());
      for (const auto& r : dist.log.rounds) EXPECT_EQ(r.messages, 2 * g.num_edges());
    }
  }
}

TEST(Distributed, RejectsMultiHopLocalizedLayer) {
  GcnnConfig c;
  c.layers = {{2, 1, ActivationKind::ga_max, 1}, {2, 1, ActivationKind::localized_max, 2}};
  try {
    check_distributable(c);
    FAIL() << "expected NotDistributable";
  } catch (const NotDistributable& e) {
    EXPECT_NE(std::string(e.what()).find("layer 2"), std::string::npos) << e.what();
  }
  c.layers[1].resolution = 1;
  EXPECT_NO_THROW(check_distributable(c));
}

TEST(Distributed, MessageLogCsv) {
  MessageLog log;
  log.rounds = {{1, 4, 4}, {2, 4, 4}};
  std::ostringstream out;
  log.write_csv(out);
  EXPECT_EQ(out.str(), "round,messages,payload_scalars\n1,4,4\n2,4,4\n");
}

TEST(Distributed, RandomizedSuite) {
  const auto r = check_distributed(4, 3, 7);
  EXPECT_LE(r.max_deviation, 1e-9);
  EXPECT_TRUE(r.counts_match);
  EXPECT_TRUE(r.rejects_nonlocal);
}
