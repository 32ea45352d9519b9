#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "hfactor/edge_list.hpp"
#include "hfactor/host.hpp"
#include "hfactor/rng.hpp"
#include "support.hpp"

using namespace hfactor;

TEST(Host, RankRoundTrip) {
  EXPECT_EQ(edge_universe_size(2, 5), 10u);
  EXPECT_EQ(edge_universe_size(3, 6), 20u);
  for (int k = 2; k <= 4; ++k) {
    const auto total = edge_universe_size(k, 9);
    for (std::uint64_t r = 0; r < total; ++r) {
      const auto e = unrank_edge(r, k);
      ASSERT_TRUE(std::is_sorted(e.begin(), e.end()));
      ASSERT_LT(e.back(), 9u);
      ASSERT_EQ(rank_edge(e), r);
    }
  }
}

TEST(Host, BuildAndQuery) {
  const auto g = testing_support::graph(4, {{2, 1}, {0, 1}, {3, 2}});
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_TRUE(g.adjacent(1, 2));
  EXPECT_TRUE(g.adjacent(2, 1));
  EXPECT_FALSE(g.adjacent(0, 3));
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_EQ(g.degree(0), 1u);
  const std::vector<Vertex> e{3, 2};
  EXPECT_TRUE(g.has_edge(e));
  const auto h = g.without_edge(e);
  EXPECT_EQ(h.edge_count(), 2u);
  EXPECT_FALSE(h.has_edge(e));
  EXPECT_EQ(h.degree(3), 0u);
  EXPECT_EQ(h, testing_support::graph(4, {{0, 1}, {1, 2}}));
  EXPECT_THROW(testing_support::graph(4, {{0, 1}, {1, 0}}), Error);
  EXPECT_THROW(testing_support::graph(4, {{0, 4}}), Error);
  EXPECT_THROW(testing_support::graph(4, {{1, 1}}), Error);
  EXPECT_THROW(HostGraph(2, kMaxHostVertices + 1), Error);
}

TEST(Host, IncidenceConsistentWithRebuild) {
  const auto g = sample_gnp(3, 9, 0.4, 5);
  const auto rebuilt = HostGraph::from_edges(3, 9, g.edge_list());
  EXPECT_EQ(g, rebuilt);
  for (Vertex x = 0; x < 9; ++x) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      const auto e = g.edge(i);
      count += std::find(e.begin(), e.end(), x) != e.end();
    }
    EXPECT_EQ(g.degree(x), count);
    for (auto i : g.incident(x)) {
      const auto e = g.edge(i);
      EXPECT_NE(std::find(e.begin(), e.end(), x), e.end());
    }
  }
}

TEST(Host, ParseEdgeList) {
  const auto g = parse_host("# four-cycle\ngraph 4\n0 1\n1 2\n2 3\n3 0\n");
  EXPECT_EQ(g.edge_count(), 4u);
  EXPECT_EQ(g.vertex_count(), 4);
  const auto h = parse_host("hypergraph 3 5\n0 1 2\n2 3 4\n");
  EXPECT_EQ(h.arity(), 3);
  EXPECT_EQ(h.edge_count(), 2u);
  EXPECT_THROW(parse_host("graph 3\n0 1\n0 1\n"), Error);
  EXPECT_THROW(parse_host("graph 3\n0 1 2\n"), Error);
  EXPECT_THROW(parse_host("graph 3\n0 3\n"), Error);
  const auto file = parse_edge_list("graph 3\n1 2\n0 1\n");
  const auto text = format_edge_list(file.arity, file.vertex_count, file.edges);
  EXPECT_EQ(parse_host(text), testing_support::graph(3, {{0, 1}, {1, 2}}));
}

TEST(Host, SamplingExamples) {
  EXPECT_EQ(sample_gnp(2, 3, 1.0, 9), HostGraph::complete(2, 3));
  EXPECT_EQ(sample_gnp(2, 5, 0.0, 9).edge_count(), 0u);
  EXPECT_EQ(sample_gnp(3, 4, 1.0, 9).edge_count(), 4u);
  EXPECT_EQ(sample_gnm(2, 4, 6, 3), HostGraph::complete(2, 4));
  EXPECT_EQ(sample_gnm(2, 10, 0, 3).edge_count(), 0u);
  EXPECT_EQ(sample_gnm(2, 6, 7, 3).edge_count(), 7u);
  EXPECT_THROW(sample_gnm(2, 4, 7, 3), Error);
  EXPECT_THROW(sample_gnp(2, 4, 1.5, 3), Error);
}

TEST(Host, SamplingIsDeterministic) {
  EXPECT_EQ(sample_gnp(2, 50, 0.2, 77), sample_gnp(2, 50, 0.2, 77));
  EXPECT_NE(sample_gnp(2, 50, 0.2, 77), sample_gnp(2, 50, 0.2, 78));
  EXPECT_EQ(sample_gnm(3, 12, 40, 5), sample_gnm(3, 12, 40, 5));
  EXPECT_EQ(random_ordering(2, 8, 4).ranks, random_ordering(2, 8, 4).ranks);
}

TEST(Host, OrderingIsPermutation) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (int k : {2, 3}) {
      auto o = random_ordering(k, 7, seed);
      auto ranks = o.ranks;
      std::sort(ranks.begin(), ranks.end());
      ASSERT_EQ(ranks.size(), edge_universe_size(k, 7));
      for (std::size_t i = 0; i < ranks.size(); ++i) ASSERT_EQ(ranks[i], i);
    }
  }
  const auto k3 = random_ordering(2, 3, 1);
  std::vector<std::vector<Vertex>> edges;
  for (std::size_t i = 0; i < 3; ++i) edges.push_back(k3.edge(i));
  std::sort(edges.begin(), edges.end());
  EXPECT_EQ(edges, (std::vector<std::vector<Vertex>>{{0, 1}, {0, 2}, {1, 2}}));
}

TEST(HostProperty, GnpEdgeCountMean) {
  for (auto [k, n, p] : {std::tuple{2, 30, 0.1}, std::tuple{2, 12, 0.5}, std::tuple{3, 10, 0.2}}) {
    const double universe = static_cast<double>(edge_universe_size(k, n));
    const int trials = 2000;
    double sum = 0;
    for (int t = 0; t < trials; ++t) sum += sample_gnp(k, n, p, derive_seed(99, t)).edge_count();
    const double mean = sum / trials;
    const double se = std::sqrt(universe * p * (1 - p) / trials);
    EXPECT_LT(std::abs(mean - universe * p), 4 * se) << "k=" << k << " n=" << n;
  }
}

TEST(HostProperty, GnmIsUniformOnSmallUniverse) {
  // C(4,2) = 6 edges, M = 2: each of the 15 pairs should appear ~ trials/15 times.
  std::vector<int> counts(64, 0);
  const int trials = 15000;
  for (int t = 0; t < trials; ++t) {
    const auto g = sample_gnm(2, 4, 2, derive_seed(3, t));
    int key = 0;
    for (auto r : g.edge_ranks()) key |= 1 << r;
    ++counts[key];
  }
  int distinct = 0;
  for (int c : counts) {
    if (c == 0) continue;
    ++distinct;
    EXPECT_NEAR(c, trials / 15.0, 4 * std::sqrt(trials / 15.0));
  }
  EXPECT_EQ(distinct, 15);
}

TEST(Rng, SeedDerivationSeparatesStreams) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next(), b.next());
  Rng r(6);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(r.below(7), 7u);
  }
}
