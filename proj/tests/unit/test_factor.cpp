#include <gtest/gtest.h>

#include <cmath>

#include "hfactor/embed.hpp"
#include "hfactor/factor.hpp"
#include "hfactor/rng.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hfactor;
using testing_support::graph;

TEST(Factor, CountExamples) {
  auto c = count_factors(clique_pattern(2), HostGraph::complete(2, 4));
  EXPECT_EQ(c.labeled, 12);
  EXPECT_EQ(c.unlabeled, 3);
  c = count_factors(clique_pattern(3), HostGraph::complete(2, 6));
  EXPECT_EQ(c.labeled, 360);
  EXPECT_EQ(c.unlabeled, 10);
  c = count_factors(clique_pattern(3), HostGraph::complete(2, 9));
  EXPECT_EQ(c.labeled, 60480);
  EXPECT_EQ(c.unlabeled, 280);

  // K6 with every edge at vertex 0 except {0,1}: no triangle through 0.
  auto edges = HostGraph::complete(2, 6).edge_list();
  std::erase_if(edges, [](const auto& e) { return e[0] == 0 && e[1] != 1; });
  c = count_factors(clique_pattern(3), graph(6, edges));
  EXPECT_EQ(c.labeled, 0);
  EXPECT_EQ(c.unlabeled, 0);
  EXPECT_FALSE(has_factor(clique_pattern(3), graph(6, edges)));
  EXPECT_TRUE(has_factor(clique_pattern(3), HostGraph::complete(2, 6)));
}

TEST(Factor, CountErrors) {
  EXPECT_THROW(count_factors(clique_pattern(3), HostGraph::complete(2, 7)), Error);
  EXPECT_THROW(count_factors(clique_pattern(3), HostGraph::complete(2, 18)), Error);
  EXPECT_NO_THROW(count_factors(clique_pattern(3), HostGraph::complete(2, 18), 18));
  EXPECT_THROW(count_factors(clique_pattern(2), HostGraph::complete(3, 4)), Error);
}

TEST(Factor, CompleteGraphFormula) {
  auto c = complete_graph_count(clique_pattern(3), 9);
  EXPECT_EQ(c.labeled, 60480);
  EXPECT_EQ(c.unlabeled, 280);
  EXPECT_EQ(complete_graph_count(clique_pattern(2), 4).labeled, 12);
  EXPECT_EQ(complete_graph_count(cycle_pattern(5), 5).labeled, 120);
  EXPECT_THROW(complete_graph_count(clique_pattern(3), 8), Error);
  for (const auto& p : {clique_pattern(2), clique_pattern(3), path_pattern(3), cycle_pattern(4),
                        testing_support::two_edges(), hyperedge_pattern(3)}) {
    const int v = p.vertex_count();
    for (int n = v; n <= default_factor_cap(v); n += v) {
      const auto formula = complete_graph_count(p, n);
      const auto counted = count_factors(p, HostGraph::complete(p.arity(), n));
      EXPECT_EQ(counted.labeled, formula.labeled) << p.name() << " n=" << n;
      EXPECT_EQ(counted.unlabeled, formula.unlabeled) << p.name() << " n=" << n;
    }
  }
}

TEST(Factor, LargeCountsUseBigIntegers) {
  const auto c = count_factors(clique_pattern(2), HostGraph::complete(2, 24));
  EXPECT_EQ(c.labeled, factorial(24) / factorial(12));
  EXPECT_EQ(c.unlabeled, factorial(24) / (factorial(12) * (BigInt(1) << 12)));
}

TEST(Factor, ExpectedCount) {
  EXPECT_NEAR(expected_factor_count(clique_pattern(2), 8, 0.5), 105.0, 1e-9);
  EXPECT_NEAR(expected_factor_count(clique_pattern(3), 6, 1.0), 360.0, 1e-9);
  EXPECT_EQ(expected_factor_count(clique_pattern(3), 6, 0.0), 0.0);
  EXPECT_NEAR(expected_factor_count(clique_pattern(3), 6, 0.7), 360 * std::pow(0.7, 6), 1e-9);
}

TEST(Factor, EdgeFractionExamples) {
  const std::vector<Vertex> e01{0, 1};
  EXPECT_EQ(edge_fraction(clique_pattern(2), HostGraph::complete(2, 4), e01), Rational(1, 3));
  EXPECT_EQ(edge_fraction(clique_pattern(3), HostGraph::complete(2, 3), e01), 1);
  EXPECT_EQ(edge_fraction(clique_pattern(3), HostGraph::complete(2, 6), e01), Rational(2, 5));
  EXPECT_THROW(edge_fraction(clique_pattern(2), graph(4, {{0, 1}, {1, 2}}), e01), Error);
  const std::vector<Vertex> missing{0, 2};
  EXPECT_THROW(edge_fraction(clique_pattern(2), graph(4, {{0, 1}, {2, 3}}), missing), Error);
}

TEST(Factor, WeightExamples) {
  const std::vector<Vertex> edge{0, 1};
  EXPECT_EQ(weight_w(clique_pattern(2), HostGraph::complete(2, 4), edge), 2);
  const std::vector<Vertex> tri{0, 1, 2};
  EXPECT_EQ(weight_w(clique_pattern(3), HostGraph::complete(2, 6), tri), 6);
  EXPECT_EQ(weight_w(clique_pattern(3), HostGraph::complete(2, 3), tri), 1);
  // |Z| < v: sum over v-sets containing Z. In K4 every pair completes to 2.
  const std::vector<Vertex> single{0};
  EXPECT_EQ(weight_w(clique_pattern(2), HostGraph::complete(2, 4), single), 6);
  const std::vector<Vertex> too_big{0, 1, 2};
  EXPECT_THROW(weight_w(clique_pattern(2), HostGraph::complete(2, 4), too_big), Error);
}

TEST(Factor, BStatisticExamples) {
  auto s = b_statistic(clique_pattern(3), HostGraph::complete(2, 6));
  EXPECT_DOUBLE_EQ(s.maxr, 1.0);
  EXPECT_TRUE(s.property_b(1.0));
  EXPECT_DOUBLE_EQ(b_statistic(clique_pattern(2), HostGraph::complete(2, 4)).maxr, 1.0);

  const auto p4 = graph(4, {{0, 1}, {1, 2}, {2, 3}});
  s = b_statistic(clique_pattern(2), p4);
  ASSERT_EQ(s.weights.size(), 6u);
  std::vector<BigInt> w;
  for (const auto& cw : s.weights) w.push_back(cw.weight);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(w, (std::vector<BigInt>{0, 0, 2, 2, 2, 2}));
  EXPECT_EQ(s.phi, 4);
  EXPECT_DOUBLE_EQ(s.maxr, 1.5);
  EXPECT_FALSE(s.property_b(1.4));
  EXPECT_THROW(b_statistic(clique_pattern(2), graph(4, {{0, 1}, {1, 2}})), Error);
}

TEST(Factor, CStatisticExamples) {
  auto c = c_statistic(clique_pattern(3), HostGraph::complete(2, 6));
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(c.violations, 0u);
  EXPECT_TRUE(c_statistic(clique_pattern(2), HostGraph::complete(2, 4)).holds);

  // Path 0-1-2-3: Y = {1} completes only through x = 0.
  c = c_statistic(clique_pattern(2), graph(4, {{0, 1}, {1, 2}, {2, 3}}));
  EXPECT_FALSE(c.holds);
  EXPECT_GT(c.violations, 0u);
  EXPECT_GT(c.worst_ratio, 1.0);
  EXPECT_EQ(c.worst_max, 2);
  EXPECT_EQ(c.worst_median, 0);
  EXPECT_EQ(c.median_rule, "lower");
}

namespace {

struct Instance {
  PatternGraph pattern;
  HostGraph host;
};

std::vector<Instance> battery(std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<Instance> out;
  const std::vector<PatternGraph> patterns = {clique_pattern(2), clique_pattern(3), path_pattern(3),
                                              testing_support::two_edges(), hyperedge_pattern(3)};
  while (static_cast<int>(out.size()) < count) {
    const auto& p = patterns[rng.below(patterns.size())];
    const int v = p.vertex_count();
    const int max_n = p.arity() == 3 ? 9 : v == 2 ? 10 : v == 3 ? 9 : 8;
    const int n = v * (1 + static_cast<int>(rng.below(max_n / v)));
    const double prob = p.arity() == 3 ? 0.5 + 0.4 * rng.uniform() : 0.4 + 0.5 * rng.uniform();
    out.push_back({p, sample_gnp(p.arity(), n, prob, rng.next())});
  }
  return out;
}

}  // namespace

TEST(FactorProperty, MatchesPartitionOracle) {
  for (const auto& [p, g] : battery(derive_seed(31, 0), 80)) {
    const auto c = count_factors(p, g);
    ASSERT_EQ(c.labeled, oracle::factor_count(p, g)) << p.name() << " n=" << g.vertex_count();
    const BigInt aut_power = pow(BigInt(automorphism_count(p)), g.vertex_count() / p.vertex_count());
    EXPECT_EQ(c.labeled % aut_power, 0);
    EXPECT_EQ(c.unlabeled * aut_power, c.labeled);
    EXPECT_EQ(has_factor(p, g), c.labeled > 0);
  }
}

TEST(FactorProperty, PartitionOracleAtTheCaps) {
  const auto g2 = sample_gnp(2, 12, 0.5, 7);
  EXPECT_EQ(count_factors(clique_pattern(2), g2).labeled, oracle::factor_count(clique_pattern(2), g2));
  const auto g3 = sample_gnp(2, 9, 0.7, 8);
  EXPECT_EQ(count_factors(clique_pattern(3), g3).labeled, oracle::factor_count(clique_pattern(3), g3));
}

TEST(FactorProperty, EdgeFractionsAndSums) {
  for (const auto& [p, g] : battery(derive_seed(32, 0), 40)) {
    const auto phi = count_factors(p, g).labeled;
    if (phi == 0) continue;
    Rational sum = 0;
    for (const auto& e : g.edge_list()) {
      const auto xi = edge_fraction(p, g, e);
      ASSERT_EQ(xi, Rational(oracle::factors_using_edge(p, g, e), phi));
      const auto without = count_factors(p, g.without_edge(e)).labeled;
      EXPECT_LE(without, phi);
      sum += xi;
    }
    const int n = g.vertex_count();
    EXPECT_EQ(sum, Rational(p.edge_count() * n, p.vertex_count()));
  }
}

TEST(FactorProperty, WeightsSumToFactorsTimesCopies) {
  for (const auto& [p, g] : battery(derive_seed(33, 0), 40)) {
    FactorCounter counter(p, g);
    if (counter.total() == 0 || enumerate_copies(p, g).empty()) continue;
    const auto stats = b_statistic(counter);
    BigInt sum = 0;
    for (const auto& cw : stats.weights) {
      sum += cw.weight;
      EXPECT_EQ(cw.weight, weight_w(p, g, cw.copy.mapping));
    }
    EXPECT_EQ(sum, stats.phi * (g.vertex_count() / p.vertex_count()));
    EXPECT_GE(stats.maxr, 1.0);
  }
}
