#include <gtest/gtest.h>

#include "hfactor/pattern.hpp"
#include "hfactor/rng.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hfactor;
using testing_support::bowtie;
using testing_support::triangle_pendant;
using testing_support::two_edges;

TEST(Pattern, CreateSortsAndValidates) {
  const auto p = PatternGraph::create(2, 3, {{2, 1}, {0, 2}, {1, 0}});
  EXPECT_EQ(p.edges(), (std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_EQ(p, clique_pattern(3));
  EXPECT_EQ(p.edges_within(0b011), 1);
  EXPECT_THROW(PatternGraph::create(2, 3, {{0, 1}, {1, 0}}), Error);
  EXPECT_THROW(PatternGraph::create(2, 3, {{0, 3}}), Error);
  EXPECT_THROW(PatternGraph::create(2, 3, {{0, 0}}), Error);
  EXPECT_THROW(PatternGraph::create(2, 3, {}), Error);
  EXPECT_THROW(PatternGraph::create(3, 3, {{0, 1}}), Error);
  EXPECT_THROW(clique_pattern(13), Error);
}

TEST(Pattern, ParseText) {
  const auto p = parse_pattern("# triangle\ngraph 3\n0 1\n1 2\n0 2\n", "tri");
  EXPECT_EQ(p, clique_pattern(3));
  EXPECT_EQ(p.name(), "tri");
  const auto h = parse_pattern("hypergraph 3 3\n0 1 2\n");
  EXPECT_EQ(h, hyperedge_pattern(3));
  EXPECT_THROW(parse_pattern("0 1\n"), Error);
  EXPECT_THROW(parse_pattern("graph 3\n0 1 2\n"), Error);
  EXPECT_THROW(parse_pattern("graph 3\n0 5\n"), Error);
}

TEST(Pattern, DensityExamples) {
  const auto k3 = density_profile(clique_pattern(3));
  EXPECT_EQ(k3.d, Rational(3, 2));
  EXPECT_EQ(k3.d_star, Rational(3, 2));
  EXPECT_EQ(k3.s, 3);
  for (const auto& pv : k3.per_vertex) {
    EXPECT_EQ(pv.d_star, Rational(3, 2));
    EXPECT_EQ(pv.s, 3);
  }
  EXPECT_EQ(k3.balance, Balance::StrictlyBalanced);

  const auto tp = density_profile(triangle_pendant());
  EXPECT_EQ(tp.d, Rational(4, 3));
  EXPECT_EQ(tp.d_star, Rational(3, 2));
  EXPECT_EQ(tp.balance, Balance::Unbalanced);

  const auto bt = density_profile(bowtie());
  EXPECT_EQ(bt.d, Rational(3, 2));
  EXPECT_EQ(bt.d_star, Rational(3, 2));
  EXPECT_EQ(bt.balance, Balance::BalancedNotStrict);

  const auto te = density_profile(two_edges());
  EXPECT_EQ(te.d, Rational(2, 3));
  EXPECT_EQ(te.d_star, 1);
  EXPECT_EQ(te.balance, Balance::Unbalanced);

  EXPECT_EQ(balance_class(cycle_pattern(4)), Balance::StrictlyBalanced);
  EXPECT_EQ(balance_class(clique_pattern(5)), Balance::StrictlyBalanced);
  EXPECT_EQ(density(hyperedge_pattern(3)), Rational(1, 2));
}

TEST(Pattern, AutomorphismExamples) {
  EXPECT_EQ(automorphism_count(clique_pattern(3)), 6u);
  EXPECT_EQ(automorphism_count(path_pattern(3)), 2u);
  EXPECT_EQ(automorphism_count(hyperedge_pattern(3)), 6u);
  EXPECT_EQ(automorphism_count(cycle_pattern(5)), 10u);
  EXPECT_EQ(automorphism_count(two_edges()), 8u);
  // Vertex 3 isolated.
  EXPECT_EQ(automorphism_count(PatternGraph::create(2, 4, {{0, 1}, {1, 2}})), 2u);
}

namespace {

PatternGraph random_pattern(Rng& rng, int v) {
  std::vector<std::vector<int>> edges;
  for (int a = 0; a < v; ++a) {
    for (int b = a + 1; b < v; ++b) {
      if (rng.bernoulli(0.45)) edges.push_back({a, b});
    }
  }
  if (edges.empty()) edges.push_back({0, 1});
  return PatternGraph::create(2, v, edges);
}

}  // namespace

TEST(PatternProperty, DensityMatchesAllSubgraphOracle) {
  Rng rng(derive_seed(11, 0));
  for (int trial = 0; trial < 150; ++trial) {
    const int v = 2 + static_cast<int>(rng.below(6));
    const auto p = random_pattern(rng, v);
    const auto report = density_profile(p);
    const auto brute = oracle::densities(p);
    ASSERT_EQ(report.d_star, brute.d_star);
    for (int x = 0; x < v; ++x) {
      ASSERT_EQ(report.per_vertex[x].d_star, brute.d_star_at[x]) << "vertex " << x;
      ASSERT_EQ(report.per_vertex[x].s, brute.s_at[x]) << "vertex " << x;
    }
    EXPECT_GE(report.d_star, report.d);
    EXPECT_EQ(report.d_star == report.d, report.balance != Balance::Unbalanced);
    if (report.balance == Balance::StrictlyBalanced) {
      for (const auto& pv : report.per_vertex) {
        EXPECT_EQ(pv.d_star, report.d);
        EXPECT_EQ(pv.s, p.edge_count());
      }
    }
  }
}

TEST(PatternProperty, AutomorphismsMatchPermutationOracle) {
  Rng rng(derive_seed(12, 0));
  for (int trial = 0; trial < 80; ++trial) {
    const int v = 2 + static_cast<int>(rng.below(6));
    const auto p = random_pattern(rng, v);
    const auto aut = automorphism_count(p);
    EXPECT_EQ(aut, oracle::automorphisms(p));
    EXPECT_EQ(factorial(v) % aut, 0);
  }
}
