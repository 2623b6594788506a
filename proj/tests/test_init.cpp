#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sumcol/bench.hpp"
#include "sumcol/init.hpp"

using namespace sumcol;

namespace {

Graph instance(const std::string& name) { return load_graph(SUMCOL_INSTANCE_DIR "/" + name + ".col"); }

TabucolParams quick() {
  TabucolParams p;
  p.iterations_per_k = 20'000;
  return p;
}

}  // namespace

TEST(Greedy, ProperOnRandomGraphs) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const Graph g = oracle::random_graph(1 + static_cast<int>(rng.below(60)), 0.3, rng);
    const Coloring c = greedy_coloring(g);
    EXPECT_TRUE(is_proper(c, g));
    EXPECT_LE(c.k(), g.n());
  }
}

TEST(Tabucol, FindsChromaticColoringOfMycielski3) {
  const Graph g = instance("myciel3");  // chromatic number 4
  Rng rng(2);
  auto c = tabucol(g, 4, quick(), rng);
  ASSERT_TRUE(c.has_value());
  EXPECT_TRUE(is_proper(*c, g));
  EXPECT_EQ(c->k(), 4);
  EXPECT_FALSE(tabucol(g, 3, quick(), rng).has_value());
}

TEST(Tabucol, EdgeNeedsTwoColors) {
  const Graph g = Graph::from_edges(2, std::vector<std::pair<int, int>>{{0, 1}});
  Rng rng(3);
  EXPECT_FALSE(tabucol(g, 1, quick(), rng).has_value());
  EXPECT_TRUE(tabucol(g, 2, quick(), rng).has_value());
}

TEST(Tabucol, RejectsInvalidK) {
  const Graph g = Graph::from_edges(3, std::vector<std::pair<int, int>>{});
  Rng rng(4);
  EXPECT_THROW(tabucol(g, 0, quick(), rng), std::invalid_argument);
  EXPECT_THROW(tabucol(g, 4, quick(), rng), std::invalid_argument);
}

TEST(Descent, ReachesChromaticNumberOfQueen5) {
  const Graph g = instance("queen5_5");  // chromatic number 5
  Rng rng(5);
  const Descent d = descend_k(g, quick(), rng);
  EXPECT_EQ(d.k, 5);
  ASSERT_TRUE(d.coloring.has_value());
  EXPECT_TRUE(is_proper(*d.coloring, g));
}

TEST(Population, DistinctProperAndCanonical) {
  const Graph g = instance("myciel4");
  Rng rng(6);
  const auto pop = generate_population(g, 10, quick(), rng);
  ASSERT_EQ(pop.size(), 10u);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    EXPECT_TRUE(is_proper(pop[i], g));
    EXPECT_EQ(canonical_relabel(pop[i]), pop[i]);
    for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(same_partition(pop[i], pop[j]));
  }
}

TEST(Population, SeedsComeFirst) {
  const Graph g = instance("myciel3");
  Rng rng(7);
  const Coloring seed = canonical_relabel(greedy_coloring(g));
  const auto pop = generate_population(g, 5, quick(), rng, std::span<const Coloring>(&seed, 1));
  ASSERT_EQ(pop.size(), 5u);
  EXPECT_EQ(pop.front(), seed);
}

TEST(Population, TooFewPartitionsIsReported) {
  // K2 has a single proper partition, so three distinct colorings cannot exist
  const Graph g = Graph::from_edges(2, std::vector<std::pair<int, int>>{{0, 1}});
  Rng rng(8);
  try {
    generate_population(g, 3, quick(), rng, {}, "k2");
    FAIL();
  } catch (const InitializationError& e) {
    EXPECT_NE(std::string(e.what()).find("k2"), std::string::npos);
    EXPECT_EQ(e.partial().size(), 1u);
  }
}

TEST(Population, ImproperSeedRejected) {
  const Graph g = Graph::from_edges(2, std::vector<std::pair<int, int>>{{0, 1}});
  Rng rng(9);
  const Coloring bad(std::vector<int>{1, 1});
  EXPECT_THROW(generate_population(g, 2, quick(), rng, std::span<const Coloring>(&bad, 1)),
               InitializationError);
}
