#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "oracles.hpp"
#include "sumcol/bench.hpp"
#include "sumcol/memetic.hpp"

using namespace sumcol;

namespace {

Graph edgeless(int n) { return Graph::from_edges(n, std::vector<std::pair<int, int>>{}); }

Coloring col(std::vector<int> colors) { return Coloring(colors); }

MascParams quick() {
  MascParams p;
  p.max_generations = 10;
  p.dnts.p4 = 5'000;
  p.tabucol.iterations_per_k = 20'000;
  return p;
}

}  // namespace

TEST(Alpha, ThresholdsOnVerticesPerColor) {
  EXPECT_EQ(choose_alpha(24, 5), 2);   // 4.8
  EXPECT_EQ(choose_alpha(25, 5), 3);   // 5
  EXPECT_EQ(choose_alpha(75, 5), 3);   // 15
  EXPECT_EQ(choose_alpha(76, 5), 4);   // 15.2
  EXPECT_EQ(choose_alpha(1, 1), 2);
  EXPECT_THROW(choose_alpha(10, 0), std::invalid_argument);
}

TEST(Parents, DistinctAndUniform) {
  Rng rng(41);
  std::vector<int> counts(10, 0);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    auto idx = select_parents(10, 3, rng);
    ASSERT_EQ(idx.size(), 3u);
    std::sort(idx.begin(), idx.end());
    ASSERT_EQ(std::adjacent_find(idx.begin(), idx.end()), idx.end());
    for (int i : idx) ++counts[i];
  }
  const double expected = trials * 3 / 10.0;
  double s = 0;
  for (int c : counts) s += (c - expected) * (c - expected) / expected;
  boost::math::chi_squared dist(9);
  EXPECT_LT(s, boost::math::quantile(boost::math::complement(dist, 0.001)));
  EXPECT_THROW(select_parents(3, 4, rng), std::invalid_argument);
}

TEST(Crossover, HandTracedTwoParents) {
  const Graph g = edgeless(6);
  const std::vector<Coloring> parents{col({1, 1, 1, 1, 2, 3}), col({1, 1, 1, 2, 2, 2})};
  Rng rng(42);
  MgpxTrace trace;
  const Coloring child = mgpx(parents, g, rng, &trace);
  EXPECT_EQ(child.colors(), (std::vector<int>{1, 1, 1, 1, 2, 2}));
  EXPECT_EQ(trace.parent, (std::vector<int>{0, 1}));
  EXPECT_EQ(trace.allowed, (std::vector<int>{2, 1}));
  EXPECT_EQ(trace.transmitted, (std::vector<int>{4, 2}));
}

TEST(Crossover, FourParentsBlockTwoSteps) {
  Rng rng(43);
  const Graph g = oracle::random_graph(40, 0.3, rng);
  std::vector<Coloring> parents;
  for (int i = 0; i < 4; ++i) parents.push_back(oracle::random_proper_coloring(g, 10, rng));
  MgpxTrace trace;
  const Coloring child = mgpx(parents, g, rng, &trace);
  EXPECT_TRUE(is_proper(child, g));
  for (std::size_t s = 1; s < trace.parent.size(); ++s) {
    EXPECT_NE(trace.parent[s], trace.parent[s - 1]);
    if (s >= 2) {
      EXPECT_NE(trace.parent[s], trace.parent[s - 2]);
    }
  }
  int total = 0;
  for (int x : trace.transmitted) total += x;
  EXPECT_EQ(total, g.n());
}

TEST(Crossover, OffspringProperAndComplete) {
  Rng rng(44);
  for (int t = 0; t < 300; ++t) {
    const Graph g = oracle::random_graph(5 + static_cast<int>(rng.below(30)), 0.3, rng);
    const int alpha = 2 + static_cast<int>(rng.below(3));
    std::vector<Coloring> parents;
    for (int i = 0; i < alpha; ++i) parents.push_back(oracle::random_proper_coloring(g, 8, rng));
    MgpxTrace trace;
    const Coloring child = mgpx(parents, g, rng, &trace);
    ASSERT_TRUE(is_proper(child, g));
    ASSERT_TRUE(child.consistent());
    ASSERT_EQ(used_classes(child), child.k());
    for (int a : trace.allowed) ASSERT_GE(a, 1);
  }
}

TEST(Crossover, NeedsTwoParents) {
  const Graph g = edgeless(2);
  const std::vector<Coloring> one{col({1, 2})};
  Rng rng(45);
  EXPECT_THROW(mgpx(one, g, rng), std::invalid_argument);
}

TEST(Score, MatchesFormula) {
  const std::vector<Coloring> set{col({1, 2, 1, 2}), col({1, 2, 2, 1}), col({2, 1, 2, 1})};
  // distances: (0,1)=2, (0,2)=4, (1,2)=2
  const double e = std::exp(0.08 * 4 / 2.0);
  EXPECT_DOUBLE_EQ(score(0, set, 4), 6 + e);
  EXPECT_DOUBLE_EQ(score(1, set, 4), 6 + e);
  EXPECT_DOUBLE_EQ(score(2, set, 4), 6 + e);
  const std::vector<Coloring> dup{col({1, 2}), col({1, 2})};
  EXPECT_TRUE(std::isinf(score(0, dup, 2)));
}

TEST(Update, DuplicateNeverEnters) {
  Population pop;
  pop.members = {col({1, 1, 2}), col({1, 2, 1})};
  Rng rng(46);
  EXPECT_EQ(update_population(pop, col({2, 2, 1}), 1.0, rng), UpdateOutcome::duplicate);
  EXPECT_EQ(pop.members[0], col({1, 1, 2}));
}

TEST(Update, BetterOffspringReplacesWorst) {
  Population pop;
  pop.members = {col({1, 1, 1, 2}), col({1, 2, 3, 4}), col({1, 1, 2, 2})};
  Rng rng(47);
  EXPECT_EQ(update_population(pop, col({1, 1, 2, 1}), 0.0, rng), UpdateOutcome::replaced_worst);
  EXPECT_EQ(pop.size(), 3);
  for (const auto& m : pop.members) EXPECT_NE(m, col({1, 2, 3, 4}));
}

TEST(Update, WorstOffspringKeptAtStatedRate) {
  Population base;
  base.members = {col({1, 1, 1, 1, 2, 2}), col({1, 1, 2, 2, 1, 1}), col({1, 2, 1, 2, 1, 1})};
  const Coloring worst = col({1, 2, 3, 4, 5, 6});
  Rng rng(48);
  const int trials = 10000;
  int kept = 0;
  for (int t = 0; t < trials; ++t) {
    Population pop = base;
    const auto out = update_population(pop, worst, 0.2, rng);
    ASSERT_TRUE(out == UpdateOutcome::replaced_second_worst || out == UpdateOutcome::discarded);
    if (out == UpdateOutcome::replaced_second_worst) {
      ++kept;
      // members 1 and 2 are 2 apart and tie for worst; member 0 is safe
      ASSERT_EQ(pop.members[0], base.members[0]);
      ASSERT_TRUE(pop.members[1] == worst || pop.members[2] == worst);
    } else {
      ASSERT_EQ(pop.members, base.members);
    }
  }
  EXPECT_NEAR(static_cast<double>(kept) / trials, 0.2, 0.04);
}

TEST(Masc, SolvesSmallInstanceAndKeepsPopulationInvariants) {
  const Graph g = load_graph(SUMCOL_INSTANCE_DIR "/myciel3.col");
  Rng rng(49);
  MascOptions opts;
  int generations = 0;
  opts.after_generation = [&](const Population& pop, int) {
    ++generations;
    ASSERT_EQ(pop.size(), 10);
    for (int i = 0; i < pop.size(); ++i) {
      ASSERT_TRUE(is_proper(pop.members[i], g));
      for (int j = 0; j < i; ++j) ASSERT_FALSE(same_partition(pop.members[i], pop.members[j]));
    }
  };
  opts.after_crossover = [&](const Coloring& c) { ASSERT_TRUE(is_proper(c, g)); };
  const MascResult r = masc(g, quick(), rng, opts);
  EXPECT_EQ(r.best_sum, 21);
  EXPECT_EQ(r.best.sum(), 21);
  EXPECT_TRUE(is_proper(r.best, g));
  EXPECT_EQ(generations, 10);
  EXPECT_EQ(r.generations, 10);
}

TEST(Masc, WarmStartNeverLosesTheSeed) {
  const Graph g = load_graph(SUMCOL_INSTANCE_DIR "/queen6_6.col");
  Rng rng(50);
  const MascResult first = masc(g, quick(), rng);
  MascOptions opts;
  opts.seeds.push_back(first.best);
  MascParams p = quick();
  p.max_generations = 1;
  const MascResult again = masc(g, p, rng, opts);
  EXPECT_LE(again.best_sum, first.best_sum);
}

TEST(Masc, FewPartitionsShrinkThePopulation) {
  // the path 0-1-2 has two proper partitions: {0,2}{1} and {0}{1}{2}
  const Graph path = Graph::from_edges(3, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  Rng rng(52);
  const MascResult r = masc(path, quick(), rng);
  EXPECT_EQ(r.population_size, 2);
  EXPECT_EQ(r.best_sum, 4);

  MascParams strict = quick();
  strict.allow_smaller_population = false;
  EXPECT_THROW(masc(path, strict, rng), InitializationError);

  // K2 has a single partition; crossover needs two parents
  const Graph k2 = Graph::from_edges(2, std::vector<std::pair<int, int>>{{0, 1}});
  EXPECT_THROW(masc(k2, quick(), rng), InitializationError);
}

TEST(Masc, Deterministic) {
  const Graph g = load_graph(SUMCOL_INSTANCE_DIR "/queen5_5.col");
  Rng a(51), b(51);
  const auto ra = masc(g, quick(), a);
  const auto rb = masc(g, quick(), b);
  EXPECT_EQ(ra.best, rb.best);
  EXPECT_EQ(ra.iterations, rb.iterations);
}

TEST(Masc, ParamsValidated) {
  MascParams p;
  p.population_size = 1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = MascParams{};
  p.replace_second_worst_probability = 1.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}
