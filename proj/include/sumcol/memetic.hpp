#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumcol/coloring.hpp"
#include "sumcol/dnts.hpp"
#include "sumcol/graph.hpp"
#include "sumcol/init.hpp"
#include "sumcol/rng.hpp"

namespace sumcol {

struct MascParams {
  int population_size = 10;
  int max_generations = 50;
  DntsParams dnts;
  TabucolParams tabucol;
  double replace_second_worst_probability = 0.2;
  /// Run with fewer members (at least 2) when initialization cannot find
  /// population_size distinct colorings, as on graphs with very few proper
  /// partitions. Off: the initialization error propagates.
  bool allow_smaller_population = true;

  void validate() const {
    if (population_size < 2) throw std::invalid_argument("population size must be at least 2");
    if (max_generations < 1) throw std::invalid_argument("max_generations must be at least 1");
    if (!(replace_second_worst_probability >= 0.0 && replace_second_worst_probability <= 1.0))
      throw std::invalid_argument("replacement probability must lie in [0, 1]");
    dnts.validate();
    tabucol.validate();
  }
};

/// Population members plus the best coloring seen so far.
struct Population {
  std::vector<Coloring> members;
  Coloring best;
  std::int64_t best_sum = std::numeric_limits<std::int64_t>::max();

  int size() const { return static_cast<int>(members.size()); }

  /// Smallest class count among the members.
  int min_k() const {
    int k = std::numeric_limits<int>::max();
    for (const auto& m : members) k = std::min(k, m.k());
    return k;
  }
};

/// Number of crossover parents for n vertices and a best known k:
/// 2 below 5 vertices per color, 3 up to 15, 4 above.
inline int choose_alpha(int n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("choose_alpha: n and k must be positive");
  const double ratio = static_cast<double>(n) / static_cast<double>(k);
  if (ratio < 5.0) return 2;
  if (ratio <= 15.0) return 3;
  return 4;
}

/// alpha distinct member indices, uniformly without replacement.
inline std::vector<int> select_parents(int population_size, int alpha, Rng& rng) {
  if (alpha < 1 || alpha > population_size)
    throw std::invalid_argument("select_parents: alpha must be in 1..p");
  std::vector<int> idx(static_cast<std::size_t>(population_size));
  for (int i = 0; i < population_size; ++i) idx[i] = i;
  for (int t = 0; t < alpha; ++t)
    std::swap(idx[t], idx[t + rng.below(static_cast<std::uint64_t>(population_size - t))]);
  idx.resize(static_cast<std::size_t>(alpha));
  return idx;
}

/// Per-step record of a crossover, for inspection in tests.
struct MgpxTrace {
  std::vector<int> parent;          // parent that donated color kappa (index into parents)
  std::vector<int> allowed;         // |P_kappa| at that step
  std::vector<int> transmitted;     // vertices given color kappa
};

/// Multi-parent greedy partition crossover. Colors kappa = 1, 2, ... each
/// take a largest residual class among the parents not used in the last
/// floor(alpha/2) steps (ties uniformly at random); its vertices leave
/// every parent. The result is canonicalized.
inline Coloring mgpx(std::span<const Coloring* const> parents, const Graph& g, Rng& rng,
                     MgpxTrace* trace = nullptr) {
  const int alpha = static_cast<int>(parents.size());
  if (alpha < 2) throw std::invalid_argument("mgpx needs at least two parents");
  const int n = g.n();
  for (const Coloring* p : parents)
    if (p->n() != n) throw std::invalid_argument("mgpx: parent does not match graph");

  std::vector<std::vector<int>> residual(parents.size());
  for (std::size_t j = 0; j < parents.size(); ++j) {
    residual[j].resize(static_cast<std::size_t>(parents[j]->k()));
    for (int c = 0; c < parents[j]->k(); ++c) residual[j][c] = parents[j]->class_size(c);
  }
  std::vector<int> offspring(static_cast<std::size_t>(n), 0);
  std::vector<int> forbidden_until(parents.size(), 0);  // phi_j
  int colored = 0;

  for (int kappa = 1; colored < n; ++kappa) {
    int best_parent = -1, best_class = -1, best_size = 0, allowed = 0;
    std::uint64_t ties = 0;
    for (int j = 0; j < alpha; ++j) {
      if (forbidden_until[j] >= kappa) continue;
      ++allowed;
      for (int c = 0; c < static_cast<int>(residual[j].size()); ++c) {
        const int s = residual[j][c];
        if (s == 0 || s < best_size) continue;
        if (s > best_size) {
          best_size = s, best_parent = j, best_class = c, ties = 1;
        } else if (rng.below(++ties) == 0) {
          best_parent = j, best_class = c;
        }
      }
    }
    if (allowed == 0 || best_parent < 0)
      throw std::logic_error("mgpx: no allowed parent with a residual class");

    if (trace) {
      trace->parent.push_back(best_parent);
      trace->allowed.push_back(allowed);
      trace->transmitted.push_back(best_size);
    }
    for (int v : parents[best_parent]->members(best_class)) {
      if (offspring[v] != 0) continue;
      offspring[v] = kappa;
      ++colored;
      for (int j = 0; j < alpha; ++j) --residual[j][parents[j]->class_of(v)];
    }
    forbidden_until[best_parent] = kappa + alpha / 2;
  }
  return canonical_relabel(Coloring(offspring));
}

inline Coloring mgpx(std::span<const Coloring> parents, const Graph& g, Rng& rng,
                     MgpxTrace* trace = nullptr) {
  std::vector<const Coloring*> ptrs;
  for (const auto& p : parents) ptrs.push_back(&p);
  return mgpx(std::span<const Coloring* const>(ptrs), g, rng, trace);
}

/// Quality-diversity score s = f + exp(0.08 n / H), with H the distance to
/// the nearest other coloring in the set; +inf for an exact duplicate.
/// Larger is worse.
inline double score(int i, std::span<const Coloring* const> set, int n) {
  int nearest = std::numeric_limits<int>::max();
  for (int j = 0; j < static_cast<int>(set.size()); ++j)
    if (j != i) nearest = std::min(nearest, distance(*set[i], *set[j]));
  if (nearest == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(set[i]->sum()) +
         std::exp(0.08 * static_cast<double>(n) / static_cast<double>(nearest));
}

inline double score(int i, std::span<const Coloring> set, int n) {
  std::vector<const Coloring*> ptrs;
  for (const auto& c : set) ptrs.push_back(&c);
  return score(i, std::span<const Coloring* const>(ptrs), n);
}

enum class UpdateOutcome {
  replaced_worst,         // the offspring was not the worst: the worst member left
  replaced_second_worst,  // the offspring was worst but kept by the coin flip
  discarded,              // the offspring was worst and dropped
  duplicate,              // the offspring repeats a member's partition
};

/// Inserts the offspring and removes the worst-scoring coloring, except
/// that a worst offspring survives with probability `keep_probability`
/// at the expense of the worst existing member. Duplicates never enter.
inline UpdateOutcome update_population(Population& pop, const Coloring& offspring,
                                       double keep_probability, Rng& rng) {
  Coloring o = canonical_relabel(offspring);
  for (const auto& m : pop.members)
    if (m == o) return UpdateOutcome::duplicate;

  std::vector<const Coloring*> set;
  for (const auto& m : pop.members) set.push_back(&m);
  set.push_back(&o);
  const int p = pop.size();
  const int n = o.n();
  std::vector<double> s(set.size());
  for (int i = 0; i <= p; ++i) s[i] = score(i, set, n);

  auto argmax = [&](int count) {
    int w = 0;
    std::uint64_t ties = 1;
    for (int i = 1; i < count; ++i) {
      if (s[i] > s[w]) {
        w = i, ties = 1;
      } else if (s[i] == s[w] && rng.below(++ties) == 0) {
        w = i;
      }
    }
    return w;
  };

  const int worst = argmax(p + 1);
  if (worst != p) {
    pop.members[worst] = std::move(o);
    return UpdateOutcome::replaced_worst;
  }
  if (rng.bernoulli(keep_probability)) {
    pop.members[argmax(p)] = std::move(o);
    return UpdateOutcome::replaced_second_worst;
  }
  return UpdateOutcome::discarded;
}

struct MascOptions {
  std::vector<Coloring> seeds;  // warm-start colorings placed in the initial population
  std::string name = "graph";
  std::function<void(const Population&, int generation)> after_generation;
  std::function<void(const Coloring& offspring)> after_crossover;
  std::function<void(std::int64_t f, int generation)> on_improvement;  // generation 0: initial population
  DntsHooks dnts_hooks;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct MascResult {
  Coloring best;
  std::int64_t best_sum = 0;
  int generations = 0;
  std::int64_t iterations = 0;  // DNTS iterations over all generations
  int population_size = 0;      // below params.population_size only after a fallback
};

/// The memetic algorithm: TABUCOL-seeded population, then per generation
/// crossover, DNTS improvement and population update.
inline MascResult masc(const Graph& g, const MascParams& params, Rng& rng,
                       const MascOptions& options = {}) {
  params.validate();
  Population pop;
  try {
    pop.members =
        generate_population(g, params.population_size, params.tabucol, rng, options.seeds, options.name);
  } catch (const InitializationError& e) {
    if (!params.allow_smaller_population || e.partial().size() < 2) throw;
    pop.members = e.partial();
  }
  for (const auto& m : pop.members) {
    if (m.sum() < pop.best_sum) {
      pop.best = m;
      pop.best_sum = m.sum();
    }
  }
  if (options.on_improvement) options.on_improvement(pop.best_sum, 0);

  DntsHooks hooks = options.dnts_hooks;
  if (options.deadline) hooks.deadline = options.deadline;
  Dnts search(g, params.dnts, rng, hooks);
  MascResult result;
  result.population_size = pop.size();

  for (int gen = 1; gen <= params.max_generations; ++gen) {
    if (options.deadline && std::chrono::steady_clock::now() >= *options.deadline) break;
    const int alpha = std::min(choose_alpha(g.n(), pop.min_k()), pop.size());
    std::vector<const Coloring*> parents;
    for (int i : select_parents(pop.size(), alpha, rng)) parents.push_back(&pop.members[i]);
    Coloring child = mgpx(std::span<const Coloring* const>(parents), g, rng);
    if (options.after_crossover) options.after_crossover(child);

    DntsResult improved = search.run(child);
    result.iterations += improved.iterations;
    if (improved.best.sum() < pop.best_sum) {
      pop.best = improved.best;
      pop.best_sum = improved.best.sum();
      if (options.on_improvement) options.on_improvement(pop.best_sum, gen);
    }
    update_population(pop, improved.best, params.replace_second_worst_probability, rng);
    result.generations = gen;
    if (options.after_generation) options.after_generation(pop, gen);
  }
  result.best = pop.best;
  result.best_sum = pop.best_sum;
  return result;
}

}  // namespace sumcol
