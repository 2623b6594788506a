#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumcol/coloring.hpp"
#include "sumcol/graph.hpp"
#include "sumcol/rng.hpp"

namespace sumcol {

/// TABUCOL settings (Galinier & Hao's variant).
struct TabucolParams {
  std::int64_t iterations_per_k = 100'000;  // per (k, restart)
  int tenure_base = 10;                     // random part of the tenure: uniform 0..tenure_base-1
  double tenure_slope = 0.6;                // times current conflict count
  int restarts_per_k = 3;
  /// TABUCOL calls allowed while filling the population; 0 picks 20p + 50.
  int population_attempts = 0;

  void validate() const {
    if (iterations_per_k <= 0 || tenure_base <= 0 || tenure_slope < 0 || restarts_per_k <= 0 ||
        population_attempts < 0)
      throw std::invalid_argument("TABUCOL parameters must be positive");
  }
};

class InitializationError : public std::runtime_error {
 public:
  explicit InitializationError(const std::string& what, std::vector<Coloring> partial = {})
      : std::runtime_error(what), partial_(std::move(partial)) {}

  /// The distinct colorings collected before giving up.
  const std::vector<Coloring>& partial() const noexcept { return partial_; }

 private:
  std::vector<Coloring> partial_;
};

/// Largest-degree-first greedy coloring (ties by vertex id), each vertex
/// taking the smallest color free among its colored neighbors.
inline Coloring greedy_coloring(const Graph& g) {
  const int n = g.n();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g.degree(a) > g.degree(b); });
  std::vector<int> colors(static_cast<std::size_t>(n), 0);
  std::vector<int> seen(static_cast<std::size_t>(n) + 2, -1);
  for (int v : order) {
    for (int w : g.neighbors(v))
      if (colors[w] > 0) seen[colors[w]] = v;
    int c = 1;
    while (seen[c] == v) ++c;
    colors[v] = c;
  }
  return Coloring(colors);
}

/// Tabu search for a conflict-free k-coloring. Moves recolor one
/// conflicting vertex; recoloring v back to its old color is tabu for
/// slope*conflicts + uniform(0..base-1) iterations, unless the move beats
/// the best conflict count seen.
inline std::optional<Coloring> tabucol(const Graph& g, int k, const TabucolParams& params,
                                       Rng& rng) {
  const int n = g.n();
  if (k < 1 || k > n) throw std::invalid_argument("tabucol: k must be in 1..n");
  const auto nk = static_cast<std::size_t>(n) * static_cast<std::size_t>(k);

  std::vector<int> color(static_cast<std::size_t>(n));
  for (auto& c : color) c = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));

  // gamma[v*k + c]: neighbors of v colored c
  std::vector<int> gamma(nk, 0);
  std::int64_t conflicts = 0;
  for (int v = 0; v < n; ++v)
    for (int w : g.neighbors(v)) {
      ++gamma[static_cast<std::size_t>(v) * k + color[w]];
      if (v < w && color[v] == color[w]) ++conflicts;
    }

  // conflicting vertices, with O(1) insert/erase
  std::vector<int> conflicted;
  std::vector<int> where(static_cast<std::size_t>(n), -1);
  auto refresh = [&](int v) {
    const bool bad = gamma[static_cast<std::size_t>(v) * k + color[v]] > 0;
    if (bad && where[v] < 0) {
      where[v] = static_cast<int>(conflicted.size());
      conflicted.push_back(v);
    } else if (!bad && where[v] >= 0) {
      const int last = conflicted.back();
      conflicted[where[v]] = last;
      where[last] = where[v];
      conflicted.pop_back();
      where[v] = -1;
    }
  };
  for (int v = 0; v < n; ++v) refresh(v);

  std::vector<std::int64_t> tabu_until(nk, -1);
  std::int64_t best = conflicts;

  for (std::int64_t iter = 0; conflicts > 0 && iter < params.iterations_per_k; ++iter) {
    int best_v = -1, best_c = -1;
    int best_delta = 0;
    std::uint64_t ties = 0;
    for (int v : conflicted) {
      const std::size_t row = static_cast<std::size_t>(v) * k;
      const int here = gamma[row + color[v]];
      for (int c = 0; c < k; ++c) {
        if (c == color[v]) continue;
        const int delta = gamma[row + c] - here;
        const bool allowed = tabu_until[row + c] < iter || conflicts + delta < best;
        if (!allowed) continue;
        if (best_v < 0 || delta < best_delta) {
          best_v = v, best_c = c, best_delta = delta, ties = 1;
        } else if (delta == best_delta && rng.below(++ties) == 0) {
          best_v = v, best_c = c;
        }
      }
    }
    if (best_v < 0) continue;  // everything tabu

    const int old = color[best_v];
    color[best_v] = best_c;
    conflicts += best_delta;
    for (int w : g.neighbors(best_v)) {
      const std::size_t row = static_cast<std::size_t>(w) * k;
      --gamma[row + old];
      ++gamma[row + best_c];
      refresh(w);
    }
    refresh(best_v);
    tabu_until[static_cast<std::size_t>(best_v) * k + old] =
        iter + static_cast<std::int64_t>(params.tenure_slope * static_cast<double>(conflicts)) +
        static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(params.tenure_base)));
    best = std::min(best, conflicts);
  }
  if (conflicts > 0) return std::nullopt;
  for (auto& c : color) ++c;
  return Coloring(color, k);
}

/// Runs TABUCOL up to restarts_per_k times at k.
inline std::optional<Coloring> tabucol_with_restarts(const Graph& g, int k,
                                                     const TabucolParams& params, Rng& rng) {
  for (int r = 0; r < params.restarts_per_k; ++r)
    if (auto c = tabucol(g, k, params, rng)) return c;
  return std::nullopt;
}

/// Result of the k descent: the smallest k reached and, unless the greedy
/// bound could not be improved, the TABUCOL coloring found there.
struct Descent {
  int k = 0;
  std::optional<Coloring> coloring;
};

/// Descends from the greedy bound one color at a time while TABUCOL
/// (with restarts) still finds a proper coloring.
inline Descent descend_k(const Graph& g, const TabucolParams& params, Rng& rng) {
  Descent d{used_classes(greedy_coloring(g)), std::nullopt};
  while (d.k > 1) {
    auto next = tabucol_with_restarts(g, d.k - 1, params, rng);
    if (!next) break;
    d.coloring = canonical_relabel(*next);
    d.k = d.coloring->k();
  }
  return d;
}

/// p pairwise-distinct proper colorings, canonicalized. `seeds` (e.g. a
/// warm-start solution) are placed first; the rest come from TABUCOL at
/// the smallest k the descent reached, moving up one color whenever
/// several consecutive attempts produce nothing new.
inline std::vector<Coloring> generate_population(const Graph& g, int p,
                                                 const TabucolParams& params, Rng& rng,
                                                 std::span<const Coloring> seeds = {},
                                                 const std::string& name = "graph") {
  params.validate();
  if (p < 2) throw std::invalid_argument("population size must be at least 2");
  if (g.n() == 0) throw InitializationError(name + ": cannot color an empty graph");

  std::vector<Coloring> population;
  auto insert = [&](const Coloring& c) {
    Coloring canon = canonical_relabel(c);
    for (const auto& member : population)
      if (member == canon) return false;
    population.push_back(std::move(canon));
    return true;
  };
  for (const auto& s : seeds) {
    if (!is_proper(s, g)) throw InitializationError(name + ": seed coloring is not proper");
    if (static_cast<int>(population.size()) < p) insert(s);
  }
  if (static_cast<int>(population.size()) >= p) return population;

  Descent descent = descend_k(g, params, rng);
  int level = descent.k;
  if (descent.coloring) insert(*descent.coloring);

  constexpr int stall_limit = 5;
  const int budget = params.population_attempts > 0 ? params.population_attempts : 20 * p + 50;
  int stall = 0;
  for (int attempt = 0; static_cast<int>(population.size()) < p; ++attempt) {
    if (attempt >= budget)
      throw InitializationError(name + ": found only " + std::to_string(population.size()) +
                                " distinct colorings out of " + std::to_string(p) + " after " +
                                std::to_string(budget) + " attempts",
                                std::move(population));
    auto c = tabucol(g, level, params, rng);
    if (c && insert(*c)) {
      stall = 0;
    } else if (++stall >= stall_limit) {
      stall = 0;
      level = std::min(level + 1, g.n());
    }
  }
  return population;
}

}  // namespace sumcol
