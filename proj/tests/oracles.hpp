#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the solver beyond the basic Graph/Coloring containers.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "sumcol/coloring.hpp"
#include "sumcol/dnts.hpp"
#include "sumcol/graph.hpp"
#include "sumcol/rng.hpp"

namespace oracle {

using sumcol::Coloring;
using sumcol::Graph;
using sumcol::Rng;

inline Graph random_graph(int n, double p, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

/// Proper coloring built by giving vertices in random order a random color
/// among those free, drawing from 1..k_limit (extending when none is free).
inline Coloring random_proper_coloring(const Graph& g, int k_limit, Rng& rng) {
  std::vector<int> order(static_cast<std::size_t>(g.n()));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<int> color(static_cast<std::size_t>(g.n()), 0);
  for (int v : order) {
    std::vector<int> free;
    for (int c = 1; c <= std::max(k_limit, 1); ++c) {
      bool ok = true;
      for (int w : g.neighbors(v)) ok = ok && color[w] != c;
      if (ok) free.push_back(c);
    }
    if (free.empty()) {
      int c = 1;
      for (bool clash = true; clash; ++c) {
        clash = false;
        for (int w : g.neighbors(v)) clash = clash || color[w] == c;
        if (!clash) break;
      }
      color[v] = c;
    } else {
      color[v] = free[rng.below(free.size())];
    }
  }
  return Coloring(color);
}

/// Minimum of sum(color) over every proper coloring with colors 1..n,
/// by plain backtracking (no symmetry breaking, no bounding).
inline std::int64_t chromatic_sum(const Graph& g) {
  const int n = g.n();
  std::vector<int> color(static_cast<std::size_t>(n), 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  auto rec = [&](auto&& self, int v, std::int64_t sum) -> void {
    if (v == n) {
      best = std::min(best, sum);
      return;
    }
    for (int c = 1; c <= n; ++c) {
      bool ok = true;
      for (int w = 0; w < v && ok; ++w) ok = !(g.adjacent(v, w) && color[w] == c);
      if (!ok) continue;
      color[v] = c;
      self(self, v + 1, sum + c);
    }
    color[v] = 0;
  };
  rec(rec, 0, 0);
  return best;
}

/// Union-find.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

/// Components of the induced subgraph as sorted vertex sets, via union-find
/// over the edge list.
inline std::set<std::vector<int>> components(const Graph& g, const std::vector<int>& subset) {
  std::vector<char> in(static_cast<std::size_t>(g.n()), 0);
  for (int v : subset) in[v] = 1;
  Dsu dsu(g.n());
  for (auto [u, v] : g.edges())
    if (in[u] && in[v]) dsu.unite(u, v);
  std::vector<std::vector<int>> by_root(static_cast<std::size_t>(g.n()));
  for (int v : subset) by_root[dsu.find(v)].push_back(v);
  std::set<std::vector<int>> out;
  for (auto& c : by_root)
    if (!c.empty()) {
      std::sort(c.begin(), c.end());
      out.insert(c);
    }
  return out;
}

/// (from, to, sorted vertices, delta) for a move.
using MoveKey = std::tuple<int, int, std::vector<int>, std::int64_t>;

inline MoveKey key_of(const sumcol::Move& m) {
  std::vector<int> vs = m.kind == sumcol::Neighborhood::exchange ? m.component : std::vector<int>{m.vertex};
  std::sort(vs.begin(), vs.end());
  return {m.from, m.to, vs, m.delta};
}

inline std::multiset<MoveKey> keys_of(const std::vector<sumcol::Move>& moves) {
  std::multiset<MoveKey> out;
  for (const auto& m : moves) out.insert(key_of(m));
  return out;
}

/// Exchange moves by brute force: for every class pair, every component of
/// size >= 2 of the induced subgraph, with the delta measured by actually
/// swapping the colors and recomputing the sum.
inline std::multiset<MoveKey> exchange_moves(const Coloring& c, const Graph& g) {
  std::multiset<MoveKey> out;
  const std::vector<int> colors = c.colors();
  for (int i = 0; i < c.k(); ++i) {
    for (int j = i + 1; j < c.k(); ++j) {
      std::vector<int> subset;
      for (int v = 0; v < g.n(); ++v)
        if (c.class_of(v) == i || c.class_of(v) == j) subset.push_back(v);
      for (const auto& comp : components(g, subset)) {
        if (comp.size() < 2) continue;
        std::vector<int> swapped = colors;
        for (int v : comp) swapped[v] = c.class_of(v) == i ? j + 1 : i + 1;
        std::int64_t before = 0, after = 0;
        for (int v = 0; v < g.n(); ++v) before += colors[v], after += swapped[v];
        out.insert({i, j, comp, after - before});
      }
    }
  }
  return out;
}

/// One-move moves by brute force: recolor each vertex into each other
/// allocated class and keep the proper results.
inline std::multiset<MoveKey> one_moves(const Coloring& c, const Graph& g) {
  std::multiset<MoveKey> out;
  for (int v = 0; v < g.n(); ++v) {
    for (int j = 0; j < c.k(); ++j) {
      if (j == c.class_of(v)) continue;
      bool ok = true;
      for (int w = 0; w < g.n(); ++w) ok = ok && !(g.adjacent(v, w) && c.class_of(w) == j);
      if (ok) out.insert({c.class_of(v), j, std::vector<int>{v}, j - c.class_of(v)});
    }
  }
  return out;
}

}  // namespace oracle
