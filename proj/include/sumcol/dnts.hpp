#pragma once

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sumcol/coloring.hpp"
#include "sumcol/graph.hpp"
#include "sumcol/rng.hpp"

namespace sumcol {

/// Stop limits of one DNTS call, counted in iterations.
struct DntsParams {
  std::int64_t p1 = 500;     // non-improving iterations ending an exchange (N1) phase
  std::int64_t p2 = 1000;    // same for a one-move (N2) phase
  std::int64_t p3 = 4000;    // non-improving iterations before a perturbation
  std::int64_t p4 = 10000;   // total iterations of the call

  void validate() const {
    if (p1 <= 0 || p2 <= 0 || p1 > p3 || p2 > p3 || p3 > p4)
      throw std::invalid_argument("DNTS parameters need 0 < p1, p2 <= p3 <= p4");
  }
};

enum class Neighborhood { exchange, one_move };

/// Which neighborhoods a search alternates over.
enum class NeighborhoodSet { both, exchange_only, one_move_only };

inline const char* to_string(NeighborhoodSet s) {
  switch (s) {
    case NeighborhoodSet::both: return "dnts";
    case NeighborhoodSet::exchange_only: return "ts-n1";
    case NeighborhoodSet::one_move_only: return "ts-n2";
  }
  return "?";
}

/// Exchange(i, j): swap the sides of a connected component of the
/// subgraph induced by V_i and V_j. OneMove(v, i, j): move v from V_i to V_j.
struct Move {
  Neighborhood kind = Neighborhood::one_move;
  int from = 0;                // class i
  int to = 0;                  // class j
  int vertex = -1;             // one_move only
  std::vector<int> component;  // exchange only
  std::int64_t delta = 0;      // f(after) - f(before)
};

/// Tabu expiries. An entry is active while the current iteration is at
/// most its expiry.
class TabuState {
 public:
  TabuState() = default;
  TabuState(int n, int classes) { reset(n, classes); }

  std::int64_t iteration = 0;

  void reset(int n, int classes) {
    n_ = n;
    cap_ = 0;
    pair_.clear();
    vertex_.clear();
    class_.clear();
    iteration = 0;
    reserve(classes);
  }

  /// Makes room for class indices below `classes`.
  void reserve(int classes) {
    if (classes <= cap_) return;
    const int cap = std::max(classes, cap_ * 2);
    std::vector<std::int64_t> pair(static_cast<std::size_t>(cap) * cap, kNever);
    std::vector<std::int64_t> vertex(static_cast<std::size_t>(n_) * cap, kNever);
    for (int i = 0; i < cap_; ++i)
      for (int j = 0; j < cap_; ++j) pair[idx(i, j, cap)] = pair_[idx(i, j, cap_)];
    for (int v = 0; v < n_; ++v)
      for (int c = 0; c < cap_; ++c) vertex[idx(v, c, cap)] = vertex_[idx(v, c, cap_)];
    pair_ = std::move(pair);
    vertex_ = std::move(vertex);
    class_.resize(static_cast<std::size_t>(cap), kNever);
    cap_ = cap;
  }

  bool pair_tabu(int i, int j) const { return iteration <= pair_[idx(std::min(i, j), std::max(i, j), cap_)]; }
  bool vertex_tabu(int v, int c) const { return iteration <= vertex_[idx(v, c, cap_)]; }
  bool class_tabu(int c) const { return iteration <= class_[c]; }

  void forbid_pair(int i, int j, std::int64_t tenure) {
    reserve(std::max(i, j) + 1);
    pair_[idx(std::min(i, j), std::max(i, j), cap_)] = iteration + tenure;
  }
  void forbid_vertex(int v, int c, std::int64_t tenure) {
    reserve(c + 1);
    vertex_[idx(v, c, cap_)] = iteration + tenure;
  }
  void forbid_class(int c, std::int64_t tenure) {
    reserve(c + 1);
    class_[c] = iteration + tenure;
  }

 private:
  static constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::min() / 2;
  static std::size_t idx(int a, int b, int stride) {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(stride) + static_cast<std::size_t>(b);
  }

  int n_ = 0;
  int cap_ = 0;
  std::vector<std::int64_t> pair_;
  std::vector<std::int64_t> vertex_;
  std::vector<std::int64_t> class_;
};

/// Tabu status of a move: its own entry, or either class being locked by a
/// perturbation.
inline bool is_tabu(const Move& m, const TabuState& tabu) {
  if (tabu.class_tabu(m.from) || tabu.class_tabu(m.to)) return true;
  return m.kind == Neighborhood::exchange ? tabu.pair_tabu(m.from, m.to)
                                          : tabu.vertex_tabu(m.vertex, m.to);
}

/// Streaming argmin over candidate moves with uniform tie-breaking.
/// A candidate competes if it is not tabu or if it aspirates, i.e. leads
/// strictly below the best sum found so far.
class MoveSelector {
 public:
  MoveSelector(std::int64_t f_current, std::int64_t f_best) : f_current_(f_current), f_best_(f_best) {}

  /// Returns true if the candidate became the current choice.
  bool offer(std::int64_t delta, bool tabu, Rng& rng) {
    if (tabu && f_current_ + delta >= f_best_) return false;
    if (!found_ || delta < delta_) {
      found_ = true;
      delta_ = delta;
      ties_ = 1;
      return true;
    }
    if (delta == delta_) return rng.below(++ties_) == 0;
    return false;
  }

  /// Whether the candidate could still win or tie (cheap pre-check).
  bool competitive(std::int64_t delta) const { return !found_ || delta <= delta_; }

  bool found() const { return found_; }
  std::int64_t delta() const { return delta_; }

 private:
  std::int64_t f_current_;
  std::int64_t f_best_;
  bool found_ = false;
  std::int64_t delta_ = 0;
  std::uint64_t ties_ = 0;
};

// ---------------------------------------------------------------------------
// Neighborhood enumeration (reference versions, materialized move lists)
// ---------------------------------------------------------------------------

/// All Exchange moves: one per connected component with at least two
/// vertices of the subgraph induced by each class pair i < j.
inline std::vector<Move> enumerate_n1(const Coloring& c, const Graph& g) {
  std::vector<Move> moves;
  std::vector<int> subset;
  for (int i = 0; i < c.k(); ++i) {
    for (int j = i + 1; j < c.k(); ++j) {
      subset.assign(c.members(i).begin(), c.members(i).end());
      subset.insert(subset.end(), c.members(j).begin(), c.members(j).end());
      for (auto& comp : connected_components(g, subset)) {
        if (comp.size() < 2) continue;
        std::int64_t a = 0;
        for (int v : comp) a += c.class_of(v) == i;
        const std::int64_t b = static_cast<std::int64_t>(comp.size()) - a;
        Move m;
        m.kind = Neighborhood::exchange;
        m.from = i;
        m.to = j;
        m.delta = static_cast<std::int64_t>(j - i) * (a - b);
        m.component = std::move(comp);
        moves.push_back(std::move(m));
      }
    }
  }
  return moves;
}

/// All OneMove(v, i, j) with j != i among the allocated classes and v
/// having no neighbor in V_j.
inline std::vector<Move> enumerate_n2(const Coloring& c, const Graph& g) {
  std::vector<Move> moves;
  std::vector<char> blocked(static_cast<std::size_t>(c.k()));
  for (int v = 0; v < c.n(); ++v) {
    std::fill(blocked.begin(), blocked.end(), 0);
    for (int w : g.neighbors(v)) blocked[c.class_of(w)] = 1;
    const int i = c.class_of(v);
    for (int j = 0; j < c.k(); ++j) {
      if (j == i || blocked[j]) continue;
      Move m;
      m.kind = Neighborhood::one_move;
      m.from = i;
      m.to = j;
      m.vertex = v;
      m.delta = j - i;
      moves.push_back(std::move(m));
    }
  }
  return moves;
}

/// Best allowed move (minimum delta among non-tabu or aspirating moves,
/// ties uniformly at random); nullopt when every move is tabu and none
/// aspirates, or when there are no moves.
inline std::optional<Move> select_move(std::span<const Move> moves, const TabuState& tabu,
                                       std::int64_t f_best, std::int64_t f_current, Rng& rng) {
  MoveSelector sel(f_current, f_best);
  const Move* choice = nullptr;
  for (const auto& m : moves)
    if (sel.offer(m.delta, is_tabu(m, tabu), rng)) choice = &m;
  if (!choice) return std::nullopt;
  return *choice;
}

/// Uniform draw from {0, ..., k-1}.
inline std::int64_t draw_tenure(int k, Rng& rng) {
  return static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(std::max(k, 1))));
}

/// Applies m to c and records its tabu entry: the class pair for an
/// exchange, (v, i) for a one-move.
inline void apply_move(Coloring& c, const Move& m, TabuState& tabu, Rng& rng) {
  const std::int64_t tenure = draw_tenure(c.k(), rng);
  if (m.kind == Neighborhood::exchange) {
    for (int v : m.component) c.move(v, c.class_of(v) == m.from ? m.to : m.from);
    tabu.forbid_pair(m.from, m.to, tenure);
  } else {
    c.move(m.vertex, m.to);
    tabu.forbid_vertex(m.vertex, m.from, tenure);
  }
}

/// Undoes apply_move on the coloring (tabu entries are left alone).
inline void revert_move(Coloring& c, const Move& m) {
  if (m.kind == Neighborhood::exchange) {
    for (int v : m.component) c.move(v, c.class_of(v) == m.from ? m.to : m.from);
  } else {
    c.move(m.vertex, m.from);
  }
}

/// Splits off a random third (rounded down) of the largest class of
/// c_star into a new class k+1 and locks both classes for a tenure drawn
/// from {0, ..., k}. Ties for the largest class go to the lowest index.
/// Trailing empty classes of c_star are dropped first.
inline Coloring perturb(const Coloring& c_star, TabuState& tabu, Rng& rng) {
  Coloring c = c_star;
  c.trim();
  if (c.k() == 0) throw std::invalid_argument("perturb: empty coloring");
  int largest = 0;
  for (int i = 1; i < c.k(); ++i)
    if (c.class_size(i) > c.class_size(largest)) largest = i;
  std::vector<int> pool(c.members(largest).begin(), c.members(largest).end());
  const int fresh = c.add_class();
  const auto take = pool.size() / 3;
  for (std::size_t t = 0; t < take; ++t) {
    std::swap(pool[t], pool[t + rng.below(pool.size() - t)]);
    c.move(pool[t], fresh);
  }
  const std::int64_t tenure = draw_tenure(c.k(), rng);
  tabu.forbid_class(largest, tenure);
  tabu.forbid_class(fresh, tenure);
  return c;
}

// ---------------------------------------------------------------------------
// Search engine
// ---------------------------------------------------------------------------

struct DntsResult {
  Coloring best;                 // canonicalized
  std::int64_t iterations = 0;
  std::int64_t perturbations = 0;
};

/// Optional hooks, called synchronously from the search thread.
struct DntsHooks {
  std::function<void(const Coloring&)> after_move;         // after every applied move
  std::function<void(const Coloring&)> after_perturbation;
  std::function<void(std::int64_t f, std::int64_t iteration)> on_improvement;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// One DNTS call. Owns its current coloring, incumbent and tabu state.
///
/// N1 candidates come from a per-class-pair cache of the nontrivial
/// components, rebuilt only for pairs whose classes changed since the
/// last iteration. N2 feasibility reads a vertex-by-class neighbor count
/// table kept up to date by every move.
class Dnts {
 public:
  Dnts(const Graph& g, const DntsParams& params, Rng& rng, DntsHooks hooks = {})
      : g_(g), params_(params), rng_(rng), hooks_(std::move(hooks)) {
    params_.validate();
  }

  /// Runs from `start` until p4 iterations; returns the best coloring
  /// found, canonicalized.
  DntsResult run(const Coloring& start, NeighborhoodSet set = NeighborhoodSet::both) {
    if (start.n() != g_.n()) throw std::invalid_argument("dnts: coloring does not match graph");
    tabu_.reset(g_.n(), start.k());
    iterations_ = 0;
    perturbations_ = 0;
    stagnation_ = 0;
    best_ = start;
    load(start);

    while (!exhausted()) {
      if (set != NeighborhoodSet::one_move_only) phase(Neighborhood::exchange, params_.p1);
      if (exhausted()) break;
      if (set != NeighborhoodSet::exchange_only) phase(Neighborhood::one_move, params_.p2);
      if (exhausted()) break;
      if (stagnation_ >= params_.p3) {
        Coloring next = perturb(best_, tabu_, rng_);
        ++perturbations_;
        stagnation_ = 0;
        load(next);
        if (hooks_.after_perturbation) hooks_.after_perturbation(current_);
      }
    }
    return {canonical_relabel(best_), iterations_, perturbations_};
  }

  /// One tabu search phase over a single neighborhood, ending after `limit`
  /// consecutive iterations without improving the incumbent or when the
  /// budget runs out. Returns the final current coloring.
  const Coloring& phase(Neighborhood nb, std::int64_t limit) {
    std::int64_t idle = 0;
    while (idle < limit && !exhausted()) {
      tabu_.iteration = ++iterations_;
      const bool moved = nb == Neighborhood::exchange ? step_exchange() : step_one_move();
      if (moved && hooks_.after_move) hooks_.after_move(current_);
      if (current_.sum() < best_.sum()) {
        best_ = current_;
        idle = 0;
        stagnation_ = 0;
        if (hooks_.on_improvement) hooks_.on_improvement(best_.sum(), iterations_);
      } else {
        ++idle;
        ++stagnation_;
      }
    }
    return current_;
  }

  const Coloring& current() const { return current_; }
  const Coloring& incumbent() const { return best_; }
  std::int64_t iterations() const { return iterations_; }

  /// Continues the search from a given coloring (used by tests to drive
  /// single phases). Clears the tabu state.
  void start_from(const Coloring& c) {
    tabu_.reset(g_.n(), c.k());
    iterations_ = 0;
    stagnation_ = 0;
    best_ = c;
    load(c);
  }

  /// Exchange candidates as held by the component cache (test support).
  std::vector<Move> exchange_moves() {
    std::vector<Move> out;
    for (int i = 0; i < current_.k(); ++i) {
      for (int j = i + 1; j < current_.k(); ++j) {
        PairCache& pc = pair_cache(i, j);
        if (!pc.valid) rebuild(i, j);
        for (const Component& comp : pc.components) {
          Move m;
          m.kind = Neighborhood::exchange;
          m.from = i;
          m.to = j;
          m.component.assign(pc.vertices.begin() + comp.offset,
                             pc.vertices.begin() + comp.offset + comp.size);
          m.delta = static_cast<std::int64_t>(j - i) * (2 * comp.in_low - comp.size);
          out.push_back(std::move(m));
        }
      }
    }
    return out;
  }

  /// One-move candidates read from the neighbor count table (test support).
  std::vector<Move> one_move_moves() const {
    std::vector<Move> out;
    for (int v = 0; v < g_.n(); ++v) {
      const int i = current_.class_of(v);
      for (int j = 0; j < current_.k(); ++j) {
        if (j == i || gamma_[cell(v, j)] != 0) continue;
        Move m;
        m.from = i;
        m.to = j;
        m.vertex = v;
        m.delta = j - i;
        out.push_back(std::move(m));
      }
    }
    return out;
  }

 private:
  struct Component {
    int offset;
    int size;
    int in_low;   // vertices currently in the lower-indexed class of the pair
  };
  struct PairCache {
    bool valid = false;
    std::vector<int> vertices;
    std::vector<Component> components;
  };

  bool exhausted() {
    if (iterations_ >= params_.p4) return true;
    if (hooks_.deadline && (iterations_ & 255) == 0 &&
        std::chrono::steady_clock::now() >= *hooks_.deadline)
      return true;
    return false;
  }

  std::size_t cell(int v, int c) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(cap_) + static_cast<std::size_t>(c);
  }
  PairCache& pair_cache(int i, int j) {
    return pairs_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cap_) + static_cast<std::size_t>(j)];
  }

  /// Installs c as the current coloring and rebuilds all derived tables.
  void load(const Coloring& c) {
    current_ = c;
    cap_ = std::max(2 * current_.k(), current_.k() + 8);
    gamma_.assign(static_cast<std::size_t>(g_.n()) * static_cast<std::size_t>(cap_), 0);
    for (int v = 0; v < g_.n(); ++v)
      for (int w : g_.neighbors(v)) ++gamma_[cell(v, current_.class_of(w))];
    pairs_.assign(static_cast<std::size_t>(cap_) * static_cast<std::size_t>(cap_), PairCache{});
    tabu_.reserve(current_.k());
    stamp_.assign(static_cast<std::size_t>(g_.n()), 0);
    stamp_value_ = 0;
  }

  void invalidate_class(int c) {
    for (int x = 0; x < current_.k(); ++x) {
      if (x < c) pair_cache(x, c).valid = false;
      else if (x > c) pair_cache(c, x).valid = false;
    }
  }

  void relocate(int v, int to) {
    const int from = current_.class_of(v);
    current_.move(v, to);
    for (int w : g_.neighbors(v)) {
      --gamma_[cell(w, from)];
      ++gamma_[cell(w, to)];
    }
  }

  void rebuild(int i, int j) {
    PairCache& pc = pair_cache(i, j);
    pc.vertices.clear();
    pc.components.clear();
    if (++stamp_value_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      stamp_value_ = 1;
    }
    for (int root : current_.members(i)) {
      if (stamp_[root] == stamp_value_ || gamma_[cell(root, j)] == 0) continue;
      const int offset = static_cast<int>(pc.vertices.size());
      int in_low = 0;
      pc.vertices.push_back(root);
      stamp_[root] = stamp_value_;
      for (auto head = static_cast<std::size_t>(offset); head < pc.vertices.size(); ++head) {
        const int v = pc.vertices[head];
        const int other = current_.class_of(v) == i ? j : i;
        in_low += other == j;
        for (int w : g_.neighbors(v)) {
          if (stamp_[w] != stamp_value_ && current_.class_of(w) == other) {
            stamp_[w] = stamp_value_;
            pc.vertices.push_back(w);
          }
        }
      }
      pc.components.push_back({offset, static_cast<int>(pc.vertices.size()) - offset, in_low});
    }
    pc.valid = true;
  }

  bool step_exchange() {
    MoveSelector sel(current_.sum(), best_.sum());
    int bi = -1, bj = -1, bc = -1;
    const int k = current_.k();
    for (int i = 0; i < k; ++i) {
      if (current_.class_size(i) == 0) continue;
      for (int j = i + 1; j < k; ++j) {
        if (current_.class_size(j) == 0) continue;
        PairCache& pc = pair_cache(i, j);
        if (!pc.valid) rebuild(i, j);
        if (pc.components.empty()) continue;
        const bool tabu = tabu_.class_tabu(i) || tabu_.class_tabu(j) || tabu_.pair_tabu(i, j);
        for (std::size_t ci = 0; ci < pc.components.size(); ++ci) {
          const Component& comp = pc.components[ci];
          const std::int64_t delta =
              static_cast<std::int64_t>(j - i) * (2 * comp.in_low - comp.size);
          if (sel.offer(delta, tabu, rng_)) bi = i, bj = j, bc = static_cast<int>(ci);
        }
      }
    }
    if (bc < 0) return false;

    const PairCache& pc = pair_cache(bi, bj);
    const Component& comp = pc.components[static_cast<std::size_t>(bc)];
    moved_.assign(pc.vertices.begin() + comp.offset, pc.vertices.begin() + comp.offset + comp.size);
    const std::int64_t tenure = draw_tenure(k, rng_);
    for (int v : moved_) relocate(v, current_.class_of(v) == bi ? bj : bi);
    tabu_.forbid_pair(bi, bj, tenure);
    invalidate_class(bi);
    invalidate_class(bj);
    return true;
  }

  bool step_one_move() {
    MoveSelector sel(current_.sum(), best_.sum());
    int bv = -1, bto = -1;
    const int k = current_.k();
    for (int v = 0; v < g_.n(); ++v) {
      const int i = current_.class_of(v);
      const bool from_locked = tabu_.class_tabu(i);
      const int* row = &gamma_[cell(v, 0)];
      // deltas grow with j, so the first competing j is v's best
      for (int j = 0; j < k; ++j) {
        if (j == i || row[j] != 0) continue;
        const std::int64_t delta = j - i;
        if (!sel.competitive(delta)) break;
        const bool tabu = from_locked || tabu_.class_tabu(j) || tabu_.vertex_tabu(v, j);
        if (tabu && current_.sum() + delta >= best_.sum()) continue;
        if (sel.offer(delta, tabu, rng_)) bv = v, bto = j;
        break;
      }
    }
    if (bv < 0) return false;
    const int from = current_.class_of(bv);
    const std::int64_t tenure = draw_tenure(k, rng_);
    relocate(bv, bto);
    tabu_.forbid_vertex(bv, from, tenure);
    invalidate_class(from);
    invalidate_class(bto);
    return true;
  }

  const Graph& g_;
  DntsParams params_;
  Rng& rng_;
  DntsHooks hooks_;

  TabuState tabu_;
  Coloring current_;
  Coloring best_;
  std::int64_t iterations_ = 0;
  std::int64_t perturbations_ = 0;
  std::int64_t stagnation_ = 0;

  int cap_ = 0;
  std::vector<int> gamma_;  // gamma_[v*cap_ + c]: neighbors of v in class c
  std::vector<PairCache> pairs_;
  std::vector<unsigned> stamp_;
  unsigned stamp_value_ = 0;
  std::vector<int> moved_;
};

/// Double-neighborhood tabu search from c; never returns a worse sum.
inline Coloring dnts(const Coloring& c, const Graph& g, const DntsParams& params, Rng& rng,
                     NeighborhoodSet set = NeighborhoodSet::both) {
  Dnts search(g, params, rng);
  return search.run(c, set).best;
}

}  // namespace sumcol
