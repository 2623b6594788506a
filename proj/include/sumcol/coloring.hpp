#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumcol/graph.hpp"

namespace sumcol {

/// A complete assignment of color classes to vertices, kept as both a
/// per-vertex class index and per-class member lists. Class index c
/// (0-based) carries color c+1, so the coloring sum is
/// f = sum_c (c+1)|V_c|, maintained incrementally.
///
/// Empty classes are allowed between canonicalization points; k() counts
/// allocated classes, empty ones included.
class Coloring {
 public:
  Coloring() = default;

  /// All n vertices in class 0, k = 1 (k = 0 when n = 0).
  explicit Coloring(int n) : Coloring(std::vector<int>(static_cast<std::size_t>(n), 1)) {}

  /// From 1-based colors. `k` defaults to the largest color used.
  explicit Coloring(std::span<const int> colors, int k = 0) {
    int max_color = 0;
    for (int c : colors) {
      if (c < 1) throw std::invalid_argument("colors are 1-based");
      max_color = std::max(max_color, c);
    }
    if (k < max_color) k = max_color;
    class_.resize(colors.size());
    pos_.resize(colors.size());
    members_.resize(static_cast<std::size_t>(k));
    for (std::size_t v = 0; v < colors.size(); ++v) {
      const int c = colors[v] - 1;
      class_[v] = c;
      pos_[v] = static_cast<int>(members_[c].size());
      members_[c].push_back(static_cast<int>(v));
      sum_ += colors[v];
    }
  }
  explicit Coloring(const std::vector<int>& colors, int k = 0)
      : Coloring(std::span<const int>(colors), k) {}

  int n() const noexcept { return static_cast<int>(class_.size()); }
  int k() const noexcept { return static_cast<int>(members_.size()); }

  /// 0-based class index of v.
  int class_of(int v) const noexcept { return class_[v]; }
  /// 1-based color of v.
  int color(int v) const noexcept { return class_[v] + 1; }

  std::span<const int> members(int c) const noexcept { return members_[c]; }
  int class_size(int c) const noexcept { return static_cast<int>(members_[c].size()); }

  /// Cached coloring sum.
  std::int64_t sum() const noexcept { return sum_; }

  /// 1-based colors of all vertices.
  std::vector<int> colors() const {
    std::vector<int> out(class_.size());
    for (std::size_t v = 0; v < class_.size(); ++v) out[v] = class_[v] + 1;
    return out;
  }

  /// Moves v into class `to`. Does not check properness.
  void move(int v, int to) {
    const int from = class_[v];
    if (from == to) return;
    auto& src = members_[from];
    const int last = src.back();
    src[pos_[v]] = last;
    pos_[last] = pos_[v];
    src.pop_back();
    pos_[v] = static_cast<int>(members_[to].size());
    members_[to].push_back(v);
    class_[v] = to;
    sum_ += to - from;
  }

  /// Appends an empty class and returns its index.
  int add_class() {
    members_.emplace_back();
    return k() - 1;
  }

  /// Drops trailing empty classes.
  void trim() {
    while (!members_.empty() && members_.back().empty()) members_.pop_back();
  }

  /// Checks the internal bookkeeping against the assignment (test support).
  bool consistent() const {
    std::int64_t s = 0;
    std::size_t total = 0;
    for (int c = 0; c < k(); ++c) {
      for (std::size_t i = 0; i < members_[c].size(); ++i) {
        const int v = members_[c][i];
        if (v < 0 || v >= n() || class_[v] != c || pos_[v] != static_cast<int>(i)) return false;
      }
      total += members_[c].size();
      s += static_cast<std::int64_t>(c + 1) * static_cast<std::int64_t>(members_[c].size());
    }
    return total == class_.size() && s == sum_;
  }

  friend bool operator==(const Coloring& a, const Coloring& b) {
    return a.class_ == b.class_ && a.k() == b.k();
  }

 private:
  std::vector<int> class_;
  std::vector<int> pos_;  // index of v inside members_[class_[v]]
  std::vector<std::vector<int>> members_;
  std::int64_t sum_ = 0;
};

/// f(c) = sum over vertices of their color, recomputed from scratch.
inline std::int64_t sum_value(const Coloring& c) {
  std::int64_t s = 0;
  for (int v = 0; v < c.n(); ++v) s += c.color(v);
  return s;
}

inline bool is_proper(const Coloring& c, const Graph& g) {
  if (c.n() != g.n()) return false;
  for (int u = 0; u < g.n(); ++u)
    for (int v : g.neighbors(u))
      if (u < v && c.class_of(u) == c.class_of(v)) return false;
  return true;
}

/// Number of monochromatic edges.
inline std::int64_t conflict_count(const Coloring& c, const Graph& g) {
  std::int64_t conflicts = 0;
  for (int u = 0; u < g.n(); ++u)
    for (int v : g.neighbors(u))
      if (u < v && c.class_of(u) == c.class_of(v)) ++conflicts;
  return conflicts;
}

/// H(a, b): vertices whose colors differ.
inline int distance(const Coloring& a, const Coloring& b) {
  if (a.n() != b.n()) throw std::invalid_argument("colorings of different vertex sets");
  int d = 0;
  for (int v = 0; v < a.n(); ++v) d += a.class_of(v) != b.class_of(v);
  return d;
}

/// Relabels classes by decreasing size (ties: smaller minimum vertex
/// first) and drops empty classes. The partition is unchanged and f can
/// only drop; the result is the f-minimal labeling of the partition, and
/// two colorings have the same partition iff their canonical forms are
/// equal.
inline Coloring canonical_relabel(const Coloring& c) {
  struct Key {
    int size;
    int min_vertex;
    int index;
  };
  std::vector<Key> keys;
  keys.reserve(static_cast<std::size_t>(c.k()));
  for (int i = 0; i < c.k(); ++i) {
    auto m = c.members(i);
    if (m.empty()) continue;
    keys.push_back({static_cast<int>(m.size()), *std::min_element(m.begin(), m.end()), i});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    return a.size != b.size ? a.size > b.size : a.min_vertex < b.min_vertex;
  });
  std::vector<int> label(static_cast<std::size_t>(c.k()), 0);
  for (std::size_t r = 0; r < keys.size(); ++r) label[keys[r].index] = static_cast<int>(r) + 1;
  std::vector<int> colors(static_cast<std::size_t>(c.n()));
  for (int v = 0; v < c.n(); ++v) colors[v] = label[c.class_of(v)];
  return Coloring(colors, static_cast<int>(keys.size()));
}

/// Same vertex partition, labels ignored.
inline bool same_partition(const Coloring& a, const Coloring& b) {
  if (a.n() != b.n()) return false;
  return canonical_relabel(a) == canonical_relabel(b);
}

/// Number of nonempty classes.
inline int used_classes(const Coloring& c) {
  int used = 0;
  for (int i = 0; i < c.k(); ++i) used += c.class_size(i) > 0;
  return used;
}

// ---------------------------------------------------------------------------
// Text format: "s <f> <k>" followed by one "v <vertex> <color>" per vertex,
// both 1-based. Lines starting with 'c' are comments.
// ---------------------------------------------------------------------------

class ColoringFormatError : public std::runtime_error {
 public:
  ColoringFormatError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

inline void write_coloring(std::ostream& out, const Coloring& c) {
  out << "s " << c.sum() << ' ' << c.k() << '\n';
  for (int v = 0; v < c.n(); ++v) out << "v " << v + 1 << ' ' << c.color(v) << '\n';
}

/// Reads a coloring of g. Rejects missing or repeated vertices, a summary
/// line that disagrees with the assignment, and improper colorings.
inline Coloring read_coloring(std::istream& in, const Graph& g) {
  std::vector<int> colors(static_cast<std::size_t>(g.n()), 0);
  std::int64_t declared_sum = -1;
  std::int64_t declared_k = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag) || tag == "c") continue;
    std::string a, b, extra;
    ss >> a >> b;
    if (ss >> extra) throw ColoringFormatError(line_no, "trailing tokens");
    std::int64_t x = 0, y = 0;
    if (!detail::parse_int(a, x) || !detail::parse_int(b, y))
      throw ColoringFormatError(line_no, "expected two integers");
    if (tag == "s") {
      if (declared_sum >= 0) throw ColoringFormatError(line_no, "duplicate 's' line");
      declared_sum = x;
      declared_k = y;
    } else if (tag == "v") {
      if (declared_sum < 0) throw ColoringFormatError(line_no, "'v' line before 's' line");
      if (x < 1 || x > g.n()) throw ColoringFormatError(line_no, "vertex out of range");
      if (y < 1 || y > declared_k) throw ColoringFormatError(line_no, "color outside 1..k");
      if (colors[x - 1] != 0) throw ColoringFormatError(line_no, "vertex assigned twice");
      colors[x - 1] = static_cast<int>(y);
    } else {
      throw ColoringFormatError(line_no, "unknown line tag '" + tag + "'");
    }
  }
  if (declared_sum < 0) throw ColoringFormatError(0, "missing 's' line");
  for (int v = 0; v < g.n(); ++v)
    if (colors[v] == 0)
      throw ColoringFormatError(0, "vertex " + std::to_string(v + 1) + " has no color");
  Coloring c(colors, static_cast<int>(declared_k));
  if (c.sum() != declared_sum)
    throw ColoringFormatError(0, "declared sum " + std::to_string(declared_sum) +
                                     " but colors add up to " + std::to_string(c.sum()));
  if (!is_proper(c, g)) throw ColoringFormatError(0, "coloring is not proper");
  return c;
}

}  // namespace sumcol
