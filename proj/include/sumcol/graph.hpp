#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sumcol {

/// Simple undirected graph on vertices 0..n-1. Immutable once built.
/// Adjacency is kept twice: a bitset row per vertex for O(1) membership
/// and a sorted neighbor list for iteration.
class Graph {
 public:
  Graph() = default;

  /// Builds from 0-based endpoint pairs. Self-loops and repeated pairs
  /// (in either orientation) are dropped.
  static Graph from_edges(int n, std::span<const std::pair<int, int>> edges) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    Graph g;
    g.n_ = n;
    g.row_words_ = (static_cast<std::size_t>(n) + 63) / 64;
    g.bits_.assign(static_cast<std::size_t>(n) * g.row_words_, 0);
    g.neighbors_.resize(static_cast<std::size_t>(n));
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
      if (u == v || g.adjacent(u, v)) continue;
      g.set_bit(u, v);
      g.set_bit(v, u);
      g.neighbors_[u].push_back(v);
      g.neighbors_[v].push_back(u);
      ++g.edge_count_;
    }
    for (auto& list : g.neighbors_) std::sort(list.begin(), list.end());
    return g;
  }

  int n() const noexcept { return n_; }
  std::int64_t edge_count() const noexcept { return edge_count_; }

  bool adjacent(int u, int v) const noexcept {
    return (bits_[static_cast<std::size_t>(u) * row_words_ + (static_cast<std::size_t>(v) >> 6)] >>
            (v & 63)) & 1U;
  }

  std::span<const int> neighbors(int v) const noexcept { return neighbors_[v]; }
  int degree(int v) const noexcept { return static_cast<int>(neighbors_[v].size()); }

  /// Bitset row of v, row_words() words long.
  std::span<const std::uint64_t> row(int v) const noexcept {
    return {bits_.data() + static_cast<std::size_t>(v) * row_words_, row_words_};
  }
  std::size_t row_words() const noexcept { return row_words_; }

  /// Unordered edge list, 0-based, u < v, lexicographic.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(edge_count_));
    for (int u = 0; u < n_; ++u)
      for (int v : neighbors_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.neighbors_ == b.neighbors_;
  }

 private:
  void set_bit(int u, int v) {
    bits_[static_cast<std::size_t>(u) * row_words_ + (static_cast<std::size_t>(v) >> 6)] |=
        std::uint64_t{1} << (v & 63);
  }

  int n_ = 0;
  std::int64_t edge_count_ = 0;
  std::size_t row_words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::vector<int>> neighbors_;
};

// ---------------------------------------------------------------------------
// DIMACS .col
// ---------------------------------------------------------------------------

enum class DimacsErrorKind {
  missing_problem_line,
  duplicate_problem_line,
  edge_before_problem_line,
  endpoint_out_of_range,
  bad_token,
};

inline const char* to_string(DimacsErrorKind kind) {
  switch (kind) {
    case DimacsErrorKind::missing_problem_line: return "missing 'p edge' line";
    case DimacsErrorKind::duplicate_problem_line: return "duplicate 'p' line";
    case DimacsErrorKind::edge_before_problem_line: return "edge before 'p' line";
    case DimacsErrorKind::endpoint_out_of_range: return "endpoint out of range";
    case DimacsErrorKind::bad_token: return "malformed line";
  }
  return "unknown";
}

class DimacsError : public std::runtime_error {
 public:
  DimacsError(DimacsErrorKind kind, int line, const std::string& detail = {})
      : std::runtime_error("line " + std::to_string(line) + ": " + to_string(kind) +
                           (detail.empty() ? "" : " (" + detail + ")")),
        kind_(kind),
        line_(line) {}

  DimacsErrorKind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }

 private:
  DimacsErrorKind kind_;
  int line_;
};

/// What the parser tolerated rather than rejected.
struct DimacsDiagnostics {
  std::int64_t declared_edges = 0;   // m from the p line
  std::int64_t edge_lines = 0;
  std::int64_t self_loops = 0;
  std::int64_t duplicate_edges = 0;  // includes reversed repeats
};

namespace detail {

inline bool parse_int(const std::string& token, std::int64_t& out) {
  if (token.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stoll(token, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == token.size();
}

}  // namespace detail

inline Graph parse_dimacs(std::istream& in, DimacsDiagnostics* diagnostics = nullptr) {
  DimacsDiagnostics diag;
  std::int64_t n = -1;
  int problem_line = 0;
  std::vector<std::pair<int, int>> edges;
  std::string line;
  int line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;  // blank
    if (tag == "c") continue;

    std::vector<std::string> rest;
    for (std::string tok; ss >> tok;) rest.push_back(std::move(tok));

    if (tag == "p") {
      if (problem_line != 0)
        throw DimacsError(DimacsErrorKind::duplicate_problem_line, line_no,
                          "first at line " + std::to_string(problem_line));
      std::int64_t nn = 0, mm = 0;
      if (rest.size() != 3 || (rest[0] != "edge" && rest[0] != "col") ||
          !detail::parse_int(rest[1], nn) || !detail::parse_int(rest[2], mm) || nn < 0 ||
          mm < 0 || nn > 100'000'000)
        throw DimacsError(DimacsErrorKind::bad_token, line_no, "expected 'p edge <n> <m>'");
      n = nn;
      diag.declared_edges = mm;
      problem_line = line_no;
      edges.reserve(static_cast<std::size_t>(std::min<std::int64_t>(mm, 50'000'000)));
    } else if (tag == "e") {
      if (problem_line == 0) throw DimacsError(DimacsErrorKind::edge_before_problem_line, line_no);
      std::int64_t u = 0, v = 0;
      if (rest.size() != 2 || !detail::parse_int(rest[0], u) || !detail::parse_int(rest[1], v))
        throw DimacsError(DimacsErrorKind::bad_token, line_no, "expected 'e <u> <v>'");
      if (u < 1 || u > n || v < 1 || v > n)
        throw DimacsError(DimacsErrorKind::endpoint_out_of_range, line_no,
                          std::to_string(u) + " " + std::to_string(v) + " not in 1.." +
                              std::to_string(n));
      ++diag.edge_lines;
      if (u == v) {
        ++diag.self_loops;
        continue;
      }
      edges.emplace_back(static_cast<int>(u - 1), static_cast<int>(v - 1));
    } else {
      throw DimacsError(DimacsErrorKind::bad_token, line_no, "unknown line tag '" + tag + "'");
    }
  }
  if (problem_line == 0) throw DimacsError(DimacsErrorKind::missing_problem_line, line_no);

  Graph g = Graph::from_edges(static_cast<int>(n), edges);
  diag.duplicate_edges = diag.edge_lines - diag.self_loops - g.edge_count();
  if (diagnostics) *diagnostics = diag;
  return g;
}

inline Graph parse_dimacs(const std::string& text, DimacsDiagnostics* diagnostics = nullptr) {
  std::istringstream in(text);
  return parse_dimacs(in, diagnostics);
}

inline void write_dimacs(std::ostream& out, const Graph& g) {
  out << "p edge " << g.n() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << "e " << u + 1 << ' ' << v + 1 << '\n';
}

// ---------------------------------------------------------------------------
// Connected components of induced subgraphs
// ---------------------------------------------------------------------------

/// Components of the subgraph induced by `subset`, singletons included.
/// Each component lists its vertices in discovery order; components are
/// ordered by their first vertex's position in `subset`.
inline std::vector<std::vector<int>> connected_components(const Graph& g,
                                                          std::span<const int> subset) {
  std::vector<std::vector<int>> components;
  if (subset.empty()) return components;
  // 0 = outside, 1 = in subset and unvisited, 2 = visited
  std::vector<unsigned char> state(static_cast<std::size_t>(g.n()), 0);
  for (int v : subset) state[v] = 1;
  for (int root : subset) {
    if (state[root] != 1) continue;
    std::vector<int> comp{root};
    state[root] = 2;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (int w : g.neighbors(comp[head])) {
        if (state[w] == 1) {
          state[w] = 2;
          comp.push_back(w);
        }
      }
    }
    components.push_back(std::move(comp));
  }
  return components;
}

}  // namespace sumcol
