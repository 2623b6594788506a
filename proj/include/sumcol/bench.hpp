#pragma once

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "sumcol/coloring.hpp"
#include "sumcol/dnts.hpp"
#include "sumcol/graph.hpp"
#include "sumcol/init.hpp"
#include "sumcol/memetic.hpp"
#include "sumcol/rng.hpp"

namespace sumcol {

// ---------------------------------------------------------------------------
// Instance manifests
// ---------------------------------------------------------------------------

/// One benchmark graph with its published bounds.
struct InstanceRecord {
  std::string name;
  std::filesystem::path path;
  int n = 0;
  std::int64_t m = 0;
  std::optional<std::int64_t> best_known;  // chromatic sum or upper bound
  bool bound_is_exact = false;
  std::optional<int> gcp_k;
};

class ManifestError : public std::runtime_error {
 public:
  ManifestError(int line, const std::string& what)
      : std::runtime_error("manifest line " + std::to_string(line) + ": " + what) {}
};

/// Line format: `name path n m sum_or_dash exact_or_ub k_or_dash`; '#' starts
/// a comment. Relative paths resolve against `base_dir`.
inline std::vector<InstanceRecord> parse_manifest(std::istream& in,
                                                  const std::filesystem::path& base_dir = {}) {
  std::vector<InstanceRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 7) throw ManifestError(line_no, "expected 7 fields");

    InstanceRecord r;
    r.name = tok[0];
    r.path = std::filesystem::path(tok[1]);
    if (r.path.is_relative()) r.path = base_dir / r.path;
    std::int64_t n = 0;
    if (!detail::parse_int(tok[2], n) || n < 0) throw ManifestError(line_no, "bad vertex count");
    if (!detail::parse_int(tok[3], r.m) || r.m < 0) throw ManifestError(line_no, "bad edge count");
    r.n = static_cast<int>(n);
    if (tok[4] != "-") {
      std::int64_t s = 0;
      if (!detail::parse_int(tok[4], s) || s <= 0) throw ManifestError(line_no, "bad best-known sum");
      r.best_known = s;
      if (tok[5] == "exact") r.bound_is_exact = true;
      else if (tok[5] != "ub") throw ManifestError(line_no, "bound kind must be 'exact' or 'ub'");
    } else if (tok[5] != "-") {
      throw ManifestError(line_no, "bound kind given without a sum");
    }
    if (tok[6] != "-") {
      std::int64_t k = 0;
      if (!detail::parse_int(tok[6], k) || k <= 0) throw ManifestError(line_no, "bad k");
      r.gcp_k = static_cast<int>(k);
    }
    records.push_back(std::move(r));
  }
  return records;
}

inline std::vector<InstanceRecord> load_manifest(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open manifest " + file.string());
  return parse_manifest(in, file.parent_path());
}

inline Graph load_graph(const std::filesystem::path& file, DimacsDiagnostics* diag = nullptr) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open graph " + file.string());
  try {
    return parse_dimacs(in, diag);
  } catch (const DimacsError& e) {
    throw std::runtime_error(file.string() + ": " + e.what());
  }
}

/// Loads the record's graph and checks it against the recorded n and m.
inline Graph load_instance(const InstanceRecord& r) {
  Graph g = load_graph(r.path);
  if (g.n() != r.n || g.edge_count() != r.m)
    throw std::runtime_error(r.name + ": file has n=" + std::to_string(g.n()) +
                             " m=" + std::to_string(g.edge_count()) + ", manifest says n=" +
                             std::to_string(r.n) + " m=" + std::to_string(r.m));
  return g;
}

inline Coloring load_coloring(const std::filesystem::path& file, const Graph& g) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open coloring " + file.string());
  try {
    return read_coloring(in, g);
  } catch (const ColoringFormatError& e) {
    throw std::runtime_error(file.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

enum class Mode { masc, dnts, ts_n1, ts_n2 };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::masc: return "masc";
    case Mode::dnts: return "dnts";
    case Mode::ts_n1: return "ts-n1";
    case Mode::ts_n2: return "ts-n2";
  }
  return "?";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "masc") return Mode::masc;
  if (s == "dnts") return Mode::dnts;
  if (s == "ts-n1") return Mode::ts_n1;
  if (s == "ts-n2") return Mode::ts_n2;
  throw std::invalid_argument("unknown mode '" + s + "' (masc, dnts, ts-n1, ts-n2)");
}

struct RunParams {
  MascParams masc;
  std::int64_t single_budget = 500'000;  // iteration budget of the dnts/ts-n1/ts-n2 modes
  std::optional<double> time_limit_s;    // off by default
  bool timing = false;                   // record wall-clock fields
  int jobs = 1;
};

/// Applies one `key=value` override.
inline void set_param(RunParams& p, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("expected key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  auto integer = [&]() {
    std::int64_t v = 0;
    if (!detail::parse_int(value, v)) throw std::invalid_argument(key + ": expected an integer");
    return v;
  };
  auto real = [&]() {
    try {
      std::size_t pos = 0;
      const double v = std::stod(value, &pos);
      if (pos != value.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument(key + ": expected a number");
    }
  };
  if (key == "p1") p.masc.dnts.p1 = integer();
  else if (key == "p2") p.masc.dnts.p2 = integer();
  else if (key == "p3") p.masc.dnts.p3 = integer();
  else if (key == "p4") p.masc.dnts.p4 = integer();
  else if (key == "generations") p.masc.max_generations = static_cast<int>(integer());
  else if (key == "population") p.masc.population_size = static_cast<int>(integer());
  else if (key == "replace_prob") p.masc.replace_second_worst_probability = real();
  else if (key == "allow_smaller_population") p.masc.allow_smaller_population = integer() != 0;
  else if (key == "ts_budget") p.single_budget = integer();
  else if (key == "tabucol_iters") p.masc.tabucol.iterations_per_k = integer();
  else if (key == "tabucol_restarts") p.masc.tabucol.restarts_per_k = static_cast<int>(integer());
  else if (key == "tabucol_tenure_base") p.masc.tabucol.tenure_base = static_cast<int>(integer());
  else if (key == "tabucol_tenure_slope") p.masc.tabucol.tenure_slope = real();
  else if (key == "init_attempts") p.masc.tabucol.population_attempts = static_cast<int>(integer());
  else if (key == "time_limit") p.time_limit_s = real();
  else throw std::invalid_argument("unknown parameter '" + key + "'");
}

struct RunRow {
  std::uint64_t seed = 0;
  std::int64_t f = 0;
  int k = 0;
  std::int64_t iterations = 0;
  std::optional<double> seconds;          // wall time of the run
  std::optional<double> seconds_to_best;  // wall time until its final best was found
};

struct RunReport {
  std::string name;
  int n = 0;
  std::int64_t m = 0;
  std::optional<std::int64_t> best_known;
  Mode mode = Mode::masc;
  int runs = 0;
  std::uint64_t base_seed = 0;
  std::int64_t sum_best = 0;          // best f over runs
  int k_best = 0;                     // classes of that coloring
  std::optional<double> sr;           // runs with f <= best_known, as a fraction
  double avg = 0;
  double sigma = 0;                   // population standard deviation
  std::optional<double> time_min;     // mean minutes to reach sum_best over runs that did
  std::vector<RunRow> rows;
  Coloring best;
};

/// Summary statistics from the per-run rows.
inline void summarize(RunReport& r) {
  r.runs = static_cast<int>(r.rows.size());
  if (r.rows.empty()) return;
  std::size_t best = 0;
  double total = 0;
  int successes = 0;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (r.rows[i].f < r.rows[best].f) best = i;
    total += static_cast<double>(r.rows[i].f);
    if (r.best_known && r.rows[i].f <= *r.best_known) ++successes;
  }
  r.sum_best = r.rows[best].f;
  r.k_best = r.rows[best].k;
  r.avg = total / static_cast<double>(r.rows.size());
  double sq = 0;
  for (const auto& row : r.rows) sq += (static_cast<double>(row.f) - r.avg) * (static_cast<double>(row.f) - r.avg);
  r.sigma = std::sqrt(sq / static_cast<double>(r.rows.size()));
  r.sr.reset();
  if (r.best_known) r.sr = static_cast<double>(successes) / static_cast<double>(r.rows.size());
  r.time_min.reset();
  double t = 0;
  int timed = 0;
  for (const auto& row : r.rows) {
    if (row.f == r.sum_best && row.seconds_to_best) {
      t += *row.seconds_to_best;
      ++timed;
    }
  }
  if (timed > 0) r.time_min = t / timed / 60.0;
}

/// Start coloring of the single-solution modes: the TABUCOL coloring at
/// the smallest k the descent reached.
inline Coloring initial_solution(const Graph& g, const TabucolParams& params, Rng& rng) {
  Descent d = descend_k(g, params, rng);
  if (d.coloring) return *d.coloring;
  if (auto c = tabucol_with_restarts(g, d.k, params, rng)) return canonical_relabel(*c);
  return canonical_relabel(greedy_coloring(g));
}

struct RunOutcome {
  RunRow row;
  Coloring best;
};

inline RunOutcome run_once(const Graph& g, const std::string& name, Mode mode, std::uint64_t seed,
                           const RunParams& params, const std::optional<Coloring>& warm_start) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  std::optional<clock::time_point> deadline;
  if (params.time_limit_s)
    deadline = t0 + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(*params.time_limit_s));
  double to_best = 0;
  auto stamp = [&] { to_best = std::chrono::duration<double>(clock::now() - t0).count(); };

  Rng rng(seed);
  RunOutcome out;
  out.row.seed = seed;
  if (mode == Mode::masc) {
    MascOptions opts;
    opts.name = name;
    opts.deadline = deadline;
    if (warm_start) opts.seeds.push_back(*warm_start);
    opts.on_improvement = [&](std::int64_t, int) { stamp(); };
    MascResult res = masc(g, params.masc, rng, opts);
    out.best = res.best;
    out.row.iterations = res.iterations;
  } else {
    DntsParams dp = params.masc.dnts;
    dp.p4 = params.single_budget;
    DntsHooks hooks;
    hooks.deadline = deadline;
    hooks.on_improvement = [&](std::int64_t, std::int64_t) { stamp(); };
    Coloring start = warm_start ? canonical_relabel(*warm_start)
                                : initial_solution(g, params.masc.tabucol, rng);
    stamp();
    Dnts search(g, dp, rng, hooks);
    const NeighborhoodSet set = mode == Mode::dnts    ? NeighborhoodSet::both
                                : mode == Mode::ts_n1 ? NeighborhoodSet::exchange_only
                                                      : NeighborhoodSet::one_move_only;
    DntsResult res = search.run(start, set);
    out.best = res.best;
    out.row.iterations = res.iterations;
  }
  if (!is_proper(out.best, g) || out.best.sum() != sum_value(out.best))
    throw std::logic_error(name + ": solver returned an invalid coloring");
  out.row.f = out.best.sum();
  out.row.k = out.best.k();
  if (params.timing) {
    out.row.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    out.row.seconds_to_best = to_best;
  }
  return out;
}

/// `runs` independent runs; run i uses seed derive_seed(base_seed, i).
/// Runs may execute on `params.jobs` threads; results are the same for any
/// job count.
inline RunReport run_instance(const Graph& g, const std::string& name,
                              std::optional<std::int64_t> best_known, Mode mode, int runs,
                              std::uint64_t base_seed, const RunParams& params,
                              const std::optional<Coloring>& warm_start = std::nullopt) {
  if (runs < 1) throw std::invalid_argument("runs must be positive");
  params.masc.validate();
  if (mode != Mode::masc && params.single_budget < params.masc.dnts.p3)
    throw std::invalid_argument("ts_budget must be at least p3");
  if (warm_start && (warm_start->n() != g.n() || !is_proper(*warm_start, g)))
    throw std::invalid_argument(name + ": warm-start coloring is not a proper coloring of the graph");

  std::vector<RunOutcome> outcomes(static_cast<std::size_t>(runs));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(runs));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i; (i = next.fetch_add(1)) < runs;) {
      try {
        outcomes[i] = run_once(g, name, mode, derive_seed(base_seed, static_cast<std::uint64_t>(i)),
                               params, warm_start);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min(params.jobs, runs));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  RunReport r;
  r.name = name;
  r.n = g.n();
  r.m = g.edge_count();
  r.best_known = best_known;
  r.mode = mode;
  r.base_seed = base_seed;
  std::size_t best = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    r.rows.push_back(outcomes[i].row);
    if (outcomes[i].row.f < outcomes[best].row.f) best = i;
  }
  r.best = outcomes[best].best;
  summarize(r);
  return r;
}

inline RunReport run_instance(const InstanceRecord& record, Mode mode, int runs,
                              std::uint64_t base_seed, const RunParams& params,
                              const std::optional<std::filesystem::path>& warm_start_file = std::nullopt) {
  Graph g = load_instance(record);
  std::optional<Coloring> warm;
  if (warm_start_file) warm = load_coloring(*warm_start_file, g);
  return run_instance(g, record.name, record.best_known, mode, runs, base_seed, params, warm);
}

// ---------------------------------------------------------------------------
// Welch's t-test
// ---------------------------------------------------------------------------

struct TTestResult {
  double t = 0;
  double df = 0;
  double p_value = 1;
  bool significant = false;  // two-sided, 95%
  bool degenerate = false;   // both samples have zero variance
};

inline TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("welch_t_test: each sample needs at least 2 values");
  auto moments = [](std::span<const double> x) {
    double mean = 0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::pair{mean, ss / static_cast<double>(x.size() - 1)};
  };
  const auto [ma, va] = moments(a);
  const auto [mb, vb] = moments(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  TTestResult r;
  const double se2 = va / na + vb / nb;
  if (se2 == 0) {
    r.degenerate = true;
    r.t = ma == mb ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), ma - mb);
    r.df = na + nb - 2;
    r.p_value = ma == mb ? 1.0 : 0.0;
    return r;
  }
  r.t = (ma - mb) / std::sqrt(se2);
  r.df = se2 * se2 / ((va / na) * (va / na) / (na - 1) + (vb / nb) * (vb / nb) / (nb - 1));
  boost::math::students_t dist(r.df);
  r.p_value = 2 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
  r.significant = r.p_value < 0.05;
  return r;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Shortest round-trip decimal form.
inline std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline const char* csv_header() {
  return "name,n,m,best_known,mode,sum_best,k_best,sr,avg,sigma,time_min,runs,seed";
}

inline void write_csv(std::ostream& out, std::span<const RunReport> reports) {
  out << csv_header() << '\n';
  for (const auto& r : reports) {
    out << r.name << ',' << r.n << ',' << r.m << ',';
    if (r.best_known) out << *r.best_known;
    out << ',' << to_string(r.mode) << ',' << r.sum_best << ',' << r.k_best << ',';
    if (r.sr) out << format_number(*r.sr);
    out << ',' << format_number(r.avg) << ',' << format_number(r.sigma) << ',';
    if (r.time_min) out << format_number(*r.time_min);
    out << ',' << r.runs << ',' << r.base_seed << '\n';
  }
}

inline nlohmann::ordered_json to_json(const RunReport& r) {
  using nlohmann::ordered_json;
  auto opt = [](const auto& o) -> ordered_json { return o ? ordered_json(*o) : ordered_json(nullptr); };
  ordered_json j;
  j["name"] = r.name;
  j["n"] = r.n;
  j["m"] = r.m;
  j["best_known"] = opt(r.best_known);
  j["mode"] = to_string(r.mode);
  j["sum_best"] = r.sum_best;
  j["k_best"] = r.k_best;
  j["sr"] = opt(r.sr);
  j["avg"] = r.avg;
  j["sigma"] = r.sigma;
  j["time_min"] = opt(r.time_min);
  j["runs"] = r.runs;
  j["seed"] = r.base_seed;
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json x;
    x["seed"] = row.seed;
    x["f"] = row.f;
    x["k"] = row.k;
    x["iterations"] = row.iterations;
    x["seconds"] = opt(row.seconds);
    x["seconds_to_best"] = opt(row.seconds_to_best);
    rows.push_back(std::move(x));
  }
  j["per_run"] = std::move(rows);
  return j;
}

inline void write_json(std::ostream& out, std::span<const RunReport> reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  out << arr.dump(2) << '\n';
}

enum class ReportFormat { csv, json };

inline void emit_report(std::span<const RunReport> reports, ReportFormat format,
                        const std::filesystem::path& destination) {
  std::ofstream out(destination);
  if (!out) throw std::runtime_error("cannot write report to " + destination.string());
  if (format == ReportFormat::csv) write_csv(out, reports);
  else write_json(out, reports);
  if (!out) throw std::runtime_error("error writing " + destination.string());
}

/// Per-run rows of a JSON report, keyed back to summaries (inverse of to_json
/// for the fields statistics depend on).
inline RunReport report_from_json(const nlohmann::json& j) {
  RunReport r;
  r.name = j.at("name").get<std::string>();
  r.n = j.at("n").get<int>();
  r.m = j.at("m").get<std::int64_t>();
  if (!j.at("best_known").is_null()) r.best_known = j.at("best_known").get<std::int64_t>();
  r.mode = parse_mode(j.at("mode").get<std::string>());
  r.base_seed = j.at("seed").get<std::uint64_t>();
  for (const auto& x : j.at("per_run")) {
    RunRow row;
    row.seed = x.at("seed").get<std::uint64_t>();
    row.f = x.at("f").get<std::int64_t>();
    row.k = x.at("k").get<int>();
    row.iterations = x.at("iterations").get<std::int64_t>();
    if (!x.at("seconds").is_null()) row.seconds = x.at("seconds").get<double>();
    if (!x.at("seconds_to_best").is_null()) row.seconds_to_best = x.at("seconds_to_best").get<double>();
    r.rows.push_back(row);
  }
  summarize(r);
  return r;
}

}  // namespace sumcol
