// sumcol: solve single graphs, run manifest benchmarks, compare reports.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sumcol/bench.hpp"

namespace fs = std::filesystem;
using namespace sumcol;

namespace {

struct RunFlags {
  std::string mode = "masc";
  int runs = 1;
  std::uint64_t seed = 1;
  std::string warm_start;
  std::vector<std::string> params;
  std::string out;
  std::string format = "json";
  int jobs = 1;
  bool timing = false;
  bool quiet = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--mode", f.mode, "masc, dnts, ts-n1 or ts-n2")
      ->check(CLI::IsMember({"masc", "dnts", "ts-n1", "ts-n2"}));
  cmd->add_option("--runs", f.runs, "independent runs per instance")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "base seed; run i uses a splitmix of (seed, i)");
  cmd->add_option("--warm-start", f.warm_start, "coloring file used as one initial solution");
  cmd->add_option("--param", f.params, "parameter override key=value (repeatable)");
  cmd->add_option("--out", f.out, "report destination (default: stdout)");
  cmd->add_option("--format", f.format, "report format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--jobs", f.jobs, "runs executed in parallel")->check(CLI::PositiveNumber);
  cmd->add_flag("--timing", f.timing, "record wall-clock times (reports are then not reproducible)");
  cmd->add_flag("--quiet", f.quiet, "no progress lines on stderr");
}

RunParams make_params(const RunFlags& f) {
  RunParams p;
  for (const auto& kv : f.params) set_param(p, kv);
  p.timing = f.timing;
  p.jobs = f.jobs;
  p.masc.validate();
  return p;
}

void emit(const std::vector<RunReport>& reports, const RunFlags& f) {
  const ReportFormat fmt = f.format == "csv" ? ReportFormat::csv : ReportFormat::json;
  if (!f.out.empty()) {
    emit_report(reports, fmt, f.out);
    return;
  }
  if (fmt == ReportFormat::csv) write_csv(std::cout, reports);
  else write_json(std::cout, reports);
}

void progress(const RunFlags& f, const RunReport& r) {
  if (f.quiet) return;
  std::cerr << r.name << " [" << to_string(r.mode) << "] best=" << r.sum_best << " (k=" << r.k_best
            << ") avg=" << format_number(r.avg);
  if (r.sr) std::cerr << " sr=" << format_number(*r.sr);
  std::cerr << '\n';
}

void write_solution(const fs::path& file, const Coloring& c, const Graph& g) {
  {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    write_coloring(out, c);
  }
  // re-read as a check of what went to disk
  if (load_coloring(file, g).sum() != c.sum())
    throw std::logic_error(file.string() + ": written coloring does not re-validate");
}

int solve(const std::string& file, std::optional<std::int64_t> best_known,
          const std::string& solution_out, const RunFlags& f) {
  const RunParams params = make_params(f);
  Graph g = load_graph(file);
  std::optional<Coloring> warm;
  if (!f.warm_start.empty()) warm = load_coloring(f.warm_start, g);
  const std::string name = fs::path(file).stem().string();
  std::vector<RunReport> reports{
      run_instance(g, name, best_known, parse_mode(f.mode), f.runs, f.seed, params, warm)};
  progress(f, reports.front());
  if (!solution_out.empty()) write_solution(solution_out, reports.front().best, g);
  emit(reports, f);
  return 0;
}

int bench(const std::string& manifest, const std::vector<std::string>& only,
          const std::string& solution_dir, const RunFlags& f) {
  const RunParams params = make_params(f);
  std::vector<InstanceRecord> records = load_manifest(manifest);
  if (!f.warm_start.empty() && records.size() != 1 && only.size() != 1)
    throw std::invalid_argument("--warm-start needs a single instance (use --only)");
  std::vector<RunReport> reports;
  for (const auto& rec : records) {
    if (!only.empty() && std::find(only.begin(), only.end(), rec.name) == only.end()) continue;
    Graph g = load_instance(rec);
    std::optional<Coloring> warm;
    if (!f.warm_start.empty()) warm = load_coloring(f.warm_start, g);
    reports.push_back(
        run_instance(g, rec.name, rec.best_known, parse_mode(f.mode), f.runs, f.seed, params, warm));
    progress(f, reports.back());
    if (!solution_dir.empty())
      write_solution(fs::path(solution_dir) / (rec.name + ".sol"), reports.back().best, g);
  }
  emit(reports, f);
  return 0;
}

std::vector<RunReport> read_reports(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file);
  nlohmann::json j = nlohmann::json::parse(in);
  std::vector<RunReport> out;
  for (const auto& r : j) out.push_back(report_from_json(r));
  return out;
}

// Welch test per instance present in both reports, on the per-run f values.
int compare(const std::string& a_file, const std::string& b_file) {
  std::map<std::string, RunReport> b;
  for (auto& r : read_reports(b_file)) b.emplace(r.name, std::move(r));
  std::cout << "name,mode_a,mode_b,avg_a,avg_b,t,df,p,significant,degenerate\n";
  for (const auto& a : read_reports(a_file)) {
    auto it = b.find(a.name);
    if (it == b.end()) continue;
    std::vector<double> xa, xb;
    for (const auto& row : a.rows) xa.push_back(static_cast<double>(row.f));
    for (const auto& row : it->second.rows) xb.push_back(static_cast<double>(row.f));
    const TTestResult t = welch_t_test(xa, xb);
    std::cout << a.name << ',' << to_string(a.mode) << ',' << to_string(it->second.mode) << ','
              << format_number(a.avg) << ',' << format_number(it->second.avg) << ','
              << format_number(t.t) << ',' << format_number(t.df) << ',' << format_number(t.p_value)
              << ',' << (t.significant ? "yes" : "no") << ',' << (t.degenerate ? "yes" : "no") << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum sum coloring solver and benchmark harness"};
  app.require_subcommand(1);

  RunFlags solve_flags;
  std::string graph_file;
  std::optional<std::int64_t> best_known;
  std::string solution_out;
  auto* solve_cmd = app.add_subcommand("solve", "run the solver on one DIMACS graph");
  solve_cmd->add_option("file", graph_file, "DIMACS .col file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--best-known", best_known, "known chromatic sum, enables the sr field");
  solve_cmd->add_option("--solution-out", solution_out, "write the best coloring found");
  add_run_flags(solve_cmd, solve_flags);

  RunFlags bench_flags;
  std::string manifest;
  std::vector<std::string> only;
  std::string solution_dir;
  auto* bench_cmd = app.add_subcommand("bench", "run every instance of a manifest");
  bench_cmd->add_option("manifest", manifest, "instance manifest")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--only", only, "restrict to these instance names");
  bench_cmd->add_option("--solution-dir", solution_dir, "write <name>.sol per instance")
      ->check(CLI::ExistingDirectory);
  add_run_flags(bench_cmd, bench_flags);

  std::string report_a, report_b;
  auto* compare_cmd = app.add_subcommand("compare", "Welch t-tests between two JSON reports");
  compare_cmd->add_option("a", report_a, "first report")->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("b", report_b, "second report")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return solve(graph_file, best_known, solution_out, solve_flags);
    if (*bench_cmd) return bench(manifest, only, solution_dir, bench_flags);
    if (*compare_cmd) return compare(report_a, report_b);
  } catch (const std::exception& e) {
    std::cerr << "sumcol: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
