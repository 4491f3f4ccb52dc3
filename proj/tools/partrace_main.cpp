// partrace: verify programs, run benchmark sweeps, generate synthetic tasks.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "partrace/bench.hpp"
#include "partrace/generator.hpp"
#include "partrace/parallel.hpp"

using namespace partrace;

namespace {

enum Exit : int {
  kSafe = 0,
  kUnsafe = 1,
  kUnknown = 2,
  kUsage = 3,
  kMismatch = 4,
  kInternal = 5,
};

struct EngineFlags {
  std::size_t workers = 1;
  std::string backend;
  int backend_delay_ms = 0;
  int solver_timeout_ms = 10000;
  int search_budget_ms = 5000;
  std::size_t max_refinements = 10000;
  double timeout_s = 0;
  std::string executor = "threaded";
};

void add_engine_flags(CLI::App* cmd, EngineFlags& f) {
  cmd->add_option("--backend", f.backend,
                  "builtin or smtlib:<command> (default: $PARTRACE_SOLVER, else builtin)");
  cmd->add_option("--backend-delay-ms", f.backend_delay_ms, "Sleep before every feasibility check")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--solver-timeout-ms", f.solver_timeout_ms, "Per-query external solver timeout")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--search-budget-ms", f.search_budget_ms, "Trace search budget per selection")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-refinements", f.max_refinements, "Refinement limit")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--timeout-s", f.timeout_s, "Wall-time limit, 0 for none")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--executor", f.executor, "Worker pool: threaded or sync")
      ->check(CLI::IsMember({"threaded", "sync"}));
}

BackendConfig backend_config(const EngineFlags& f) {
  BackendConfig c;
  if (!f.backend.empty()) {
    c.spec = f.backend;
  } else if (const char* env = std::getenv("PARTRACE_SOLVER"); env && *env) {
    c.spec = std::string(env) == "builtin" ? "builtin" : "smtlib:" + std::string(env);
  }
  c.delay = std::chrono::milliseconds(f.backend_delay_ms);
  c.solver_timeout = std::chrono::milliseconds(f.solver_timeout_ms);
  return c;
}

Limits limits_of(const EngineFlags& f) {
  Limits l;
  l.timeout = std::chrono::milliseconds(static_cast<long long>(f.timeout_s * 1000));
  l.max_refinements = f.max_refinements;
  l.search_budget = std::chrono::milliseconds(f.search_budget_ms);
  return l;
}

ExecutorKind executor_of(const EngineFlags& f) {
  return f.executor == "sync" ? ExecutorKind::Synchronous : ExecutorKind::Threaded;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

struct VerifyFlags {
  std::string file;
  std::string stats_csv;
  std::string event_log;
  std::string witness;
  std::string expect;
};

int run_verify(const VerifyFlags& vf, const EngineFlags& ef) {
  ProgramAutomaton program = load_program_file(vf.file);
  auto backend = make_backend(backend_config(ef));
  Verdict v = run_engine(program, ef.workers, backend, limits_of(ef), executor_of(ef));

  std::cout << to_string(v.kind);
  if (!v.reason.empty()) std::cout << " (" << v.reason << ")";
  std::cout << "\n";
  if (v.kind == VerdictKind::Unsafe) std::cout << format_witness(v);
  const double secs = std::chrono::duration<double>(v.stats.wall_time).count();
  std::cout << "workers=" << ef.workers << " refinements=" << v.stats.refinements
            << " traces_checked=" << v.stats.traces_checked
            << " wasted_results=" << v.stats.wasted_results
            << " final_states=" << v.stats.final_abstraction_states << " wall_time_s=" << secs
            << "\n";

  if (!vf.stats_csv.empty()) {
    auto out = open_output(vf.stats_csv);
    out << "program,workers,verdict,reason,wall_time_s,traces_checked,refinements,"
           "wasted_results,final_abstraction_states\r\n";
    out << csv_field(vf.file) << ',' << ef.workers << ',' << to_string(v.kind) << ','
        << csv_field(v.reason) << ',' << secs << ',' << v.stats.traces_checked << ','
        << v.stats.refinements << ',' << v.stats.wasted_results << ','
        << v.stats.final_abstraction_states << "\r\n";
  }
  if (!vf.event_log.empty()) {
    auto out = open_output(vf.event_log);
    for (const auto& e : v.stats.events) out << to_json_line(e) << "\n";
  }
  if (!vf.witness.empty() && v.kind == VerdictKind::Unsafe) {
    auto out = open_output(vf.witness);
    out << format_witness(v);
  }

  int code = v.kind == VerdictKind::Safe ? kSafe : v.kind == VerdictKind::Unsafe ? kUnsafe : kUnknown;
  if (!vf.expect.empty()) {
    Expectation e = parse_expectation(vf.expect);
    bool ok = e == Expectation::Any || (e == Expectation::Safe && v.kind == VerdictKind::Safe) ||
              (e == Expectation::Unsafe && v.kind == VerdictKind::Unsafe);
    if (!ok) {
      std::cerr << "expected " << to_string(e) << ", got " << to_string(v.kind) << "\n";
      return kMismatch;
    }
  }
  return code;
}

std::vector<std::size_t> parse_counts(const std::string& s) {
  std::vector<std::size_t> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    std::size_t pos = 0;
    unsigned long v = std::stoul(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("bad worker count '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty worker list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-abstraction safety verifier with parallel refinement"};
  app.require_subcommand(1);

  EngineFlags ef;
  VerifyFlags vf;
  auto* verify = app.add_subcommand("verify", "Verify one program (.imp source or .aut automaton)");
  verify->add_option("file", vf.file, "Program file")->required();
  verify->add_option("--workers", ef.workers, "Worker count, 0 for the sequential engine");
  add_engine_flags(verify, ef);
  verify->add_option("--stats-csv", vf.stats_csv, "Write run statistics as CSV");
  verify->add_option("--event-log", vf.event_log, "Write the assignment/result log (JSON lines)");
  verify->add_option("--emit-witness", vf.witness, "Write the counterexample when unsafe");
  verify->add_option("--expect", vf.expect, "Fail with exit 4 unless the verdict matches")
      ->check(CLI::IsMember({"safe", "unsafe", "any"}));

  EngineFlags bf;
  std::string suite_path, workers_list = "1,2,4", csv_path, summary_path;
  int reps = 3;
  auto* bench = app.add_subcommand("bench", "Sweep a suite over worker counts");
  bench->add_option("suite", suite_path, "Suite file with label,path,expected lines")->required();
  bench->add_option("--workers-list", workers_list, "Comma-separated worker counts");
  bench->add_option("--repetitions", reps, "Runs per configuration")->check(CLI::PositiveNumber);
  bench->add_option("--csv", csv_path, "Per-run CSV (default: stdout)");
  bench->add_option("--summary-csv", summary_path, "Median speedup CSV");
  add_engine_flags(bench, bf);

  std::string family = "branches", gen_out;
  int n = 4;
  std::uint64_t seed = 0;
  bool bug = false;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic program");
  gen->add_option("--kind", family, "branches, loops or mixed")
      ->check(CLI::IsMember({"branches", "loops", "mixed"}));
  gen->add_option("-n", n, "Number of blocks")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "Seed");
  gen->add_flag("--bug", bug, "Plant one reachable assertion failure");
  gen->add_option("-o,--output", gen_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*verify) return run_verify(vf, ef);
    if (*bench) {
      std::ifstream in(suite_path);
      if (!in) throw std::runtime_error("cannot read '" + suite_path + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      auto suite = parse_suite(buf.str(), std::filesystem::path(suite_path).parent_path().string());
      BenchConfig cfg;
      cfg.worker_counts = parse_counts(workers_list);
      cfg.repetitions = reps;
      cfg.backend = backend_config(bf);
      cfg.limits = limits_of(bf);
      cfg.executor = executor_of(bf);
      auto records = bench_sweep(suite, cfg);
      if (csv_path.empty()) {
        write_records_csv(std::cout, records);
      } else {
        auto out = open_output(csv_path);
        write_records_csv(out, records);
      }
      auto rows = summarize(records);
      if (!summary_path.empty()) {
        auto out = open_output(summary_path);
        write_summary_csv(out, rows);
      }
      for (const auto& r : rows) {
        std::cerr << r.label << " workers=" << r.workers << " median_s=" << r.median_wall_time_s
                  << " speedup=" << r.speedup << " correct=" << r.correct
                  << " incorrect=" << r.incorrect << "\n";
      }
      return 0;
    }
    if (*gen) {
      std::string text = gen_family(parse_family(family), n, seed, bug);
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        auto out = open_output(gen_out);
        out << text;
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << vf.file << ":" << e.what() << "\n";
    return kUsage;
  } catch (const AutomatonFormatError& e) {
    std::cerr << vf.file << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
