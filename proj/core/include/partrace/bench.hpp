#pragma once

#include <chrono>
#include <iosfwd>
#include <string>
#include <vector>

#include "partrace/engine.hpp"
#include "partrace/parallel.hpp"

namespace partrace {

enum class Expectation { Safe, Unsafe, Any };

/// Throws std::invalid_argument.
Expectation parse_expectation(const std::string& token);
std::string to_string(Expectation e);

struct TaskSpec {
  std::string label;
  std::string path;
  Expectation expected = Expectation::Any;
  /// Program text; when empty the program is read from `path`.
  std::string source;
};

/// Suite file: one `label,path,expected` line per task; `#` starts a
/// comment. Relative paths are resolved against `base_dir`.
std::vector<TaskSpec> parse_suite(const std::string& text, const std::string& base_dir = {});

/// Reads a program: `.aut` files use the automaton format, anything else
/// the source language. Throws ParseError, AutomatonFormatError or
/// std::runtime_error.
ProgramAutomaton load_program_file(const std::string& path);
ProgramAutomaton load_program_text(const std::string& text, bool automaton_format);

struct BenchRecord {
  std::string label;
  std::size_t workers = 0;
  int repetition = 0;
  VerdictKind verdict = VerdictKind::Unknown;
  std::string reason;
  Expectation expected = Expectation::Any;
  bool correct = false;
  double wall_time_s = 0;
  std::size_t traces_checked = 0;
  std::size_t refinements = 0;
  std::size_t wasted_results = 0;
};

struct BenchConfig {
  /// 0 selects the sequential engine.
  std::vector<std::size_t> worker_counts{1, 2, 4};
  int repetitions = 3;
  BackendConfig backend;
  Limits limits;
  ExecutorKind executor = ExecutorKind::Threaded;
};

/// Runs every (task, worker count) pair `repetitions` times, strictly one
/// after another. Failures become Unknown rows.
std::vector<BenchRecord> bench_sweep(const std::vector<TaskSpec>& suite, const BenchConfig& config);

/// Runs one configuration; wall time covers only the engine.
Verdict run_engine(const ProgramAutomaton& program, std::size_t workers,
                   std::shared_ptr<const FeasibilityBackend> backend, const Limits& limits,
                   ExecutorKind executor = ExecutorKind::Threaded);

struct SpeedupRow {
  std::string label;
  std::size_t workers = 0;
  double median_wall_time_s = 0;
  /// Median wall time at one worker divided by this row's; 0 if unknown.
  double speedup = 0;
  std::size_t correct = 0;
  std::size_t incorrect = 0;
};

std::vector<SpeedupRow> summarize(const std::vector<BenchRecord>& records);

/// RFC 4180 quoting.
std::string csv_field(const std::string& s);
void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<SpeedupRow>& rows);

}  // namespace partrace
