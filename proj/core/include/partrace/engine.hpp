#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "partrace/feasibility.hpp"
#include "partrace/nfa.hpp"
#include "partrace/program.hpp"
#include "partrace/solver.hpp"

namespace partrace {

using Clock = std::chrono::steady_clock;

struct Limits {
  /// Wall-time budget; zero means none.
  std::chrono::milliseconds timeout{0};
  std::size_t max_refinements = 10000;
  /// Per selection call of the parallel coordinator.
  std::chrono::milliseconds search_budget{5000};
  /// Parallel only: once this many traces came back UNKNOWN the coordinator
  /// stops handing out work and the run ends UNKNOWN (unless a pending
  /// result is SAT).
  std::size_t max_unresolved = 32;
  SolverLimits solver;
};

/// A point in time after which work should stop; default is never.
class Deadline {
 public:
  Deadline() = default;
  static Deadline after(std::chrono::milliseconds d) {
    Deadline x;
    x.at_ = Clock::now() + d;
    return x;
  }
  static Deadline from_timeout(std::chrono::milliseconds d) {
    return d.count() > 0 ? after(d) : Deadline();
  }
  bool expired() const { return at_ && Clock::now() >= *at_; }
  const std::optional<Clock::time_point>& at() const { return at_; }
  Deadline min(const Deadline& o) const {
    if (!at_) return o;
    if (!o.at_) return *this;
    return *at_ <= *o.at_ ? *this : o;
  }

 private:
  std::optional<Clock::time_point> at_;
};

enum class VerdictKind { Safe, Unsafe, Unknown };

std::string to_string(VerdictKind k);

/// One line of the run log.
struct Event {
  double time_ms = 0;
  /// "assign", "result" or "verdict".
  std::string kind;
  int worker = -1;
  std::uint64_t sequence_no = 0;
  std::uint64_t trace_hash = 0;
  std::string trace;
  std::size_t abstraction_size = 0;
  /// SAT / UNSAT / UNKNOWN for results, the verdict for "verdict".
  std::string outcome;
};

/// JSON object on one line.
std::string to_json_line(const Event& e, bool with_time = true);

struct IterationRecord {
  std::string trace;
  std::size_t trace_length = 0;
  SatStatus verdict = SatStatus::Unknown;
  /// Abstraction size after processing.
  std::size_t abstraction_states = 0;
};

struct RunStats {
  std::size_t refinements = 0;
  std::size_t traces_checked = 0;
  std::chrono::nanoseconds wall_time{0};
  std::size_t final_abstraction_states = 0;
  /// In check order.
  std::vector<IterationRecord> iterations;
  /// Parallel only.
  std::size_t wasted_results = 0;
  std::vector<std::chrono::nanoseconds> worker_busy;
  std::size_t empty_wakeups = 0;
  std::vector<Event> events;
};

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  /// Unsafe: a feasible error trace, its initial state and havoc values.
  std::optional<Trace> witness;
  std::map<std::string, Int> model;
  std::vector<Int> havoc_values;
  std::string reason;
  RunStats stats;
};

/// Breadth-first CEGAR loop.
Verdict verify_sequential(const ProgramAutomaton& program, const FeasibilityBackend& backend,
                          const Limits& limits = {});

/// Replayable witness text: one `init x=v` line per variable, one line per
/// operation (havoc lines carry the chosen value).
std::string format_witness(const Verdict& v);

}  // namespace partrace
