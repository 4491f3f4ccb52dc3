#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "partrace/engine.hpp"

namespace partrace {

struct WorkItem {
  Trace trace;
  /// Abstraction current at assignment time.
  std::shared_ptr<const Nfa> snapshot;
  std::uint64_t sequence_no = 0;
};

struct WorkResult {
  std::uint64_t sequence_no = 0;
  Trace trace;
  SatStatus verdict = SatStatus::Unknown;
  std::map<std::string, Int> model;
  std::vector<Int> havoc_values;
  /// Interpolant automaton on Unsat, the empty-language automaton otherwise.
  Nfa automaton{nullptr};
  std::string reason;
  int worker = -1;
  std::chrono::nanoseconds busy{0};
};

/// Feasibility check, then interpolant automaton against the snapshot.
/// Backend failures become Unknown results.
WorkResult worker_run(const WorkItem& item, const FeasibilityBackend& backend,
                      const SolverLimits& limits = {});

/// Runs work items on a fixed pool of N workers.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual std::size_t pool_size() const = 0;
  /// Returns the worker the item is bound to, or -1 if any idle one takes it.
  virtual int submit(WorkItem item) = 0;
  /// Blocks until at least one result exists (or the deadline passes), then
  /// returns every available result.
  virtual std::vector<WorkResult> wait_and_drain(const Deadline& deadline) = 0;
  /// Times the coordinator woke up and found no result.
  virtual std::size_t empty_wakeups() const = 0;
};

/// Long-lived worker threads fed through a bounded work queue; results come
/// back through a second queue.
std::unique_ptr<Executor> make_threaded_executor(std::size_t workers,
                                                 std::shared_ptr<const FeasibilityBackend> backend,
                                                 SolverLimits limits = {});

/// Deterministic stand-in: items are bound to workers round-robin and each
/// wait runs exactly the oldest pending item inline.
std::unique_ptr<Executor> make_synchronous_executor(
    std::size_t workers, std::shared_ptr<const FeasibilityBackend> backend,
    SolverLimits limits = {});

struct SearchOutcome {
  std::optional<Trace> trace;
  bool budget_exceeded = false;
};

/// Prefers successors that start fewer relevant traces; never returns a
/// member of `relevant`. `relevant` traces are expected to extend `prefix`.
SearchOutcome diverse_search(const Nfa& a, State q, const Trace& prefix,
                             const std::vector<Trace>& relevant, const Deadline& deadline = {});

struct CoordinatorState {
  Nfa abstraction;
  /// Handed out, result not yet processed.
  std::set<Trace> assigned;
  /// Returned Unknown; never handed out again.
  std::set<Trace> unresolved;
  std::size_t outstanding = 0;
};

/// First selection of a phase tries the shortest trace; otherwise (or when
/// that one is taken) the diverse search runs with assigned ∪ unresolved.
SearchOutcome select_next(const CoordinatorState& state, bool first_in_phase,
                          const Deadline& deadline);

enum class ExecutorKind { Threaded, Synchronous };

struct ParallelOptions {
  std::size_t workers = 1;
  ExecutorKind executor = ExecutorKind::Threaded;
};

Verdict verify_parallel(const ProgramAutomaton& program,
                        std::shared_ptr<const FeasibilityBackend> backend,
                        const ParallelOptions& options, const Limits& limits = {});

}  // namespace partrace
