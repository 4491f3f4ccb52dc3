#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "partrace/nfa.hpp"
#include "partrace/predicate.hpp"
#include "partrace/solver.hpp"
#include "partrace/ssa.hpp"

namespace partrace {

/// A backend could not produce an answer at all (as opposed to UNKNOWN).
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decides satisfiability of SSA formulas. Implementations must tolerate
/// concurrent calls.
class FeasibilityBackend {
 public:
  virtual ~FeasibilityBackend() = default;
  virtual std::string name() const = 0;
  /// Models are over SSA names. Throws BackendError.
  virtual SatResult check(const SsaFormula& f) const = 0;
};

class BuiltinBackend : public FeasibilityBackend {
 public:
  explicit BuiltinBackend(SolverLimits limits = {}) : limits_(limits) {}
  std::string name() const override { return "builtin"; }
  SatResult check(const SsaFormula& f) const override;

 private:
  SolverLimits limits_;
};

/// One solver process per query, talking SMT-LIB2 over stdin/stdout.
class SmtLibBackend : public FeasibilityBackend {
 public:
  SmtLibBackend(std::string command, std::chrono::milliseconds timeout);
  std::string name() const override { return "smtlib:" + command_; }
  SatResult check(const SsaFormula& f) const override;

 private:
  std::string command_;
  std::chrono::milliseconds timeout_;
};

/// Sleeps before delegating; emulates an expensive solver.
class DelayBackend : public FeasibilityBackend {
 public:
  DelayBackend(std::shared_ptr<const FeasibilityBackend> inner, std::chrono::milliseconds delay)
      : inner_(std::move(inner)), delay_(delay) {}
  std::string name() const override { return inner_->name(); }
  SatResult check(const SsaFormula& f) const override;

 private:
  std::shared_ptr<const FeasibilityBackend> inner_;
  std::chrono::milliseconds delay_;
};

struct BackendConfig {
  /// "builtin" or "smtlib:<command line>".
  std::string spec = "builtin";
  std::chrono::milliseconds delay{0};
  std::chrono::milliseconds solver_timeout{10000};
  SolverLimits limits;
};

/// Throws std::invalid_argument for an unrecognized spec.
std::shared_ptr<const FeasibilityBackend> make_backend(const BackendConfig& config);

/// The SMT-LIB2 script sent to external solvers.
std::string smtlib_script(const SsaFormula& f);

/// Runs `command` on the script for `f`. Throws BackendError on launch
/// failure or protocol violation; timeouts give Unknown.
SatResult smtlib_check(const SsaFormula& f, const std::string& command,
                       std::chrono::milliseconds timeout);

struct FeasibilityResult {
  SatStatus verdict = SatStatus::Unknown;
  /// Sat: initial values of every variable in the trace.
  std::map<std::string, Int> model;
  /// Sat: the value taken by each havoc, in order.
  std::vector<Int> havoc_values;
  /// Unsat: |t|+1 predicates, true first and false last.
  std::vector<Predicate> interpolants;
  std::string reason;
};

/// Checks `t` with `backend`. Interpolants always come from the builtin
/// transformers. Throws BackendError.
FeasibilityResult check_trace(const Trace& t, const FeasibilityBackend& backend,
                              const SolverLimits& limits = {});

/// Inductive sequence for an infeasible trace: the strongest-postcondition
/// chain, else the weakest-precondition chain; nullopt if neither closes.
std::optional<std::vector<Predicate>> compute_interpolants(const Trace& t,
                                                           const SolverLimits& limits = {});

/// Drops conjuncts left to right while every triple stays valid, repeating
/// until nothing more can be dropped.
std::vector<Predicate> simplify_interpolants(const Trace& t, std::vector<Predicate> seq,
                                             const SolverLimits& limits = {});

/// {p} op {q}
bool valid_triple(const Predicate& p, const Operation& op, const Predicate& q,
                  const SolverLimits& limits = {});

/// Concrete execution; false when an assume blocks. `final_state` receives
/// the state reached.
bool replay(const Trace& t, const std::map<std::string, Int>& initial,
            const std::vector<Int>& havoc_values,
            std::map<std::string, Int>* final_state = nullptr);

}  // namespace partrace
