#pragma once

#include <map>
#include <string>
#include <vector>

#include "partrace/nfa.hpp"
#include "partrace/predicate.hpp"
#include "partrace/solver.hpp"

namespace partrace {

struct InterpolantAutomaton {
  Nfa automaton;
  /// Predicate of each state, indexed by state.
  std::vector<Predicate> predicates;

  /// Text format with one `annot` line per state.
  std::string serialize() const;
};

/// Generalizes `t` with its inductive sequence `interpolants` (|t|+1
/// predicates, true ... false). States are the distinct predicates; the
/// sequence's own edges are always present. Every other edge P -op-> Q is
/// added when {P} op {Q} holds, op labels a transition of `abstraction`, P
/// is not false and Q is not true. Throws std::invalid_argument when the
/// sequence is not inductive. `abstraction` must share t's symbol table.
InterpolantAutomaton build_interpolant_automaton(const Trace& t,
                                                 const std::vector<Predicate>& interpolants,
                                                 const Nfa& abstraction,
                                                 const SolverLimits& limits = {});

}  // namespace partrace
