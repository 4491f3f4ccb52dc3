#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "partrace/bigint.hpp"
#include "partrace/predicate.hpp"

namespace partrace {

enum class SatStatus { Sat, Unsat, Unknown };

std::string to_string(SatStatus s);

struct SatResult {
  SatStatus status = SatStatus::Unknown;
  /// Integer assignment to every variable of the query (Sat only).
  std::map<std::string, Int> model;
  /// Why the answer is Unknown.
  std::string reason;
};

struct SolverLimits {
  int branch_depth = 64;
  /// Disjunctive cubes examined per query.
  std::size_t max_cubes = 4096;
  /// Constraint count after which Fourier–Motzkin gives up.
  std::size_t max_constraints = 20000;
  /// Branch-and-bound nodes per query.
  std::size_t max_nodes = 20000;
};

/// Decides linear integer satisfiability. Unsat answers are exact; Sat
/// answers carry a model that has been checked against the formula.
SatResult is_satisfiable(const Predicate& p, const SolverLimits& limits = {});

/// p ⊨ q. Unknown counts as false.
bool implies(const Predicate& p, const Predicate& q, const SolverLimits& limits = {});

}  // namespace partrace
