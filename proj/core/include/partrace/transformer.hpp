#pragma once

#include <string>

#include "partrace/operation.hpp"
#include "partrace/predicate.hpp"
#include "partrace/solver.hpp"

namespace partrace {

struct Projection {
  Predicate result;
  /// False when the integer projection had to be over-approximated by its
  /// rational shadow (the result then contains every true successor).
  bool exact = true;
};

/// ∃var. p
Projection project(const Predicate& p, const std::string& var,
                   const SolverLimits& limits = {});

/// Post-image of `p` under `op`; `false` whenever the image is empty.
/// Never loses states: an inexact projection only adds some.
Predicate strongest_post(const Predicate& p, const Operation& op,
                         const SolverLimits& limits = {});
/// Same, reporting whether the image is exact.
Projection strongest_post_exact(const Predicate& p, const Operation& op,
                                const SolverLimits& limits = {});

/// A precondition guaranteeing `q` after `op`. Exact for assume and assign;
/// for havoc it may be stronger than the weakest one.
Predicate weakest_pre(const Operation& op, const Predicate& q,
                      const SolverLimits& limits = {});

/// Condition predicate of an assume, or the linear rhs of an assign.
Predicate condition_of(const Operation& op);
LinearExpr rhs_of(const Operation& op);

}  // namespace partrace
