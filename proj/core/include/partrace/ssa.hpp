#pragma once

#include <map>
#include <string>
#include <vector>

#include "partrace/nfa.hpp"
#include "partrace/predicate.hpp"

namespace partrace {

/// Indexed variable name "x@3".
std::string ssa_name(const std::string& var, int version);

/// Conjunction with one constraint per trace position (havoc contributes
/// `true` but still bumps the version).
struct SsaFormula {
  std::vector<Predicate> conjuncts;
  /// Final version of every variable the trace mentions.
  std::map<std::string, int> versions;
  /// SSA names of the values chosen by each havoc, in trace order.
  std::vector<std::string> havoc_names;

  Predicate formula() const { return Predicate::conj(conjuncts); }
};

SsaFormula encode_trace(const Trace& t);

}  // namespace partrace
