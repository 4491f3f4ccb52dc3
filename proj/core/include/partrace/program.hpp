#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "partrace/expr.hpp"
#include "partrace/nfa.hpp"

namespace partrace {

enum class StmtKind { Assign, If, While, Assert, Assume, Havoc };

struct Stmt {
  StmtKind kind = StmtKind::Assign;
  std::string target;  // Assign, Havoc
  ExprPtr expr;        // rhs or condition
  std::vector<Stmt> then_body;
  std::vector<Stmt> else_body;
  SourcePos pos;
};

struct Program {
  std::vector<std::string> variables;
  std::vector<Stmt> body;
};

/// Parses the mini language:
///
///   program := { "int" ident ";" } { stmt }
///   stmt    := ident "=" expr ";" | "if" "(" cond ")" block [ "else" block ]
///            | "while" "(" cond ")" block | "assert" "(" cond ")" ";"
///            | "assume" "(" cond ")" ";" | "havoc" ident ";"
///   block   := "{" { stmt } "}"
///
/// Throws ParseError carrying line and column.
Program parse_program(std::string_view source);

/// Control-flow automaton whose accepting states are the error locations.
/// Deterministic over operation text; error locations have no successors.
class ProgramAutomaton {
 public:
  /// Throws std::invalid_argument when an invariant does not hold.
  explicit ProgramAutomaton(Nfa automaton);

  const Nfa& automaton() const { return automaton_; }
  std::set<std::string> variables() const;

 private:
  Nfa automaton_;
};

/// Locations are numbered by statement preorder (the program end is the
/// last number); the failing branch of the assert at location k leads to
/// the error location "k_err".
ProgramAutomaton build_program_automaton(const Program& program);

/// Reads the automaton text format and checks program-automaton invariants.
ProgramAutomaton load_automaton(std::string_view text);

}  // namespace partrace
