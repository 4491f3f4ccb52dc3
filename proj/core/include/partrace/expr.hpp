#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "partrace/bigint.hpp"

namespace partrace {

/// Source position, 1-based.
struct SourcePos {
  int line = 1;
  int column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, SourcePos pos);

  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

enum class ExprKind : std::uint8_t {
  IntConst,
  BoolConst,
  Var,
  Neg,
  Add,
  Sub,
  Mul,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Not,
  And,
  Or,
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree node. Unary nodes keep their operand in lhs().
class Expr {
 public:
  static ExprPtr constant(Int value, SourcePos pos = {});
  static ExprPtr boolean(bool value, SourcePos pos = {});
  static ExprPtr var(std::string name, SourcePos pos = {});
  static ExprPtr unary(ExprKind kind, ExprPtr operand, SourcePos pos = {});
  static ExprPtr binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs,
                        SourcePos pos = {});

  ExprKind kind() const { return kind_; }
  const Int& value() const { return value_; }
  bool truth() const { return truth_; }
  const std::string& name() const { return name_; }
  const ExprPtr& lhs() const { return lhs_; }
  const ExprPtr& rhs() const { return rhs_; }
  SourcePos pos() const { return pos_; }

  /// True for comparison, logical and boolean-constant nodes.
  bool is_boolean() const;
  bool is_unary() const { return kind_ == ExprKind::Neg || kind_ == ExprKind::Not; }

 private:
  Expr() = default;

  ExprKind kind_ = ExprKind::IntConst;
  Int value_;
  bool truth_ = false;
  std::string name_;
  ExprPtr lhs_;
  ExprPtr rhs_;
  SourcePos pos_;
};

/// Canonical rendering: no whitespace, minimal parentheses, `!` always
/// parenthesizes its operand.
std::string to_text(const Expr& e);

void collect_vars(const Expr& e, std::set<std::string>& out);

/// Concrete evaluation. Variables absent from `env` read as 0.
Int eval_int(const Expr& e, const std::map<std::string, Int>& env);
bool eval_bool(const Expr& e, const std::map<std::string, Int>& env);

/// Parses a standalone expression (automaton files, predicate text).
/// Type checking and the linearity check are applied; `expect_boolean`
/// selects the expected result sort.
ExprPtr parse_expression(std::string_view text, bool expect_boolean);

/// Validates sorts and linearity of an already-built tree. Throws ParseError.
void check_expression(const Expr& e, bool expect_boolean,
                      const std::set<std::string>* declared = nullptr);

}  // namespace partrace
