#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "partrace/expr.hpp"

namespace partrace {

enum class OpKind : std::uint8_t { Assume, Assign, Havoc };

/// A program operation: the letters of every automaton in this library.
/// Two operations are the same letter iff their canonical texts match.
class Operation {
 public:
  static Operation assume(ExprPtr cond);
  static Operation assign(std::string target, ExprPtr rhs);
  /// Assignment of a fresh unconstrained value.
  static Operation havoc(std::string target);

  OpKind kind() const { return kind_; }
  const std::string& target() const { return target_; }
  /// Condition for Assume, right-hand side for Assign, null for Havoc.
  const ExprPtr& expr() const { return expr_; }
  const std::string& text() const { return text_; }

  friend bool operator==(const Operation& a, const Operation& b) {
    return a.text_ == b.text_;
  }

 private:
  OpKind kind_ = OpKind::Assume;
  std::string target_;
  ExprPtr expr_;
  std::string text_;
};

/// Executes `op` on `state`. Returns false when an Assume blocks.
/// Havoc takes its value from `havoc_value` (0 when absent).
bool execute(const Operation& op, std::map<std::string, Int>& state,
             const Int* havoc_value = nullptr);

using Symbol = std::uint32_t;

/// Interning table mapping operations to dense symbol ids. Automata and
/// traces reference a shared, frozen table.
class SymbolTable {
 public:
  Symbol intern(const Operation& op);
  std::optional<Symbol> find(const std::string& text) const;

  const Operation& operator[](Symbol s) const { return ops_.at(s); }
  std::size_t size() const { return ops_.size(); }

 private:
  std::vector<Operation> ops_;
  std::unordered_map<std::string, Symbol> index_;
};

using SymbolTablePtr = std::shared_ptr<const SymbolTable>;

}  // namespace partrace
