#include "partrace/operation.hpp"

namespace partrace {

Operation Operation::assume(ExprPtr cond) {
  Operation op;
  op.kind_ = OpKind::Assume;
  op.text_ = to_text(*cond);
  op.expr_ = std::move(cond);
  return op;
}

Operation Operation::assign(std::string target, ExprPtr rhs) {
  Operation op;
  op.kind_ = OpKind::Assign;
  op.text_ = target + "=" + to_text(*rhs) + ";";
  op.target_ = std::move(target);
  op.expr_ = std::move(rhs);
  return op;
}

Operation Operation::havoc(std::string target) {
  Operation op;
  op.kind_ = OpKind::Havoc;
  op.text_ = "havoc " + target + ";";
  op.target_ = std::move(target);
  return op;
}

bool execute(const Operation& op, std::map<std::string, Int>& state,
             const Int* havoc_value) {
  switch (op.kind()) {
    case OpKind::Assume:
      return eval_bool(*op.expr(), state);
    case OpKind::Assign: {
      Int v = eval_int(*op.expr(), state);
      state[op.target()] = std::move(v);
      return true;
    }
    case OpKind::Havoc:
      state[op.target()] = havoc_value ? *havoc_value : Int(0);
      return true;
  }
  return false;
}

Symbol SymbolTable::intern(const Operation& op) {
  auto it = index_.find(op.text());
  if (it != index_.end()) return it->second;
  auto id = static_cast<Symbol>(ops_.size());
  ops_.push_back(op);
  index_.emplace(op.text(), id);
  return id;
}

std::optional<Symbol> SymbolTable::find(const std::string& text) const {
  auto it = index_.find(text);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace partrace
