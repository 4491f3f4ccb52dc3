#include "partrace/ssa.hpp"

#include "partrace/transformer.hpp"

namespace partrace {

std::string ssa_name(const std::string& var, int version) {
  return var + "@" + std::to_string(version);
}

SsaFormula encode_trace(const Trace& t) {
  SsaFormula f;
  auto current = [&](const std::set<std::string>& vars) {
    std::map<std::string, std::string> names;
    for (const auto& v : vars) names[v] = ssa_name(v, f.versions.try_emplace(v, 0).first->second);
    return names;
  };
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Operation& op = t[i];
    switch (op.kind()) {
      case OpKind::Assume: {
        Predicate c = condition_of(op);
        f.conjuncts.push_back(c.rename(current(c.variables())));
        break;
      }
      case OpKind::Assign: {
        LinearExpr e = rhs_of(op);
        std::set<std::string> vars;
        for (const auto& [v, c] : e.coeffs) vars.insert(v);
        auto names = current(vars);
        LinearExpr renamed = LinearExpr::constant_term(e.constant);
        for (const auto& [v, c] : e.coeffs) renamed += LinearExpr::variable(names.at(v)) * c;
        int& ver = f.versions[op.target()];
        ++ver;
        f.conjuncts.push_back(
            Predicate::eq_zero(LinearExpr::variable(ssa_name(op.target(), ver)) - renamed));
        break;
      }
      case OpKind::Havoc: {
        int& ver = f.versions[op.target()];
        ++ver;
        f.havoc_names.push_back(ssa_name(op.target(), ver));
        f.conjuncts.push_back(Predicate::top());
        break;
      }
    }
  }
  return f;
}

}  // namespace partrace
