#include "partrace/transformer.hpp"

#include <algorithm>
#include <stdexcept>

namespace partrace {

Predicate condition_of(const Operation& op) {
  if (op.kind() != OpKind::Assume) throw std::invalid_argument("not an assume: " + op.text());
  return Predicate::from_expr(*op.expr());
}

LinearExpr rhs_of(const Operation& op) {
  if (op.kind() != OpKind::Assign) throw std::invalid_argument("not an assignment: " + op.text());
  auto e = to_linear(*op.expr());
  if (!e) throw std::invalid_argument("non-linear assignment: " + op.text());
  return *e;
}

namespace {

LinearExpr lhs_of(const Atom& a) {
  LinearExpr e;
  e.coeffs = a.coeffs;
  return e;
}

// ∃var over one conjunction of atoms.
Predicate project_cube(const std::vector<Atom>& cube, const std::string& var, bool* exact) {
  std::vector<Atom> keep, with;
  for (const Atom& a : cube) (a.coeffs.contains(var) ? with : keep).push_back(a);
  std::vector<Predicate> parts;
  for (const Atom& a : keep) parts.push_back(Predicate::atom(a));
  if (with.empty()) return Predicate::conj(std::move(parts));

  // A unit-coefficient equality lets us substitute.
  for (const Atom& a : with) {
    const Int c = a.coeffs.at(var);
    if (c != 1 && c != -1) continue;
    Atom opp = a.negated();  // -t ≤ -k-1; equality needs -t ≤ -k
    auto twin = std::find_if(with.begin(), with.end(), [&](const Atom& b) {
      return b.coeffs == opp.coeffs && b.bound == -a.bound;
    });
    if (twin == with.end()) continue;
    // c·var + rest = k  =>  var = c·(k - rest)
    LinearExpr rest = lhs_of(a);
    rest.coeffs.erase(var);
    LinearExpr repl = (LinearExpr::constant_term(a.bound) - rest) * c;
    for (const Atom& b : with) {
      LinearExpr e = lhs_of(b).substituted(var, repl);
      e.constant -= b.bound;
      parts.push_back(Predicate::le_zero(e));
    }
    return Predicate::conj(std::move(parts));
  }

  std::vector<const Atom*> pos, neg;
  for (const Atom& a : with) (a.coeffs.at(var) > 0 ? pos : neg).push_back(&a);
  for (const Atom* p : pos) {
    const Int a = p->coeffs.at(var);
    for (const Atom* n : neg) {
      const Int b = -n->coeffs.at(var);
      // Real and integer shadows coincide when one coefficient is 1.
      if (a != 1 && b != 1) *exact = false;
      LinearExpr e = lhs_of(*p) * b + lhs_of(*n) * a;
      e.coeffs.erase(var);
      e.constant = -(b * p->bound + a * n->bound);
      parts.push_back(Predicate::le_zero(e));
    }
  }
  return Predicate::conj(std::move(parts));
}

// Replaces every atom mentioning `var` by true; weaker than ∃var in NNF.
Predicate forget(const Predicate& p, const std::string& var) {
  switch (p.kind()) {
    case Predicate::Kind::True:
    case Predicate::Kind::False:
      return p;
    case Predicate::Kind::Atom:
      return p.as_atom().coeffs.contains(var) ? Predicate::top() : p;
    case Predicate::Kind::And:
    case Predicate::Kind::Or: {
      std::vector<Predicate> parts;
      for (const auto& c : p.children()) parts.push_back(forget(c, var));
      return p.kind() == Predicate::Kind::And ? Predicate::conj(std::move(parts))
                                              : Predicate::disj(std::move(parts));
    }
  }
  return p;
}

Predicate prune_unsat(const Predicate& p, const SolverLimits& limits) {
  if (p.is_true() || p.is_false()) return p;
  return is_satisfiable(p, limits).status == SatStatus::Unsat ? Predicate::bottom() : p;
}

}  // namespace

Projection project(const Predicate& p, const std::string& var, const SolverLimits& limits) {
  Projection out;
  std::vector<Predicate> free_parts, bound_parts;
  for (const auto& c : p.conjuncts()) {
    (c.variables().contains(var) ? bound_parts : free_parts).push_back(c);
  }
  if (bound_parts.empty()) {
    out.result = p;
    return out;
  }
  auto cubes = to_dnf(Predicate::conj(bound_parts), limits.max_cubes);
  if (!cubes) {
    out.exact = false;
    free_parts.push_back(forget(Predicate::conj(bound_parts), var));
    out.result = Predicate::conj(std::move(free_parts));
    return out;
  }
  std::vector<Predicate> alternatives;
  for (const auto& cube : *cubes) alternatives.push_back(project_cube(cube, var, &out.exact));
  free_parts.push_back(Predicate::disj(std::move(alternatives)));
  out.result = Predicate::conj(std::move(free_parts));
  return out;
}

Projection strongest_post_exact(const Predicate& p, const Operation& op,
                                const SolverLimits& limits) {
  Projection out;
  if (p.is_false()) {
    out.result = p;
    return out;
  }
  switch (op.kind()) {
    case OpKind::Assume:
      out.result = p && condition_of(op);
      break;
    case OpKind::Havoc:
      out = project(p, op.target(), limits);
      break;
    case OpKind::Assign: {
      const std::string& x = op.target();
      LinearExpr e = rhs_of(op);
      const Int c = e.coeff(x);
      if (c == 1 || c == -1) {
        // x' = c·x + r  =>  x = c·(x' - r)
        LinearExpr r = e;
        r.coeffs.erase(x);
        out.result = p.substitute(x, (LinearExpr::variable(x) - r) * c);
      } else if (c == 0) {
        out = project(p, x, limits);
        out.result = out.result && Predicate::eq_zero(LinearExpr::variable(x) - e);
      } else {
        const std::string old = x + "'";
        LinearExpr eo = e.substituted(x, LinearExpr::variable(old));
        Predicate joined = p.substitute(x, LinearExpr::variable(old)) &&
                           Predicate::eq_zero(LinearExpr::variable(x) - eo);
        out = project(joined, old, limits);
      }
      break;
    }
  }
  out.result = prune_unsat(out.result, limits);
  return out;
}

Predicate strongest_post(const Predicate& p, const Operation& op, const SolverLimits& limits) {
  return strongest_post_exact(p, op, limits).result;
}

Predicate weakest_pre(const Operation& op, const Predicate& q, const SolverLimits& limits) {
  switch (op.kind()) {
    case OpKind::Assume:
      return condition_of(op).negate() || q;
    case OpKind::Assign:
      return q.substitute(op.target(), rhs_of(op));
    case OpKind::Havoc:
      // ∀x.q = ¬∃x.¬q; over-approximating ∃ only strengthens the result.
      return project(q.negate(), op.target(), limits).result.negate();
  }
  return q;
}

}  // namespace partrace
