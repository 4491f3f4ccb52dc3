#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "partrace/bigint.hpp"
#include "partrace/expr.hpp"

namespace partrace {

/// Σ coeffs[v]·v + constant
struct LinearExpr {
  std::map<std::string, Int> coeffs;
  Int constant;

  static LinearExpr variable(const std::string& name);
  static LinearExpr constant_term(Int value);

  Int coeff(const std::string& name) const;
  bool is_constant() const { return coeffs.empty(); }

  LinearExpr& operator+=(const LinearExpr& other);
  LinearExpr& operator-=(const LinearExpr& other);
  LinearExpr& operator*=(const Int& factor);
  friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
  friend LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
  friend LinearExpr operator*(LinearExpr a, const Int& k) { return a *= k; }

  /// Replaces `name` by `replacement`.
  LinearExpr substituted(const std::string& name, const LinearExpr& replacement) const;
};

/// nullopt when `e` is not linear (or not an integer term).
std::optional<LinearExpr> to_linear(const Expr& e);

/// Normalized constraint Σ coeffs[v]·v ≤ bound: coefficients are nonzero
/// with gcd 1 and the bound is floor-rounded accordingly.
struct Atom {
  std::map<std::string, Int> coeffs;
  Int bound;

  /// nullopt for constant atoms, whose truth value goes to `truth`.
  static std::optional<Atom> make_le_zero(const LinearExpr& e, bool* truth);

  Atom negated() const;  // -Σ ≤ -bound-1
  std::string text() const;
  /// Renders only the left-hand side; used as a grouping key.
  std::string lhs_key() const;
  bool holds(const std::map<std::string, Int>& env) const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Quantifier-free linear-arithmetic formula in negation normal form over
/// Atoms. Construction canonicalizes (flattening, bound merging, sorting),
/// so equal predicates have equal text().
class Predicate {
 public:
  enum class Kind { True, False, Atom, And, Or };

  Predicate();  // true

  static Predicate top();
  static Predicate bottom();
  static Predicate atom(Atom a);
  /// e ≤ 0
  static Predicate le_zero(const LinearExpr& e);
  /// e = 0, as two ≤ atoms.
  static Predicate eq_zero(const LinearExpr& e);
  static Predicate conj(std::vector<Predicate> parts);
  static Predicate disj(std::vector<Predicate> parts);
  static Predicate from_expr(const Expr& cond);
  /// Parses predicate text (the condition grammar).
  static Predicate parse(std::string_view text);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  const Atom& as_atom() const;
  const std::vector<Predicate>& children() const;
  /// Top-level conjuncts: children of an And, {} for true, else {*this}.
  std::vector<Predicate> conjuncts() const;

  Predicate negate() const;
  Predicate substitute(const std::string& var, const LinearExpr& replacement) const;
  Predicate rename(const std::map<std::string, std::string>& names) const;
  std::set<std::string> variables() const;
  bool holds(const std::map<std::string, Int>& env) const;

  const std::string& text() const;

  friend bool operator==(const Predicate& a, const Predicate& b) { return a.text() == b.text(); }
  friend bool operator<(const Predicate& a, const Predicate& b) { return a.text() < b.text(); }

 private:
  struct Node;
  explicit Predicate(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Predicate junction(bool is_and, std::vector<Predicate> parts);

  std::shared_ptr<const Node> node_;
};

Predicate operator&&(const Predicate& a, const Predicate& b);
Predicate operator||(const Predicate& a, const Predicate& b);

/// Disjunctive normal form as a list of atom cubes; nullopt when more than
/// `max_cubes` cubes would be produced. true = {{}}, false = {}.
std::optional<std::vector<std::vector<Atom>>> to_dnf(const Predicate& p, std::size_t max_cubes);

}  // namespace partrace
