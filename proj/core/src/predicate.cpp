#include "partrace/predicate.hpp"

#include <algorithm>
#include <stdexcept>

namespace partrace {

// ---------------------------------------------------------------------------
// LinearExpr

LinearExpr LinearExpr::variable(const std::string& name) {
  LinearExpr e;
  e.coeffs[name] = 1;
  return e;
}

LinearExpr LinearExpr::constant_term(Int value) {
  LinearExpr e;
  e.constant = std::move(value);
  return e;
}

Int LinearExpr::coeff(const std::string& name) const {
  auto it = coeffs.find(name);
  return it == coeffs.end() ? Int(0) : it->second;
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
  for (const auto& [v, c] : other.coeffs) {
    Int& slot = coeffs[v];
    slot += c;
    if (slot == 0) coeffs.erase(v);
  }
  constant += other.constant;
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& other) {
  for (const auto& [v, c] : other.coeffs) {
    Int& slot = coeffs[v];
    slot -= c;
    if (slot == 0) coeffs.erase(v);
  }
  constant -= other.constant;
  return *this;
}

LinearExpr& LinearExpr::operator*=(const Int& factor) {
  if (factor == 0) {
    coeffs.clear();
    constant = 0;
    return *this;
  }
  for (auto& [v, c] : coeffs) c *= factor;
  constant *= factor;
  return *this;
}

LinearExpr LinearExpr::substituted(const std::string& name, const LinearExpr& replacement) const {
  auto it = coeffs.find(name);
  if (it == coeffs.end()) return *this;
  Int c = it->second;
  LinearExpr out = *this;
  out.coeffs.erase(name);
  out += replacement * c;
  return out;
}

std::optional<LinearExpr> to_linear(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::IntConst:
      return LinearExpr::constant_term(e.value());
    case ExprKind::Var:
      return LinearExpr::variable(e.name());
    case ExprKind::Neg: {
      auto inner = to_linear(*e.lhs());
      if (!inner) return std::nullopt;
      return *inner * Int(-1);
    }
    case ExprKind::Add:
    case ExprKind::Sub: {
      auto l = to_linear(*e.lhs());
      auto r = to_linear(*e.rhs());
      if (!l || !r) return std::nullopt;
      return e.kind() == ExprKind::Add ? *l + *r : *l - *r;
    }
    case ExprKind::Mul: {
      auto l = to_linear(*e.lhs());
      auto r = to_linear(*e.rhs());
      if (!l || !r) return std::nullopt;
      if (l->is_constant()) return *r * l->constant;
      if (r->is_constant()) return *l * r->constant;
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Atom

namespace {

std::string render_sum(const std::map<std::string, Int>& coeffs, bool flip) {
  std::string out;
  bool first = true;
  for (const auto& [v, raw] : coeffs) {
    Int c = flip ? Int(-raw) : raw;
    bool neg = c < 0;
    Int mag = neg ? Int(-c) : c;
    if (neg) out += '-';
    else if (!first) out += '+';
    if (mag != 1) out += mag.str() + "*";
    out += v;
    first = false;
  }
  return out;
}

}  // namespace

std::optional<Atom> Atom::make_le_zero(const LinearExpr& e, bool* truth) {
  if (e.coeffs.empty()) {
    *truth = e.constant <= 0;
    return std::nullopt;
  }
  Int g = 0;
  for (const auto& [v, c] : e.coeffs) g = gcd(g, c);
  Atom a;
  for (const auto& [v, c] : e.coeffs) a.coeffs.emplace(v, c / g);
  a.bound = floor_div(-e.constant, g);
  return a;
}

Atom Atom::negated() const {
  Atom a;
  for (const auto& [v, c] : coeffs) a.coeffs.emplace(v, -c);
  a.bound = -bound - 1;
  return a;
}

std::string Atom::lhs_key() const { return render_sum(coeffs, false); }

std::string Atom::text() const {
  bool all_negative = std::all_of(coeffs.begin(), coeffs.end(),
                                  [](const auto& kv) { return kv.second < 0; });
  if (all_negative) return render_sum(coeffs, true) + ">=" + Int(-bound).str();
  return render_sum(coeffs, false) + "<=" + bound.str();
}

bool Atom::holds(const std::map<std::string, Int>& env) const {
  Int sum = 0;
  for (const auto& [v, c] : coeffs) {
    auto it = env.find(v);
    if (it != env.end()) sum += c * it->second;
  }
  return sum <= bound;
}

// ---------------------------------------------------------------------------
// Predicate

struct Predicate::Node {
  Kind kind = Kind::True;
  std::optional<Atom> atom;
  std::vector<Predicate> children;
  std::string text;
};

Predicate::Predicate() : Predicate(top()) {}

Predicate Predicate::top() {
  static const auto node = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::True;
    n->text = "true";
    return std::shared_ptr<const Node>(n);
  }();
  return Predicate(node);
}

Predicate Predicate::bottom() {
  static const auto node = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::False;
    n->text = "false";
    return std::shared_ptr<const Node>(n);
  }();
  return Predicate(node);
}

Predicate Predicate::atom(Atom a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->text = a.text();
  n->atom = std::move(a);
  return Predicate(std::shared_ptr<const Node>(n));
}

Predicate Predicate::le_zero(const LinearExpr& e) {
  bool truth = false;
  auto a = Atom::make_le_zero(e, &truth);
  if (!a) return truth ? top() : bottom();
  return atom(std::move(*a));
}

Predicate Predicate::eq_zero(const LinearExpr& e) {
  return conj({le_zero(e), le_zero(e * Int(-1))});
}

Predicate::Kind Predicate::kind() const { return node_->kind; }

const Atom& Predicate::as_atom() const {
  if (!node_->atom) throw std::logic_error("predicate is not an atom");
  return *node_->atom;
}

const std::vector<Predicate>& Predicate::children() const { return node_->children; }

std::vector<Predicate> Predicate::conjuncts() const {
  if (kind() == Kind::And) return children();
  if (kind() == Kind::True) return {};
  return {*this};
}

const std::string& Predicate::text() const { return node_->text; }

Predicate Predicate::junction(bool is_and, std::vector<Predicate> parts) {
  const Kind self = is_and ? Kind::And : Kind::Or;
  const Kind unit = is_and ? Kind::True : Kind::False;
  const Kind zero = is_and ? Kind::False : Kind::True;

  std::map<std::string, Atom> atoms;  // by lhs: tightest (and) / loosest (or) bound
  std::map<std::string, Predicate> others;
  std::vector<Predicate> stack = std::move(parts);
  while (!stack.empty()) {
    Predicate p = std::move(stack.back());
    stack.pop_back();
    if (p.kind() == unit) continue;
    if (p.kind() == zero) return is_and ? bottom() : top();
    if (p.kind() == self) {
      for (const auto& c : p.children()) stack.push_back(c);
      continue;
    }
    if (p.kind() == Kind::Atom) {
      const Atom& a = p.as_atom();
      auto [it, inserted] = atoms.emplace(a.lhs_key(), a);
      if (!inserted && (is_and ? a.bound < it->second.bound : a.bound > it->second.bound)) {
        it->second = a;
      }
      continue;
    }
    others.emplace(p.text(), p);
  }

  // t <= k together with -t <= m: empty when k < -m (and); everything when
  // k + 1 >= -m (or).
  for (const auto& [key, a] : atoms) {
    Atom neg;
    for (const auto& [v, c] : a.coeffs) neg.coeffs.emplace(v, -c);
    auto it = atoms.find(neg.lhs_key());
    if (it == atoms.end()) continue;
    const Int& k = a.bound;
    const Int& m = it->second.bound;
    if (is_and && k < -m) return bottom();
    if (!is_and && k + 1 >= -m) return top();
  }

  std::vector<Predicate> children;
  for (auto& [key, a] : atoms) children.push_back(atom(a));
  for (auto& [key, p] : others) children.push_back(p);
  if (children.empty()) return is_and ? top() : bottom();
  if (children.size() == 1) return children.front();
  std::sort(children.begin(), children.end());

  auto n = std::make_shared<Node>();
  n->kind = self;
  const char* sep = is_and ? "&&" : "||";
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) n->text += sep;
    bool paren = children[i].kind() == Kind::And || children[i].kind() == Kind::Or;
    if (paren) n->text += '(';
    n->text += children[i].text();
    if (paren) n->text += ')';
  }
  n->children = std::move(children);
  return Predicate(std::shared_ptr<const Node>(n));
}

Predicate Predicate::conj(std::vector<Predicate> parts) { return junction(true, std::move(parts)); }

Predicate Predicate::disj(std::vector<Predicate> parts) { return junction(false, std::move(parts)); }

Predicate operator&&(const Predicate& a, const Predicate& b) { return Predicate::conj({a, b}); }

Predicate operator||(const Predicate& a, const Predicate& b) { return Predicate::disj({a, b}); }

Predicate Predicate::from_expr(const Expr& e) {
  auto diff = [&]() {
    auto l = to_linear(*e.lhs());
    auto r = to_linear(*e.rhs());
    if (!l || !r) throw std::invalid_argument("non-linear comparison '" + to_text(e) + "'");
    return *l - *r;
  };
  switch (e.kind()) {
    case ExprKind::BoolConst:
      return e.truth() ? top() : bottom();
    case ExprKind::Not:
      return from_expr(*e.lhs()).negate();
    case ExprKind::And:
      return conj({from_expr(*e.lhs()), from_expr(*e.rhs())});
    case ExprKind::Or:
      return disj({from_expr(*e.lhs()), from_expr(*e.rhs())});
    case ExprKind::Eq:
      return eq_zero(diff());
    case ExprKind::Ne: {
      LinearExpr d = diff();
      return disj({le_zero(d + LinearExpr::constant_term(1)),
                   le_zero(LinearExpr::constant_term(1) - d)});
    }
    case ExprKind::Lt:
      return le_zero(diff() + LinearExpr::constant_term(1));
    case ExprKind::Le:
      return le_zero(diff());
    case ExprKind::Gt:
      return le_zero(LinearExpr::constant_term(1) - diff());
    case ExprKind::Ge:
      return le_zero(diff() * Int(-1));
    default:
      throw std::invalid_argument("not a condition: '" + to_text(e) + "'");
  }
}

Predicate Predicate::parse(std::string_view text) {
  return from_expr(*parse_expression(text, true));
}

Predicate Predicate::negate() const {
  switch (kind()) {
    case Kind::True:
      return bottom();
    case Kind::False:
      return top();
    case Kind::Atom:
      return atom(as_atom().negated());
    case Kind::And:
    case Kind::Or: {
      std::vector<Predicate> parts;
      for (const auto& c : children()) parts.push_back(c.negate());
      return kind() == Kind::And ? disj(std::move(parts)) : conj(std::move(parts));
    }
  }
  return *this;
}

namespace {

LinearExpr atom_as_le_zero(const Atom& a) {
  LinearExpr e;
  e.coeffs = a.coeffs;
  e.constant = -a.bound;
  return e;
}

}  // namespace

Predicate Predicate::substitute(const std::string& var, const LinearExpr& replacement) const {
  switch (kind()) {
    case Kind::True:
    case Kind::False:
      return *this;
    case Kind::Atom:
      if (!as_atom().coeffs.contains(var)) return *this;
      return le_zero(atom_as_le_zero(as_atom()).substituted(var, replacement));
    case Kind::And:
    case Kind::Or: {
      std::vector<Predicate> parts;
      for (const auto& c : children()) parts.push_back(c.substitute(var, replacement));
      return kind() == Kind::And ? conj(std::move(parts)) : disj(std::move(parts));
    }
  }
  return *this;
}

Predicate Predicate::rename(const std::map<std::string, std::string>& names) const {
  switch (kind()) {
    case Kind::True:
    case Kind::False:
      return *this;
    case Kind::Atom: {
      LinearExpr e;
      for (const auto& [v, c] : as_atom().coeffs) {
        auto it = names.find(v);
        e += LinearExpr::variable(it == names.end() ? v : it->second) * c;
      }
      e.constant = -as_atom().bound;
      return le_zero(e);
    }
    case Kind::And:
    case Kind::Or: {
      std::vector<Predicate> parts;
      for (const auto& c : children()) parts.push_back(c.rename(names));
      return kind() == Kind::And ? conj(std::move(parts)) : disj(std::move(parts));
    }
  }
  return *this;
}

std::set<std::string> Predicate::variables() const {
  std::set<std::string> out;
  if (kind() == Kind::Atom) {
    for (const auto& [v, c] : as_atom().coeffs) out.insert(v);
  }
  for (const auto& c : children()) {
    auto sub = c.variables();
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

bool Predicate::holds(const std::map<std::string, Int>& env) const {
  switch (kind()) {
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Atom:
      return as_atom().holds(env);
    case Kind::And:
      return std::all_of(children().begin(), children().end(),
                         [&](const Predicate& c) { return c.holds(env); });
    case Kind::Or:
      return std::any_of(children().begin(), children().end(),
                         [&](const Predicate& c) { return c.holds(env); });
  }
  return false;
}

std::optional<std::vector<std::vector<Atom>>> to_dnf(const Predicate& p, std::size_t max_cubes) {
  using Cubes = std::vector<std::vector<Atom>>;
  switch (p.kind()) {
    case Predicate::Kind::True:
      return Cubes{{}};
    case Predicate::Kind::False:
      return Cubes{};
    case Predicate::Kind::Atom:
      return Cubes{{p.as_atom()}};
    case Predicate::Kind::Or: {
      Cubes out;
      for (const auto& c : p.children()) {
        auto sub = to_dnf(c, max_cubes);
        if (!sub) return std::nullopt;
        out.insert(out.end(), sub->begin(), sub->end());
        if (out.size() > max_cubes) return std::nullopt;
      }
      return out;
    }
    case Predicate::Kind::And: {
      Cubes out{{}};
      for (const auto& c : p.children()) {
        auto sub = to_dnf(c, max_cubes);
        if (!sub) return std::nullopt;
        if (out.size() * sub->size() > max_cubes) return std::nullopt;
        Cubes next;
        next.reserve(out.size() * sub->size());
        for (const auto& left : out) {
          for (const auto& right : *sub) {
            auto cube = left;
            cube.insert(cube.end(), right.begin(), right.end());
            next.push_back(std::move(cube));
          }
        }
        out = std::move(next);
      }
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace partrace
