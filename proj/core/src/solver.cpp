#include "partrace/solver.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

namespace partrace {

std::string to_string(SatStatus s) {
  switch (s) {
    case SatStatus::Sat:
      return "SAT";
    case SatStatus::Unsat:
      return "UNSAT";
    case SatStatus::Unknown:
      return "UNKNOWN";
  }
  return "UNKNOWN";
}

namespace {

using Coeffs = std::map<std::string, Int>;
// Σ c·x ≤ k, one entry per left-hand side (the tightest bound wins).
using System = std::map<Coeffs, Int>;

enum class AddResult { Ok, Contradiction };

Coeffs negated(const Coeffs& c) {
  Coeffs out;
  for (const auto& [v, a] : c) out.emplace(v, -a);
  return out;
}

AddResult add_row(System& sys, Coeffs c, Int k) {
  for (auto it = c.begin(); it != c.end();) {
    if (it->second == 0) it = c.erase(it);
    else ++it;
  }
  if (c.empty()) return k >= 0 ? AddResult::Ok : AddResult::Contradiction;
  Int g = 0;
  for (const auto& [v, a] : c) g = gcd(g, a);
  if (g != 1) {
    for (auto& [v, a] : c) a /= g;
    k = floor_div(k, g);
  }
  auto opp = sys.find(negated(c));
  if (opp != sys.end() && k + opp->second < 0) return AddResult::Contradiction;
  auto [it, inserted] = sys.emplace(std::move(c), k);
  if (!inserted && k < it->second) it->second = k;
  return AddResult::Ok;
}

struct Substitution {
  std::string var;
  Coeffs rest;  // var = constant + Σ rest
  Int constant;
};

struct Level {
  std::string var;
  std::vector<std::pair<Coeffs, Int>> rows;  // rows mentioning var
};

class CubeSolver {
 public:
  explicit CubeSolver(const SolverLimits& limits) : limits_(limits) {}

  SatResult solve(const System& sys, const std::set<std::string>& vars, int depth) {
    if (++nodes_ > limits_.max_nodes) return unknown("node budget exhausted");
    System cur = sys;

    // Equalities with a unit coefficient are substituted away.
    std::vector<Substitution> substs;
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& [c, k] : cur) {
        auto opp = cur.find(negated(c));
        if (opp == cur.end() || k + opp->second != 0) continue;
        auto unit = std::find_if(c.begin(), c.end(),
                                 [](const auto& kv) { return kv.second == 1 || kv.second == -1; });
        if (unit == c.end()) continue;
        Substitution s;
        s.var = unit->first;
        const Int a = unit->second;  // a·var + rest = k  =>  var = a·k - a·rest
        s.constant = a * k;
        for (const auto& [v, b] : c) {
          if (v != s.var) s.rest.emplace(v, -a * b);
        }
        System next;
        for (const auto& [rc, rk] : cur) {
          auto it = rc.find(s.var);
          if (it == rc.end()) {
            if (add_row(next, rc, rk) == AddResult::Contradiction) return unsat();
            continue;
          }
          Int f = it->second;
          Coeffs nc = rc;
          nc.erase(s.var);
          for (const auto& [v, b] : s.rest) nc[v] += f * b;
          if (add_row(next, std::move(nc), rk - f * s.constant) == AddResult::Contradiction) {
            return unsat();
          }
        }
        substs.push_back(std::move(s));
        cur = std::move(next);
        changed = true;
        break;
      }
    }

    // Fourier–Motzkin with gcd tightening on every derived row.
    std::vector<Level> levels;
    for (;;) {
      std::map<std::string, std::pair<std::size_t, std::size_t>> occ;
      for (const auto& [c, k] : cur) {
        for (const auto& [v, a] : c) {
          auto& o = occ[v];
          (a > 0 ? o.first : o.second)++;
        }
      }
      if (occ.empty()) break;
      std::string pick;
      std::size_t best = 0;
      for (const auto& [v, o] : occ) {
        std::size_t cost = o.first * o.second;
        if (pick.empty() || cost < best) {
          pick = v;
          best = cost;
        }
      }
      Level lvl;
      lvl.var = pick;
      System next;
      std::vector<std::pair<Coeffs, Int>> pos, neg;
      for (const auto& [c, k] : cur) {
        auto it = c.find(pick);
        if (it == c.end()) {
          next.emplace(c, k);
          continue;
        }
        lvl.rows.emplace_back(c, k);
        (it->second > 0 ? pos : neg).emplace_back(c, k);
      }
      for (const auto& [pc, pk] : pos) {
        const Int a = pc.at(pick);
        for (const auto& [nc, nk] : neg) {
          const Int b = -nc.at(pick);
          Coeffs comb;
          for (const auto& [v, x] : pc) comb[v] += b * x;
          for (const auto& [v, x] : nc) comb[v] += a * x;
          comb.erase(pick);
          if (add_row(next, std::move(comb), b * pk + a * nk) == AddResult::Contradiction) {
            return unsat();
          }
          if (next.size() > limits_.max_constraints) return unknown("constraint limit exceeded");
        }
      }
      levels.push_back(std::move(lvl));
      cur = std::move(next);
    }

    // Back-substitution over the rationals, preferring integers near zero.
    std::map<std::string, Rational> val;
    for (auto lvl = levels.rbegin(); lvl != levels.rend(); ++lvl) {
      std::optional<Rational> lo, hi;
      for (const auto& [c, k] : lvl->rows) {
        Rational rhs(k);
        Int a;
        for (const auto& [v, x] : c) {
          if (v == lvl->var) a = x;
          else rhs -= Rational(x) * value_of(val, v);  // unconstrained leftovers read as 0
        }
        Rational bound = rhs / Rational(a);
        if (a > 0) {
          if (!hi || bound < *hi) hi = bound;
        } else {
          if (!lo || bound > *lo) lo = bound;
        }
      }
      Rational choice;
      std::optional<Int> ilo, ihi;
      if (lo) ilo = ceil(*lo);
      if (hi) ihi = floor(*hi);
      if (ilo && ihi && *ilo > *ihi) {
        choice = *lo;
      } else if (ilo && *ilo > 0) {
        choice = Rational(*ilo);
      } else if (ihi && *ihi < 0) {
        choice = Rational(*ihi);
      } else {
        choice = 0;
      }
      val[lvl->var] = choice;
    }
    for (auto s = substs.rbegin(); s != substs.rend(); ++s) {
      Rational v(s->constant);
      for (const auto& [w, b] : s->rest) v += Rational(b) * value_of(val, w);
      val[s->var] = v;
    }

    for (const auto& v : vars) {
      Rational r = value_of(val, v);
      if (denominator(r) == 1) continue;
      if (depth >= limits_.branch_depth) return unknown("branch-and-bound depth exhausted");
      bool saw_unknown = false;
      std::string reason;
      for (int side = 0; side < 2; ++side) {
        System branch = sys;
        Coeffs c{{v, side == 0 ? Int(1) : Int(-1)}};
        Int k = side == 0 ? floor(r) : Int(-ceil(r));
        if (add_row(branch, std::move(c), k) == AddResult::Contradiction) continue;
        SatResult sub = solve(branch, vars, depth + 1);
        if (sub.status == SatStatus::Sat) return sub;
        if (sub.status == SatStatus::Unknown) {
          saw_unknown = true;
          reason = sub.reason;
        }
      }
      return saw_unknown ? unknown(reason) : unsat();
    }

    SatResult out;
    out.status = SatStatus::Sat;
    for (const auto& v : vars) out.model[v] = numerator(value_of(val, v));
    return out;
  }

 private:
  static Rational value_of(const std::map<std::string, Rational>& val, const std::string& v) {
    auto it = val.find(v);
    return it == val.end() ? Rational(0) : it->second;
  }

  static SatResult unsat() {
    SatResult r;
    r.status = SatStatus::Unsat;
    return r;
  }

  static SatResult unknown(std::string why) {
    SatResult r;
    r.status = SatStatus::Unknown;
    r.reason = std::move(why);
    return r;
  }

  const SolverLimits& limits_;
  std::size_t nodes_ = 0;
};

}  // namespace

namespace {

// Depth-first walk over the disjunctive structure; a cube is solved as soon
// as all its atoms are collected, and branches die on cheap bound conflicts.
class CubeSearch {
 public:
  CubeSearch(const SolverLimits& limits) : limits_(limits) {}

  SatResult run(std::vector<Predicate> pending) {
    System sys;
    std::set<std::string> vars;
    if (!dfs(std::move(pending), sys, vars)) {
      if (!result_) {
        SatResult r;
        r.status = SatStatus::Unknown;
        r.reason = "cube limit exceeded";
        return r;
      }
    }
    if (result_) return *result_;
    SatResult r;
    r.status = unknown_ ? SatStatus::Unknown : SatStatus::Unsat;
    r.reason = reason_;
    return r;
  }

 private:
  // False stops the whole search (model found or limit hit).
  bool dfs(std::vector<Predicate> pending, System sys, std::set<std::string> vars) {
    while (!pending.empty()) {
      Predicate p = std::move(pending.back());
      pending.pop_back();
      switch (p.kind()) {
        case Predicate::Kind::True:
          break;
        case Predicate::Kind::False:
          return true;
        case Predicate::Kind::Atom: {
          const Atom& a = p.as_atom();
          if (add_row(sys, a.coeffs, a.bound) == AddResult::Contradiction) return true;
          for (const auto& [v, c] : a.coeffs) vars.insert(v);
          break;
        }
        case Predicate::Kind::And:
          for (const auto& c : p.children()) pending.push_back(c);
          break;
        case Predicate::Kind::Or:
          for (const auto& c : p.children()) {
            auto next = pending;
            next.push_back(c);
            if (!dfs(std::move(next), sys, vars)) return false;
          }
          return true;
      }
    }
    if (++cubes_ > limits_.max_cubes) return false;
    CubeSolver solver(limits_);
    SatResult r = solver.solve(sys, vars, 0);
    if (r.status == SatStatus::Sat) {
      result_ = std::move(r);
      return false;
    }
    if (r.status == SatStatus::Unknown) {
      unknown_ = true;
      reason_ = r.reason;
    }
    return true;
  }

  const SolverLimits& limits_;
  std::size_t cubes_ = 0;
  std::optional<SatResult> result_;
  bool unknown_ = false;
  std::string reason_;
};

// Groups top-level conjuncts that share variables.
std::vector<std::vector<Predicate>> components(const Predicate& p) {
  std::vector<Predicate> parts = p.conjuncts();
  std::map<std::string, std::size_t> owner;
  std::vector<std::size_t> parent(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (const auto& v : parts[i].variables()) {
      auto [it, inserted] = owner.emplace(v, i);
      if (!inserted) parent[find(i)] = find(it->second);
    }
  }
  std::map<std::size_t, std::vector<Predicate>> groups;
  for (std::size_t i = 0; i < parts.size(); ++i) groups[find(i)].push_back(parts[i]);
  std::vector<std::vector<Predicate>> out;
  for (auto& [root, g] : groups) out.push_back(std::move(g));
  return out;
}

}  // namespace

SatResult is_satisfiable(const Predicate& p, const SolverLimits& limits) {
  SatResult out;
  if (p.is_true()) {
    out.status = SatStatus::Sat;
    return out;
  }
  if (p.is_false()) {
    out.status = SatStatus::Unsat;
    return out;
  }
  out.status = SatStatus::Sat;
  bool saw_unknown = false;
  // Cheap components first so an unsat one is found early.
  auto groups = components(p);
  std::stable_sort(groups.begin(), groups.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  for (auto& g : groups) {
    SatResult r = CubeSearch(limits).run(std::move(g));
    if (r.status == SatStatus::Unsat) {
      SatResult u;
      u.status = SatStatus::Unsat;
      return u;
    }
    if (r.status == SatStatus::Unknown) {
      saw_unknown = true;
      out.reason = r.reason;
      continue;
    }
    out.model.insert(r.model.begin(), r.model.end());
  }
  if (saw_unknown) {
    out.status = SatStatus::Unknown;
    out.model.clear();
    return out;
  }
  for (const auto& v : p.variables()) out.model.try_emplace(v, 0);
  if (!p.holds(out.model)) {
    throw std::logic_error("solver produced a model that violates '" + p.text() + "'");
  }
  return out;
}

bool implies(const Predicate& p, const Predicate& q, const SolverLimits& limits) {
  if (q.is_true() || p.is_false()) return true;
  return is_satisfiable(p && q.negate(), limits).status == SatStatus::Unsat;
}

}  // namespace partrace
