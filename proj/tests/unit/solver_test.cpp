#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "partrace/solver.hpp"

using namespace partrace;

namespace {

bool sat_by_enumeration(const Predicate& p, const std::vector<std::string>& vars, long long lo,
                        long long hi) {
  std::vector<long long> pt(vars.size(), lo);
  for (;;) {
    oracle::Env env;
    for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = pt[i];
    if (oracle::holds(p, env)) return true;
    std::size_t d = 0;
    while (d < pt.size() && pt[d] == hi) pt[d++] = lo;
    if (d == pt.size()) return false;
    ++pt[d];
  }
}

// Random predicate over x,y,z whose models (if any) lie in [-6,6]^3: every
// variable is boxed explicitly.
Predicate boxed_random(std::mt19937_64& rng) {
  const std::vector<std::string> vars{"x", "y", "z"};
  std::uniform_int_distribution<int> coef(-3, 3), cst(-8, 8), pick(0, 2), shape(0, 3);
  auto atom = [&] {
    LinearExpr e = LinearExpr::constant_term(cst(rng));
    for (const auto& v : vars) e += LinearExpr::variable(v) * Int(coef(rng));
    switch (shape(rng)) {
      case 0:
        return Predicate::eq_zero(e);
      case 1:
        return Predicate::le_zero(e).negate();
      default:
        return Predicate::le_zero(e);
    }
  };
  std::vector<Predicate> parts;
  for (const auto& v : vars) {
    parts.push_back(Predicate::le_zero(LinearExpr::variable(v) - LinearExpr::constant_term(6)));
    parts.push_back(Predicate::le_zero(LinearExpr::constant_term(-6) - LinearExpr::variable(v)));
  }
  int n = 1 + pick(rng) + pick(rng);
  for (int i = 0; i < n; ++i) {
    if (pick(rng) == 0) parts.push_back(atom() || atom());
    else parts.push_back(atom());
  }
  return Predicate::conj(parts);
}

}  // namespace

TEST(Solver, ExampleFormulas) {
  // π1's SSA formula is unsatisfiable.
  EXPECT_EQ(is_satisfiable(Predicate::parse("x0>0 && x1==-x0 && !(x1!=0)")).status,
            SatStatus::Unsat);
  // π2's formula as printed: x0 ≤ -10 forces x0 ≠ 0, so this is unsatisfiable too.
  EXPECT_EQ(is_satisfiable(Predicate::parse("!(x0>0) && !(x0>-10) && !(x0!=0)")).status,
            SatStatus::Unsat);
  EXPECT_FALSE(sat_by_enumeration(Predicate::parse("!(x0>0) && !(x0>-10) && !(x0!=0)"), {"x0"},
                                  -20, 20));
  EXPECT_EQ(is_satisfiable(Predicate::parse("x<=0 && x>=1")).status, SatStatus::Unsat);
}

TEST(Solver, ModelsSatisfyFormula) {
  Predicate p = Predicate::parse("x>0 && y==2*x+1 && y<=10 && x!=3");
  auto r = is_satisfiable(p);
  ASSERT_EQ(r.status, SatStatus::Sat);
  oracle::Env env;
  for (const auto& [v, val] : r.model) env[v] = static_cast<long long>(val);
  EXPECT_TRUE(oracle::holds(p, env));
}

TEST(Solver, IntegerReasoningBeyondRationals) {
  // Rationally feasible, no integer point.
  EXPECT_EQ(is_satisfiable(Predicate::parse("2*x == 1")).status, SatStatus::Unsat);
  EXPECT_EQ(is_satisfiable(Predicate::parse("3*x+3*y==2")).status, SatStatus::Unsat);
  EXPECT_EQ(is_satisfiable(Predicate::parse("1 <= 3*x-2*y && 3*x-2*y <= 1 && 2<=x && x<=3 && y>=0")).status,
            SatStatus::Sat);
  EXPECT_EQ(is_satisfiable(Predicate::parse("2*x+2*y>=1 && 2*x+2*y<=1")).status, SatStatus::Unsat);
  EXPECT_EQ(is_satisfiable(Predicate::parse("4*x-4*y>=1 && 4*x-4*y<=3")).status, SatStatus::Unsat);
}

TEST(Solver, VariablesOnlyBoundedThroughEliminatedOnes) {
  auto r = is_satisfiable(Predicate::parse("x>=1 && x-y<=0 && x-z<=4"));
  ASSERT_EQ(r.status, SatStatus::Sat);
  EXPECT_TRUE(Predicate::parse("x>=1 && x-y<=0 && x-z<=4").holds(r.model));
}

TEST(Solver, BigConstants) {
  auto r = is_satisfiable(Predicate::parse("x > 100000000000000000000 && x < 100000000000000000002"));
  ASSERT_EQ(r.status, SatStatus::Sat);
  EXPECT_EQ(r.model["x"], Int("100000000000000000001"));
}

TEST(Solver, AgreesWithEnumerationOnBoxedFormulas) {
  std::mt19937_64 rng(2024);
  int sat = 0, unsat = 0;
  for (int i = 0; i < 300; ++i) {
    Predicate p = boxed_random(rng);
    auto r = is_satisfiable(p);
    ASSERT_NE(r.status, SatStatus::Unknown) << p.text();
    bool expected = sat_by_enumeration(p, {"x", "y", "z"}, -6, 6);
    ASSERT_EQ(r.status == SatStatus::Sat, expected) << p.text();
    (expected ? sat : unsat)++;
  }
  EXPECT_GT(sat, 20);
  EXPECT_GT(unsat, 20);
}

TEST(Solver, ImpliesAgreesWithEnumeration) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 150; ++i) {
    Predicate p = boxed_random(rng);
    Predicate q = boxed_random(rng);
    bool expected = !sat_by_enumeration(p && q.negate(), {"x", "y", "z"}, -6, 6);
    // q's box is implied by p's box, so only the non-box atoms matter.
    EXPECT_EQ(implies(p, q), expected) << p.text() << " => " << q.text();
  }
}

TEST(Solver, Implication) {
  EXPECT_TRUE(implies(Predicate::parse("x<=-10"), Predicate::parse("x<=0")));
  EXPECT_FALSE(implies(Predicate::parse("x<=0"), Predicate::parse("x<=-10")));
  EXPECT_TRUE(implies(Predicate::bottom(), Predicate::parse("x<=-10")));
  EXPECT_TRUE(implies(Predicate::parse("x==1&&y==x+1"), Predicate::parse("y>=2")));
}

TEST(Solver, UnknownWhenBranchDepthExhausted) {
  // Unbounded, integer-infeasible: branch-and-bound cannot close it.
  SolverLimits tight;
  tight.branch_depth = 3;
  auto r = is_satisfiable(Predicate::parse("3*x - 3*y >= 1 && 3*x - 3*y <= 2 && x + y >= 0"), tight);
  EXPECT_NE(r.status, SatStatus::Sat);
  SolverLimits few;
  few.max_cubes = 2;
  // Every cube needs elimination to refute; no bound conflict prunes it.
  auto q = is_satisfiable(
      Predicate::parse("(x+y==3||x+y==5) && (x-y==1||x-y==3) && (x+2*y>=20||x+2*y<=-20)"), few);
  EXPECT_EQ(q.status, SatStatus::Unknown);
  EXPECT_FALSE(q.reason.empty());
}
