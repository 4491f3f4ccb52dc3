#include <gtest/gtest.h>

#include "oracles.hpp"
#include "partrace/feasibility.hpp"
#include "partrace/interpolant_automaton.hpp"

using namespace partrace;

namespace {

const std::vector<std::string> kPi1{"x>0", "x=-x;", "!(x!=0)"};
const std::vector<std::string> kPi2{"!(x>0)", "!(x>-10)", "!(x!=0)"};

Nfa notzero() { return build_program_automaton(parse_program(oracle::kNotZero)).automaton(); }

bool has_edge(const InterpolantAutomaton& ia, const std::string& from, const std::string& op,
              const std::string& to) {
  const Nfa& a = ia.automaton;
  for (const auto& tr : a.transitions()) {
    if (ia.predicates[tr.src].text() == from && (*a.symbols())[tr.symbol].text() == op &&
        ia.predicates[tr.dst].text() == to) {
      return true;
    }
  }
  return false;
}

std::vector<Predicate> pi2_sequence() {
  return {Predicate::top(), Predicate::parse("x<=0"), Predicate::parse("x<=-10"),
          Predicate::bottom()};
}

}  // namespace

TEST(InterpolantAutomaton, Pi2ProofStructure) {
  Nfa a = notzero();
  auto ia = build_interpolant_automaton(oracle::trace_of(a, kPi2), pi2_sequence(), a);
  ASSERT_EQ(ia.automaton.num_states(), 4u);
  EXPECT_TRUE(ia.predicates[ia.automaton.initial()].is_true());
  auto acc = ia.automaton.accepting_states();
  ASSERT_EQ(acc.size(), 1u);
  EXPECT_TRUE(ia.predicates[acc[0]].is_false());

  EXPECT_TRUE(has_edge(ia, "true", "!(x>0)", "x<=0"));
  EXPECT_TRUE(has_edge(ia, "x<=0", "!(x>-10)", "x<=-10"));
  EXPECT_TRUE(has_edge(ia, "x<=-10", "!(x!=0)", "false"));
  // The loop body keeps x ≤ 0.
  EXPECT_TRUE(has_edge(ia, "x<=0", "x>-10", "x<=0"));
  EXPECT_TRUE(has_edge(ia, "x<=0", "x=x-1;", "x<=0"));
  EXPECT_FALSE(has_edge(ia, "x<=0", "x=-x;", "x<=0"));
  for (const auto& tr : ia.automaton.transitions()) {
    EXPECT_FALSE(ia.predicates[tr.src].is_false());
    EXPECT_FALSE(ia.predicates[tr.dst].is_true());
  }
  EXPECT_FALSE(accepts(ia.automaton, oracle::trace_of(a, kPi1)));
}

TEST(InterpolantAutomaton, EveryEdgeIsAValidTriple) {
  Nfa a = notzero();
  for (const auto& path : {kPi1, kPi2}) {
    Trace t = oracle::trace_of(a, path);
    auto r = check_trace(t, BuiltinBackend());
    ASSERT_EQ(r.verdict, SatStatus::Unsat);
    auto ia = build_interpolant_automaton(t, r.interpolants, a);
    EXPECT_TRUE(accepts(ia.automaton, t));
    for (const auto& tr : ia.automaton.transitions()) {
      EXPECT_TRUE(valid_triple(ia.predicates[tr.src], (*a.symbols())[tr.symbol],
                               ia.predicates[tr.dst]));
    }
    // Sound generalization: nothing it accepts is feasible.
    for (const auto& w : oracle::language(ia.automaton, 6)) {
      EXPECT_FALSE(oracle::find_execution(Trace(a.symbols(), w), {"x"}, -15, 15));
    }
  }
}

TEST(InterpolantAutomaton, RejectsNonInductiveSequence) {
  Nfa a = notzero();
  std::vector<Predicate> bad{Predicate::top(), Predicate::parse("x<=-10"),
                             Predicate::parse("x<=-10"), Predicate::bottom()};
  EXPECT_THROW(build_interpolant_automaton(oracle::trace_of(a, kPi2), bad, a),
               std::invalid_argument);
  EXPECT_THROW(build_interpolant_automaton(oracle::trace_of(a, kPi2), {Predicate::top()}, a),
               std::invalid_argument);
}

TEST(InterpolantAutomaton, SerializesWithAnnotations) {
  Nfa a = notzero();
  auto ia = build_interpolant_automaton(oracle::trace_of(a, kPi2), pi2_sequence(), a);
  std::string text = ia.serialize();
  EXPECT_NE(text.find("annot"), std::string::npos);
  auto parsed = parse_automaton(text);
  EXPECT_EQ(parsed.annotations.size(), 4u);
  EXPECT_TRUE(structurally_equal(parsed.automaton, ia.automaton));
}
