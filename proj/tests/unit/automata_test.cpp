#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "partrace/feasibility.hpp"
#include "partrace/interpolant_automaton.hpp"
#include "partrace/program.hpp"

using namespace partrace;

namespace {

const std::vector<std::string> kPi1{"x>0", "x=-x;", "!(x!=0)"};
const std::vector<std::string> kPi2{"!(x>0)", "!(x>-10)", "!(x!=0)"};
const std::vector<std::string> kPi3{"!(x>0)", "x>-10", "x=x-1;", "!(x>-10)", "!(x!=0)"};

Nfa notzero() { return build_program_automaton(parse_program(oracle::kNotZero)).automaton(); }

InterpolantAutomaton pi2_proof(const Nfa& a) {
  Trace t = oracle::trace_of(a, kPi2);
  std::vector<Predicate> seq{Predicate::top(), Predicate::parse("x<=0"),
                             Predicate::parse("x<=-10"), Predicate::bottom()};
  return build_interpolant_automaton(t, seq, a);
}

}  // namespace

TEST(Automata, AcceptsExampleTraces) {
  Nfa a = notzero();
  EXPECT_TRUE(accepts(a, oracle::trace_of(a, kPi1)));
  EXPECT_TRUE(accepts(a, oracle::trace_of(a, kPi2)));
  EXPECT_TRUE(accepts(a, oracle::trace_of(a, kPi3)));
  EXPECT_FALSE(accepts(a, Trace(a.symbols(), {})));
  EXPECT_FALSE(accepts(a, oracle::trace_of(a, {"x>0", "x=-x;"})));
}

TEST(Automata, Pi2ProofAcceptsOneLoopUnrolling) {
  Nfa a = notzero();
  auto ia = pi2_proof(a);
  EXPECT_TRUE(accepts(ia.automaton, oracle::trace_of(a, kPi3)));
  EXPECT_EQ(count_states(ia.automaton), 4u);
}

TEST(Automata, Emptiness) {
  Nfa a = notzero();
  EXPECT_FALSE(is_empty(a));
  EXPECT_TRUE(is_empty(difference(a, a)));
  EXPECT_TRUE(is_empty(Nfa(a.symbols())));
  EXPECT_EQ(count_states(Nfa(a.symbols())), 1u);
  EXPECT_EQ(count_states(difference(a, a)), 1u);
}

TEST(Automata, ShortestAcceptedIsPi1ThenPi3) {
  Nfa a = notzero();
  auto first = shortest_accepted(a);
  ASSERT_TRUE(first);
  EXPECT_EQ(first->text(), "x>0, x=-x;, !(x!=0)");

  Nfa rest = difference(difference(a, straight_line(oracle::trace_of(a, kPi1))),
                        straight_line(oracle::trace_of(a, kPi2)));
  auto third = shortest_accepted(rest);
  ASSERT_TRUE(third);
  EXPECT_EQ(*third, oracle::trace_of(a, kPi3));
  EXPECT_FALSE(shortest_accepted(Nfa(a.symbols())));
}

TEST(Automata, DifferenceWithPi2ProofLeavesExactlyPi1) {
  Nfa a = notzero();
  Nfa d = difference(a, pi2_proof(a).automaton);
  auto got = oracle::language(d, 12);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(Trace(a.symbols(), got[0]), oracle::trace_of(a, kPi1));

  // Same answer by filtering the program's words through the subset simulation.
  Nfa b = pi2_proof(a).automaton;
  std::vector<std::vector<Symbol>> diff;
  for (const auto& w : oracle::language(a, 12)) {
    if (!oracle::accepts(b, w)) diff.push_back(w);
  }
  EXPECT_EQ(diff, got);
}

TEST(Automata, DifferenceWithEmptyIsIdentity) {
  Nfa a = notzero();
  Nfa d = difference(a, Nfa(a.symbols()));
  EXPECT_EQ(oracle::language(d, 10), oracle::language(a, 10));
  EXPECT_EQ(d.alphabet(), a.alphabet());
}

TEST(Automata, DifferenceRequiresSharedTable) {
  Nfa a = notzero();
  Nfa b = notzero();
  EXPECT_THROW(difference(a, b), std::invalid_argument);
}

TEST(Automata, DifferenceIsTrimmed) {
  Nfa a = notzero();
  Nfa d = difference(a, straight_line(oracle::trace_of(a, kPi1)));
  for (State s = 0; s < d.num_states(); ++s) {
    EXPECT_TRUE(shortest_suffix_from(d, s).has_value()) << "state " << s << " is not co-reachable";
  }
}

TEST(Automata, RandomDifferenceMatchesWordOracle) {
  std::mt19937_64 rng(11);
  auto table = oracle::small_alphabet(4);
  std::vector<Symbol> alpha{0, 1, 2, 3};
  for (int round = 0; round < 60; ++round) {
    Nfa a = oracle::random_nfa(rng, table, 6, 1 + rng() % 4);
    Nfa b = oracle::random_nfa(rng, table, 6, 1 + rng() % 4);
    Nfa d = difference(a, b);
    Nfa ta = trim(a);
    std::size_t mismatches = 0;
    oracle::for_each_word({&a, &b, &d, &ta}, alpha, 6,
                          [&](const std::vector<Symbol>&, const std::vector<bool>& acc) {
                            if (acc[2] != (acc[0] && !acc[1])) ++mismatches;
                            if (acc[3] != acc[0]) ++mismatches;
                          });
    ASSERT_EQ(mismatches, 0u) << "round " << round;
  }
}

TEST(Automata, ShortestAcceptedIsMinimal) {
  std::mt19937_64 rng(5);
  auto table = oracle::small_alphabet(3);
  for (int round = 0; round < 100; ++round) {
    Nfa a = oracle::random_nfa(rng, table, 5, 3);
    auto t = shortest_accepted(a);
    EXPECT_EQ(is_empty(a), !t.has_value());
    auto lang = oracle::language(a, 6);
    if (!t) {
      EXPECT_TRUE(lang.empty());
      continue;
    }
    EXPECT_TRUE(oracle::accepts(a, t->ops()));
    for (const auto& w : lang) EXPECT_GE(w.size(), t->size());
  }
}

TEST(Automata, TraceBasics) {
  Nfa a = notzero();
  Trace p3 = oracle::trace_of(a, kPi3);
  Trace pre = oracle::trace_of(a, {"!(x>0)", "x>-10"});
  EXPECT_TRUE(pre.is_prefix_of(p3));
  EXPECT_FALSE(p3.is_prefix_of(pre));
  EXPECT_TRUE(p3.is_prefix_of(p3));
  EXPECT_EQ(p3.text(), "!(x>0), x>-10, x=x-1;, !(x>-10), !(x!=0)");
  EXPECT_EQ(p3.hash(), oracle::trace_of(a, kPi3).hash());
  EXPECT_NE(p3.hash(), pre.hash());
}

TEST(Automata, SerializeParseRoundTripWithAnnotations) {
  Nfa a = notzero();
  auto ia = pi2_proof(a);
  auto parsed = parse_automaton(ia.serialize());
  EXPECT_EQ(parsed.annotations.size(), 4u);
  EXPECT_EQ(serialize(parsed.automaton, parsed.annotations), ia.serialize());
}
