#include "partrace/interpolant_automaton.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "partrace/feasibility.hpp"
#include "partrace/transformer.hpp"

namespace partrace {

std::string InterpolantAutomaton::serialize() const {
  std::map<State, std::string> annots;
  for (State s = 0; s < predicates.size(); ++s) annots[s] = predicates[s].text();
  return partrace::serialize(automaton, annots);
}

InterpolantAutomaton build_interpolant_automaton(const Trace& t,
                                                 const std::vector<Predicate>& interpolants,
                                                 const Nfa& abstraction,
                                                 const SolverLimits& limits) {
  if (interpolants.size() != t.size() + 1) {
    throw std::invalid_argument("interpolant sequence must have length |t|+1");
  }
  if (!interpolants.front().is_true() || !interpolants.back().is_false()) {
    throw std::invalid_argument("interpolant sequence must start with true and end with false");
  }
  if (t.symbols() != abstraction.symbols()) {
    throw std::invalid_argument("trace and abstraction use different symbol tables");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!valid_triple(interpolants[i], t[i], interpolants[i + 1], limits)) {
      throw std::invalid_argument("invalid Hoare triple {" + interpolants[i].text() + "} " +
                                  t[i].text() + " {" + interpolants[i + 1].text() + "}");
    }
  }

  InterpolantAutomaton out{Nfa(t.symbols()), {}};
  NfaBuilder b(t.symbols());
  std::map<std::string, State> index;
  std::vector<State> at(interpolants.size());
  for (std::size_t i = 0; i < interpolants.size(); ++i) {
    const Predicate& p = interpolants[i];
    auto [it, inserted] = index.emplace(p.text(), static_cast<State>(out.predicates.size()));
    if (inserted) {
      b.add_state("q" + std::to_string(it->second));
      out.predicates.push_back(p);
    }
    at[i] = it->second;
  }
  b.set_initial(at.front());
  b.set_accepting(at.back());
  for (std::size_t i = 0; i < t.size(); ++i) b.add_transition(at[i], t.ops()[i], at[i + 1]);

  std::set<Symbol> labels;
  for (const auto& tr : abstraction.transitions()) labels.insert(tr.symbol);
  std::vector<Symbol> ops(labels.begin(), labels.end());
  const SymbolTable& table = *t.symbols();
  std::sort(ops.begin(), ops.end(),
            [&](Symbol x, Symbol y) { return table[x].text() < table[y].text(); });

  for (Symbol op : ops) {
    for (State p = 0; p < out.predicates.size(); ++p) {
      if (out.predicates[p].is_false()) continue;
      Predicate post = strongest_post(out.predicates[p], table[op], limits);
      for (State q = 0; q < out.predicates.size(); ++q) {
        if (out.predicates[q].is_true()) continue;
        if (implies(post, out.predicates[q], limits)) b.add_transition(p, op, q);
      }
    }
  }
  out.automaton = std::move(b).build();
  return out;
}

}  // namespace partrace
