#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "partrace/operation.hpp"

namespace partrace {

using State = std::uint32_t;

struct Transition {
  State src;
  Symbol symbol;
  State dst;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// A finite sequence of operations; prefix order and equality are by
/// canonical operation text.
class Trace {
 public:
  Trace() = default;
  Trace(SymbolTablePtr symbols, std::vector<Symbol> ops);

  const SymbolTablePtr& symbols() const { return symbols_; }
  const std::vector<Symbol>& ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }
  const Operation& operator[](std::size_t i) const { return (*symbols_)[ops_[i]]; }

  Trace extended(Symbol s) const;
  Trace concat(const Trace& suffix) const;
  /// this ⪯ other
  bool is_prefix_of(const Trace& other) const;

  /// Operations joined by ", ".
  std::string text() const;
  /// Stable 64-bit FNV-1a hash of text().
  std::uint64_t hash() const;

  friend bool operator==(const Trace& a, const Trace& b);
  friend bool operator<(const Trace& a, const Trace& b);

 private:
  SymbolTablePtr symbols_;
  std::vector<Symbol> ops_;
};

/// Nondeterministic finite automaton over interned operations. Immutable
/// once built; copies are independent values safe to hand to other threads.
class Nfa {
 public:
  /// Empty-language automaton: one non-accepting initial state.
  explicit Nfa(SymbolTablePtr symbols);

  const SymbolTablePtr& symbols() const { return symbols_; }
  std::size_t num_states() const { return accepting_.size(); }
  State initial() const { return initial_; }
  bool is_accepting(State s) const { return accepting_[s]; }
  std::vector<State> accepting_states() const;
  const std::vector<Transition>& transitions() const { return transitions_; }
  /// Indices into transitions(), in declaration order.
  const std::vector<std::uint32_t>& outgoing(State s) const { return outgoing_[s]; }
  /// Sorted symbol ids; a superset of the transition labels.
  const std::vector<Symbol>& alphabet() const { return alphabet_; }
  const std::string& name(State s) const { return names_[s]; }
  std::optional<State> find_state(std::string_view name) const;
  /// For product states: the state of the left operand this state came from.
  State origin(State s) const { return origin_[s]; }

 private:
  friend class NfaBuilder;

  SymbolTablePtr symbols_;
  State initial_ = 0;
  std::vector<bool> accepting_;
  std::vector<std::string> names_;
  std::vector<State> origin_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<std::uint32_t>> outgoing_;
  std::vector<Symbol> alphabet_;
};

class NfaBuilder {
 public:
  explicit NfaBuilder(SymbolTablePtr symbols);

  /// Empty names default to "q<index>".
  State add_state(std::string name = {});
  void set_initial(State s);
  void set_accepting(State s, bool accepting = true);
  /// Exact duplicates are ignored.
  void add_transition(State src, Symbol symbol, State dst);
  void add_letter(Symbol s);
  void set_origin(State s, State origin);
  std::size_t num_states() const { return accepting_.size(); }

  /// The alphabet is the declared letters plus every transition label.
  Nfa build() &&;

 private:
  SymbolTablePtr symbols_;
  State initial_ = 0;
  std::vector<bool> accepting_;
  std::vector<std::string> names_;
  std::vector<State> origin_;
  std::vector<Transition> transitions_;
  std::unordered_set<std::string> seen_;
  std::vector<Symbol> letters_;
};

bool accepts(const Nfa& a, const Trace& t);
bool is_empty(const Nfa& a);

/// Minimum-length accepted trace; BFS explores edges in declaration order.
std::optional<Trace> shortest_accepted(const Nfa& a);
/// Shortest word leading from `from` to an accepting state.
std::optional<Trace> shortest_suffix_from(const Nfa& a, State from);

/// L(a) \ L(b) as the product of `a` with the complement of the
/// determinized `b`, complemented over a's alphabet. Both operands must share
/// one symbol table. The result is trimmed.
Nfa difference(const Nfa& a, const Nfa& b);

/// Removes states that are unreachable or cannot reach acceptance.
Nfa trim(const Nfa& a);

inline std::size_t count_states(const Nfa& a) { return a.num_states(); }

/// Automaton containing exactly `t`.
Nfa straight_line(const Trace& t);

/// Same states, initial, accepting set, transition set and alphabet, all
/// compared by name and operation text.
bool structurally_equal(const Nfa& a, const Nfa& b);

// ---------------------------------------------------------------------------
// Text format

class AutomatonFormatError : public std::runtime_error {
 public:
  AutomatonFormatError(const std::string& message, int line);
  int line() const { return line_; }

 private:
  int line_;
};

/// Serializes with `loc`, `init`, `error`, `edge` and `letter` lines.
/// `annotations` adds one `annot <state> <text>` line per entry.
std::string serialize(const Nfa& a,
                      const std::map<State, std::string>& annotations = {});

struct ParsedAutomaton {
  Nfa automaton;
  std::map<State, std::string> annotations;
};

/// Parses the text format into a fresh symbol table. Every location must be
/// declared by a `loc` line.
ParsedAutomaton parse_automaton(std::string_view text);

/// Operation rendering used on `edge` lines: `assume <cond>`,
/// `assign <var> <expr>` or `havoc <var>`.
std::string format_operation(const Operation& op);
Operation parse_operation(std::string_view text);

}  // namespace partrace

template <>
struct std::hash<partrace::Trace> {
  std::size_t operator()(const partrace::Trace& t) const noexcept {
    return static_cast<std::size_t>(t.hash());
  }
};
