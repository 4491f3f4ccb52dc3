#pragma once

// Reference implementations used only by tests. They share no evaluation
// or automata code with the library beyond the data types.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "partrace/nfa.hpp"
#include "partrace/predicate.hpp"
#include "partrace/program.hpp"

namespace oracle {

using Env = std::map<std::string, long long>;

long long eval_int(const partrace::Expr& e, const Env& env);
bool eval_bool(const partrace::Expr& e, const Env& env);
bool holds(const partrace::Predicate& p, const Env& env);

/// Executes one operation; false when an assume blocks.
bool step(const partrace::Operation& op, Env& env, long long havoc_value);

struct Execution {
  Env initial;
  std::vector<long long> havocs;
};

/// Tries every initial state in [lo,hi]^vars and every havoc value in
/// [lo,hi]; returns the first execution that runs the whole trace.
std::optional<Execution> find_execution(const partrace::Trace& t,
                                        const std::vector<std::string>& vars, long long lo,
                                        long long hi);

/// Whether some execution with initial values and havoc values in [lo,hi]
/// runs the whole trace. Explores states layer by layer and only fixes an
/// initial value once the trace reads it.
bool feasible_in_box(const partrace::Trace& t, const std::vector<std::string>& vars, long long lo,
                     long long hi);

/// Same traversal, no havoc: true iff from `initial` the trace runs through.
bool runs(const partrace::Trace& t, Env env, const std::vector<long long>& havocs);

/// Subset simulation.
bool accepts(const partrace::Nfa& a, const std::vector<partrace::Symbol>& word);

/// Calls `visit(word, accepted)` for every word over `alphabet` of length
/// at most `max_len`, for each automaton in `automata`. Extensions of a word
/// on which every automaton is stuck are skipped.
void for_each_word(const std::vector<const partrace::Nfa*>& automata,
                   const std::vector<partrace::Symbol>& alphabet, std::size_t max_len,
                   const std::function<void(const std::vector<partrace::Symbol>&,
                                            const std::vector<bool>&)>& visit);

/// Accepted words up to `max_len`, sorted.
std::vector<std::vector<partrace::Symbol>> language(const partrace::Nfa& a, std::size_t max_len);

/// Random automaton over the first `alphabet_size` symbols of `table`.
partrace::Nfa random_nfa(std::mt19937_64& rng, const partrace::SymbolTablePtr& table,
                         std::size_t max_states, std::size_t alphabet_size);

/// Shared table of `n` distinct operations.
partrace::SymbolTablePtr small_alphabet(std::size_t n);

enum class Outcome { Error, Exit, Blocked, OutOfSteps };

/// Interprets the program AST directly. Havoc draws from `havoc`.
Outcome run_program(const partrace::Program& p, Env env, const std::function<long long()>& havoc,
                    std::size_t max_steps = 100000);

/// Every syntactic path of the AST up to `max_len` operations that ends at
/// program exit or at a failing assert, rendered as operation text lists.
std::vector<std::vector<std::string>> syntactic_paths(const partrace::Program& p,
                                                      std::size_t max_len);

/// NotZero example program and its failing variant.
extern const char* const kNotZero;
extern const char* const kNotZeroBad;

partrace::Trace trace_of(const partrace::Nfa& a, const std::vector<std::string>& ops);

}  // namespace oracle
