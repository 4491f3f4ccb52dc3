// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "partrace/bench.hpp"
#include "partrace/engine.hpp"
#include "partrace/feasibility.hpp"
#include "partrace/generator.hpp"
#include "partrace/interpolant_automaton.hpp"
#include "partrace/parallel.hpp"

using namespace partrace;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

const std::vector<std::string> kPi1{"x>0", "x=-x;", "!(x!=0)"};
const std::vector<std::string> kPi2{"!(x>0)", "!(x>-10)", "!(x!=0)"};
const std::vector<std::string> kPi3{"!(x>0)", "x>-10", "x=x-1;", "!(x>-10)", "!(x!=0)"};

ProgramAutomaton notzero() { return build_program_automaton(parse_program(oracle::kNotZero)); }

std::shared_ptr<const FeasibilityBackend> builtin() { return std::make_shared<BuiltinBackend>(); }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Check ac1() {
  Check c;
  auto t0 = Clock::now();
  ProgramAutomaton p = notzero();
  for (std::size_t w : {0u, 1u, 2u, 4u, 6u}) {
    Verdict v = run_engine(p, w, builtin(), {});
    c.expect(v.kind == VerdictKind::Safe, "workers=" + std::to_string(w) + " gave " + to_string(v.kind));
  }
  Verdict v = verify_parallel(p, builtin(), {2, ExecutorKind::Synchronous});
  c.expect(v.kind == VerdictKind::Safe, "sync workers=2 not SAFE");
  const auto& ev = v.stats.events;
  std::vector<std::string> before_result;
  for (const auto& e : ev) {
    if (e.kind == "result") break;
    if (e.kind == "assign") before_result.push_back(e.trace);
  }
  Nfa a = p.automaton();
  std::vector<std::string> expected{oracle::trace_of(a, kPi1).text(), oracle::trace_of(a, kPi2).text()};
  c.expect(before_result == expected, "first assignments differ from pi1, pi2");
  double secs = seconds_since(t0);
  c.expect(secs < 1.0, "took " + std::to_string(secs) + " s");
  if (c.ok) c.detail = "SAFE for workers 0,1,2,4,6; pi1 and pi2 assigned before first result";
  return c;
}

Check ac2() {
  Check c;
  Nfa a = notzero().automaton();
  Trace t = oracle::trace_of(a, kPi2);
  std::vector<Predicate> seq{Predicate::top(), Predicate::parse("x<=0"),
                             Predicate::parse("x<=-10"), Predicate::bottom()};
  auto ia = build_interpolant_automaton(t, seq, a);
  for (int n = 0; n <= 5; ++n) {
    std::vector<std::string> ops{"!(x>0)"};
    for (int i = 0; i < n; ++i) {
      ops.push_back("x>-10");
      ops.push_back("x=x-1;");
    }
    ops.push_back("!(x>-10)");
    ops.push_back("!(x!=0)");
    c.expect(accepts(ia.automaton, oracle::trace_of(a, ops)),
             "unrolling n=" + std::to_string(n) + " rejected");
  }
  for (const auto& tr : ia.automaton.transitions()) {
    const Operation& op = (*a.symbols())[tr.symbol];
    c.expect(valid_triple(ia.predicates[tr.src], op, ia.predicates[tr.dst]),
             "invalid edge " + ia.predicates[tr.src].text() + " -" + op.text() + "-> " +
                 ia.predicates[tr.dst].text());
  }
  if (c.ok) {
    c.detail = "unrollings n<=5 accepted; " + std::to_string(ia.automaton.transitions().size()) +
               " edges rechecked";
  }
  return c;
}

Check ac3() {
  Check c;
  auto t0 = Clock::now();
  std::mt19937_64 rng(3);
  std::size_t words = 0;
  for (int round = 0; round < 200 && c.ok; ++round) {
    std::size_t sigma = 1 + rng() % 4;
    auto table = oracle::small_alphabet(sigma);
    Nfa x = oracle::random_nfa(rng, table, 6, sigma);
    Nfa y = oracle::random_nfa(rng, table, 6, sigma);
    Nfa d = difference(x, y);
    std::vector<Symbol> alphabet;
    for (std::size_t i = 0; i < sigma; ++i) alphabet.push_back(static_cast<Symbol>(i));
    oracle::for_each_word({&x, &y, &d}, alphabet, 8,
                          [&](const std::vector<Symbol>& w, const std::vector<bool>& acc) {
                            ++words;
                            if (acc[2] != (acc[0] && !acc[1])) {
                              c.fail("round " + std::to_string(round) + ": mismatch on " +
                                     Trace(table, w).text());
                            }
                          });
  }
  double secs = seconds_since(t0);
  c.expect(secs < 60, "took " + std::to_string(secs) + " s");
  if (c.ok) c.detail = "200 pairs, " + std::to_string(words) + " words, 0 mismatches";
  return c;
}

Trace random_trace(std::mt19937_64& rng, const std::vector<std::string>& vars) {
  auto table = std::make_shared<SymbolTable>();
  std::uniform_int_distribution<int> len(1, 8), kind(0, 9), k(-2, 2);
  auto var = [&] { return vars[rng() % vars.size()]; };
  auto term = [&] {
    std::string s = std::to_string(k(rng));
    for (const auto& v : vars) {
      int coef = k(rng);
      if (coef != 0) s += "+" + std::to_string(coef) + "*" + v;
    }
    return s;
  };
  static const char* kRel[] = {"<=", "<", "==", "!=", ">=", ">"};
  std::vector<Symbol> ops;
  int n = len(rng);
  for (int i = 0; i < n; ++i) {
    int kd = kind(rng);
    Operation op = [&] {
      if (kd == 0) return Operation::havoc(var());
      if (kd <= 3) return Operation::assign(var(), parse_expression(term(), false));
      return Operation::assume(
          parse_expression(var() + kRel[rng() % 6] + term(), true));
    }();
    ops.push_back(table->intern(op));
  }
  return Trace(table, ops);
}

Check ac4() {
  Check c;
  std::mt19937_64 rng(4);
  BuiltinBackend backend;
  int sat = 0, unsat = 0;
  for (int round = 0; round < 200; ++round) {
    std::vector<std::string> vars{"x", "y", "z"};
    vars.resize(1 + rng() % 3);
    Trace t = random_trace(rng, vars);
    FeasibilityResult r = check_trace(t, backend);
    bool truth = oracle::feasible_in_box(t, vars, -20, 20);
    if (r.verdict == SatStatus::Unknown) {
      c.fail("UNKNOWN on " + t.text() + " (" + r.reason + ")");
      continue;
    }
    if ((r.verdict == SatStatus::Sat) != truth) {
      c.fail("verdict " + to_string(r.verdict) + " disagrees on " + t.text());
      continue;
    }
    if (r.verdict == SatStatus::Sat) {
      ++sat;
      oracle::Env env;
      for (const auto& [k, v] : r.model) env[k] = static_cast<long long>(v);
      std::vector<long long> hv;
      for (const auto& h : r.havoc_values) hv.push_back(static_cast<long long>(h));
      c.expect(oracle::runs(t, env, hv), "model does not replay on " + t.text());
    } else {
      ++unsat;
      bool shape = r.interpolants.size() == t.size() + 1 && r.interpolants.front().is_true() &&
                   r.interpolants.back().is_false();
      c.expect(shape, "malformed interpolant sequence on " + t.text());
      for (std::size_t i = 0; shape && i < t.size(); ++i) {
        c.expect(valid_triple(r.interpolants[i], t[i], r.interpolants[i + 1]),
                 "invalid triple at " + std::to_string(i) + " on " + t.text());
      }
    }
  }
  if (c.ok) c.detail = std::to_string(sat) + " SAT, " + std::to_string(unsat) + " UNSAT, 0 mismatches";
  return c;
}

struct CorpusEntry {
  std::string label;
  ProgramAutomaton program;
  bool bug;
};

std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> out;
  const FamilyKind kinds[] = {FamilyKind::Branches, FamilyKind::Loops, FamilyKind::Mixed};
  for (int i = 0; i < 50; ++i) {
    FamilyKind k = kinds[i % 3];
    int n = 1 + (i / 3) % 5;
    bool bug = (i / 2) % 2 == 1;
    std::string src = gen_family(k, n, static_cast<std::uint64_t>(i), bug);
    out.push_back({to_string(k) + "-" + std::to_string(n) + "-s" + std::to_string(i) +
                       (bug ? "-bug" : ""),
                   build_program_automaton(parse_program(src)), bug});
  }
  return out;
}

Check ac5(const std::vector<CorpusEntry>& progs) {
  Check c;
  int safe = 0, unsafe = 0;
  for (const auto& e : progs) {
    (e.bug ? unsafe : safe)++;
    for (std::size_t w : {1u, 2u, 4u, 6u}) {
      Verdict v = run_engine(e.program, w, builtin(), {});
      VerdictKind want = e.bug ? VerdictKind::Unsafe : VerdictKind::Safe;
      c.expect(v.kind == want, e.label + " workers=" + std::to_string(w) + ": " + to_string(v.kind) +
                                   (v.reason.empty() ? "" : " (" + v.reason + ")"));
      if (v.kind == VerdictKind::Unsafe) {
        c.expect(v.witness && replay(*v.witness, v.model, v.havoc_values),
                 e.label + ": witness does not replay");
      }
    }
  }
  if (c.ok) {
    c.detail = std::to_string(safe) + " safe + " + std::to_string(unsafe) +
               " unsafe programs, all workers agree with ground truth";
  }
  return c;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

Check ac6() {
  Check c;
  auto t0 = Clock::now();
  ProgramAutomaton p = build_program_automaton(parse_program(gen_family(FamilyKind::Branches, 8, 0)));
  auto slow = std::make_shared<DelayBackend>(builtin(), std::chrono::milliseconds(200));
  std::map<std::size_t, std::vector<double>> times;
  for (int rep = 0; rep < 5; ++rep) {
    for (std::size_t w : {1u, 2u, 4u}) {
      Verdict v = run_engine(p, w, slow, {});
      c.expect(v.kind == VerdictKind::Safe, "workers=" + std::to_string(w) + " not SAFE");
      times[w].push_back(std::chrono::duration<double>(v.stats.wall_time).count());
    }
  }
  double m1 = median(times[1]), m2 = median(times[2]), m4 = median(times[4]);
  double s2 = m1 / m2, s4 = m1 / m4;
  double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "median %.2fs/%.2fs/%.2fs, speedup w2=%.2f w4=%.2f, %.0fs total",
                m1, m2, m4, s2, s4, secs);
  c.expect(s2 >= 1.4, std::string("w2 speedup too low: ") + buf);
  c.expect(s4 >= 2.0, std::string("w4 speedup too low: ") + buf);
  c.expect(secs < 300, std::string("too slow: ") + buf);
  if (c.ok) c.detail = buf;
  return c;
}

Check ac7(const std::vector<CorpusEntry>& progs) {
  Check c;
  std::vector<const CorpusEntry*> all;
  for (const auto& e : progs) all.push_back(&e);
  ProgramAutomaton nz = notzero();
  CorpusEntry extra{"notzero", nz, false};
  all.push_back(&extra);
  std::size_t compared = 0;
  for (const CorpusEntry* e : all) {
    Verdict seq = verify_sequential(e->program, BuiltinBackend());
    Verdict par = verify_parallel(e->program, builtin(), {1, ExecutorKind::Synchronous});
    std::vector<std::string> a, b;
    for (const auto& it : seq.stats.iterations) a.push_back(it.trace);
    for (const auto& it : par.stats.iterations) b.push_back(it.trace);
    c.expect(a == b, e->label + ": checked-trace sequences differ");
    c.expect(seq.kind == par.kind, e->label + ": verdicts differ");
    compared += a.size();
  }
  if (c.ok) {
    c.detail = std::to_string(all.size()) + " programs, " + std::to_string(compared) +
               " checked traces identical";
  }
  return c;
}

Check ac8() {
  Check c;
  Nfa a = notzero().automaton();
  Trace empty(a.symbols(), {});
  Trace p1 = oracle::trace_of(a, kPi1), p2 = oracle::trace_of(a, kPi2), p3 = oracle::trace_of(a, kPi3);
  auto r1 = diverse_search(a, a.initial(), empty, {p1});
  c.expect(r1.trace && *r1.trace == p2, "relevant={pi1} gave " + (r1.trace ? r1.trace->text() : "nothing"));
  auto r2 = diverse_search(a, a.initial(), empty, {p1, p2});
  c.expect(r2.trace && *r2.trace == p3,
           "relevant={pi1,pi2} gave " + (r2.trace ? r2.trace->text() : "nothing"));
  if (c.ok) c.detail = "{pi1} -> pi2, {pi1,pi2} -> pi3";
  return c;
}

Check ac9() {
  Check c;
  std::mt19937_64 rng(9);
  std::size_t words = 0;
  for (int round = 0; round < 50 && c.ok; ++round) {
    std::size_t sigma = 2 + rng() % 3;
    auto table = oracle::small_alphabet(sigma);
    Nfa abs = oracle::random_nfa(rng, table, 6, sigma);
    std::vector<Nfa> parts;
    for (int i = 0; i < 3; ++i) parts.push_back(oracle::random_nfa(rng, table, 5, sigma));
    std::vector<int> order{0, 1, 2};
    std::vector<Nfa> results;
    do {
      Nfa cur = abs;
      for (int i : order) cur = difference(cur, parts[i]);
      results.push_back(std::move(cur));
    } while (std::next_permutation(order.begin(), order.end()));
    std::vector<const Nfa*> ptrs;
    for (const auto& r : results) ptrs.push_back(&r);
    std::vector<Symbol> alphabet;
    for (std::size_t i = 0; i < sigma; ++i) alphabet.push_back(static_cast<Symbol>(i));
    oracle::for_each_word(ptrs, alphabet, 8, [&](const std::vector<Symbol>& w, const std::vector<bool>& acc) {
      ++words;
      if (std::adjacent_find(acc.begin(), acc.end(), std::not_equal_to<>()) != acc.end()) {
        c.fail("round " + std::to_string(round) + ": orderings disagree on " + Trace(table, w).text());
      }
    });
  }
  if (c.ok) c.detail = "50 sets x 6 orderings, " + std::to_string(words) + " words agree";
  return c;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* id, const std::function<Check()>& fn) {
    auto t0 = Clock::now();
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.fail(std::string("exception: ") + e.what());
    }
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2fs", seconds_since(t0));
    std::cout << id << ' ' << (c.ok ? "PASS" : "FAIL") << " [" << secs << "] " << c.detail
              << std::endl;
    failures += !c.ok;
  };

  std::vector<CorpusEntry> progs = corpus();
  report("AC1", ac1);
  report("AC2", ac2);
  report("AC3", ac3);
  report("AC4", ac4);
  report("AC5", [&] { return ac5(progs); });
  report("AC6", ac6);
  report("AC7", [&] { return ac7(progs); });
  report("AC8", ac8);
  report("AC9", ac9);
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << 9 - failures << "/9" << std::endl;
  return failures ? 1 : 0;
}
