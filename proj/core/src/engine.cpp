#include "partrace/engine.hpp"

#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "partrace/interpolant_automaton.hpp"

namespace partrace {

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Safe:
      return "SAFE";
    case VerdictKind::Unsafe:
      return "UNSAFE";
    case VerdictKind::Unknown:
      return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::string to_json_line(const Event& e, bool with_time) {
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << e.trace_hash;
  nlohmann::ordered_json j;
  if (with_time) j["timestamp_ms"] = e.time_ms;
  j["event"] = e.kind;
  j["worker"] = e.worker;
  j["seq"] = e.sequence_no;
  j["trace_hash"] = hash.str();
  j["trace"] = e.trace;
  j["abstraction_size"] = e.abstraction_size;
  if (!e.outcome.empty()) j["outcome"] = e.outcome;
  return j.dump();
}

Verdict verify_sequential(const ProgramAutomaton& program, const FeasibilityBackend& backend,
                          const Limits& limits) {
  const auto start = Clock::now();
  const Deadline deadline = Deadline::from_timeout(limits.timeout);
  Verdict v;
  Nfa abstraction = program.automaton();
  auto finish = [&](VerdictKind k, std::string reason = {}) {
    v.kind = k;
    v.reason = std::move(reason);
    v.stats.final_abstraction_states = count_states(abstraction);
    v.stats.wall_time = Clock::now() - start;
    return v;
  };

  for (;;) {
    if (deadline.expired()) return finish(VerdictKind::Unknown, "timeout");
    auto trace = shortest_accepted(abstraction);
    if (!trace) return finish(VerdictKind::Safe);

    FeasibilityResult r;
    try {
      r = check_trace(*trace, backend, limits.solver);
    } catch (const BackendError& e) {
      r.verdict = SatStatus::Unknown;
      r.reason = std::string("backend failure: ") + e.what();
    }
    ++v.stats.traces_checked;
    IterationRecord rec{trace->text(), trace->size(), r.verdict, 0};

    if (r.verdict == SatStatus::Sat) {
      rec.abstraction_states = count_states(abstraction);
      v.stats.iterations.push_back(rec);
      v.witness = *trace;
      v.model = std::move(r.model);
      v.havoc_values = std::move(r.havoc_values);
      return finish(VerdictKind::Unsafe);
    }
    if (r.verdict == SatStatus::Unknown) {
      rec.abstraction_states = count_states(abstraction);
      v.stats.iterations.push_back(rec);
      return finish(VerdictKind::Unknown, r.reason);
    }
    auto ia = build_interpolant_automaton(*trace, r.interpolants, abstraction, limits.solver);
    abstraction = difference(abstraction, ia.automaton);
    ++v.stats.refinements;
    rec.abstraction_states = count_states(abstraction);
    v.stats.iterations.push_back(rec);
    if (v.stats.refinements >= limits.max_refinements && !is_empty(abstraction)) {
      return finish(VerdictKind::Unknown, "max-refinements");
    }
  }
}

std::string format_witness(const Verdict& v) {
  std::ostringstream out;
  if (!v.witness) return {};
  for (const auto& [var, val] : v.model) out << "init " << var << "=" << val << "\n";
  std::size_t h = 0;
  for (std::size_t i = 0; i < v.witness->size(); ++i) {
    const Operation& op = (*v.witness)[i];
    out << "op " << op.text();
    if (op.kind() == OpKind::Havoc && h < v.havoc_values.size()) {
      out << " = " << v.havoc_values[h++];
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace partrace
