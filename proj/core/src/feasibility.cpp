#include "partrace/feasibility.hpp"

#include <thread>

#include "partrace/transformer.hpp"

namespace partrace {

SatResult BuiltinBackend::check(const SsaFormula& f) const {
  return is_satisfiable(f.formula(), limits_);
}

SatResult DelayBackend::check(const SsaFormula& f) const {
  std::this_thread::sleep_for(delay_);
  return inner_->check(f);
}

std::shared_ptr<const FeasibilityBackend> make_backend(const BackendConfig& config) {
  std::shared_ptr<const FeasibilityBackend> b;
  if (config.spec == "builtin") {
    b = std::make_shared<BuiltinBackend>(config.limits);
  } else if (config.spec.starts_with("smtlib:") && config.spec.size() > 7) {
    b = std::make_shared<SmtLibBackend>(config.spec.substr(7), config.solver_timeout);
  } else {
    throw std::invalid_argument("unknown backend '" + config.spec +
                                "' (expected builtin or smtlib:<command>)");
  }
  if (config.delay.count() > 0) b = std::make_shared<DelayBackend>(b, config.delay);
  return b;
}

bool valid_triple(const Predicate& p, const Operation& op, const Predicate& q,
                  const SolverLimits& limits) {
  return implies(strongest_post(p, op, limits), q, limits);
}

std::optional<std::vector<Predicate>> compute_interpolants(const Trace& t,
                                                           const SolverLimits& limits) {
  std::vector<Predicate> seq{Predicate::top()};
  for (std::size_t i = 0; i < t.size(); ++i) seq.push_back(strongest_post(seq.back(), t[i], limits));
  if (seq.back().is_false()) return seq;

  std::vector<Predicate> back(t.size() + 1);
  back[t.size()] = Predicate::bottom();
  for (std::size_t i = t.size(); i-- > 0;) back[i] = weakest_pre(t[i], back[i + 1], limits);
  if (!implies(Predicate::top(), back[0], limits)) return std::nullopt;
  back[0] = Predicate::top();
  return back;
}

std::vector<Predicate> simplify_interpolants(const Trace& t, std::vector<Predicate> seq,
                                             const SolverLimits& limits) {
  std::map<std::string, bool> memo;
  auto valid = [&](const Predicate& p, const Operation& op, const Predicate& q) {
    std::string key = p.text() + '\x1f' + op.text() + '\x1f' + q.text();
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, valid_triple(p, op, q, limits)).first;
    return it->second;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
      for (std::size_t j = 0;;) {
        auto parts = seq[i].conjuncts();
        if (j >= parts.size()) break;
        parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(j));
        Predicate candidate = Predicate::conj(parts);
        if (valid(seq[i - 1], t[i - 1], candidate) && valid(candidate, t[i], seq[i + 1])) {
          seq[i] = candidate;
          changed = true;
        } else {
          ++j;
        }
      }
    }
  }
  return seq;
}

FeasibilityResult check_trace(const Trace& t, const FeasibilityBackend& backend,
                              const SolverLimits& limits) {
  FeasibilityResult out;
  SsaFormula f = encode_trace(t);
  SatResult r = backend.check(f);
  out.verdict = r.status;
  out.reason = r.reason;
  if (r.status == SatStatus::Sat) {
    auto value = [&](const std::string& name) {
      auto it = r.model.find(name);
      return it == r.model.end() ? Int(0) : it->second;
    };
    for (const auto& [v, ver] : f.versions) out.model[v] = value(ssa_name(v, 0));
    for (const auto& h : f.havoc_names) out.havoc_values.push_back(value(h));
  } else if (r.status == SatStatus::Unsat) {
    auto seq = compute_interpolants(t, limits);
    if (!seq) {
      out.verdict = SatStatus::Unknown;
      out.reason = "interpolation-incomplete";
    } else {
      out.interpolants = simplify_interpolants(t, std::move(*seq), limits);
    }
  }
  return out;
}

bool replay(const Trace& t, const std::map<std::string, Int>& initial,
            const std::vector<Int>& havoc_values, std::map<std::string, Int>* final_state) {
  std::map<std::string, Int> state = initial;
  std::size_t next_havoc = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Int* hv = nullptr;
    if (t[i].kind() == OpKind::Havoc && next_havoc < havoc_values.size()) {
      hv = &havoc_values[next_havoc++];
    }
    if (!execute(t[i], state, hv)) return false;
  }
  if (final_state) *final_state = std::move(state);
  return true;
}

}  // namespace partrace
