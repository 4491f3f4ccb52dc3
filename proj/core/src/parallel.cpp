#include "partrace/parallel.hpp"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

#include "partrace/interpolant_automaton.hpp"

namespace partrace {

WorkResult worker_run(const WorkItem& item, const FeasibilityBackend& backend,
                      const SolverLimits& limits) {
  const auto start = Clock::now();
  WorkResult out;
  out.sequence_no = item.sequence_no;
  out.trace = item.trace;
  out.automaton = Nfa(item.trace.symbols());
  try {
    FeasibilityResult r = check_trace(item.trace, backend, limits);
    out.verdict = r.verdict;
    out.reason = r.reason;
    if (r.verdict == SatStatus::Sat) {
      out.model = std::move(r.model);
      out.havoc_values = std::move(r.havoc_values);
    } else if (r.verdict == SatStatus::Unsat) {
      out.automaton =
          build_interpolant_automaton(item.trace, r.interpolants, *item.snapshot, limits).automaton;
    }
  } catch (const BackendError& e) {
    out.verdict = SatStatus::Unknown;
    out.reason = std::string("backend failure: ") + e.what();
  } catch (const std::exception& e) {
    out.verdict = SatStatus::Unknown;
    out.automaton = Nfa(item.trace.symbols());
    out.reason = std::string("worker failure: ") + e.what();
  }
  out.busy = Clock::now() - start;
  return out;
}

namespace {

class ThreadedExecutor final : public Executor {
 public:
  ThreadedExecutor(std::size_t workers, std::shared_ptr<const FeasibilityBackend> backend,
                   SolverLimits limits)
      : backend_(std::move(backend)), limits_(limits), capacity_(workers) {
    for (std::size_t i = 0; i < workers; ++i) {
      threads_.emplace_back([this, i] { loop(static_cast<int>(i)); });
    }
  }

  ~ThreadedExecutor() override {
    {
      std::lock_guard lock(mu_);
      stop_ = true;
    }
    work_cv_.notify_all();
    space_cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  std::size_t pool_size() const override { return threads_.size(); }

  int submit(WorkItem item) override {
    std::unique_lock lock(mu_);
    space_cv_.wait(lock, [&] { return work_.size() < capacity_ || stop_; });
    work_.push_back(std::move(item));
    lock.unlock();
    work_cv_.notify_one();
    return -1;
  }

  std::vector<WorkResult> wait_and_drain(const Deadline& deadline) override {
    std::unique_lock lock(mu_);
    while (results_.empty()) {
      if (deadline.at()) {
        if (result_cv_.wait_until(lock, *deadline.at()) == std::cv_status::timeout &&
            results_.empty()) {
          ++empty_wakeups_;
          return {};
        }
      } else {
        result_cv_.wait(lock);
      }
      if (results_.empty()) ++empty_wakeups_;
    }
    std::vector<WorkResult> out(std::make_move_iterator(results_.begin()),
                                std::make_move_iterator(results_.end()));
    results_.clear();
    return out;
  }

  std::size_t empty_wakeups() const override {
    std::lock_guard lock(mu_);
    return empty_wakeups_;
  }

 private:
  void loop(int id) {
    for (;;) {
      std::unique_lock lock(mu_);
      work_cv_.wait(lock, [&] { return !work_.empty() || stop_; });
      if (stop_) return;
      WorkItem item = std::move(work_.front());
      work_.pop_front();
      lock.unlock();
      space_cv_.notify_one();

      WorkResult r = worker_run(item, *backend_, limits_);
      r.worker = id;

      lock.lock();
      results_.push_back(std::move(r));
      lock.unlock();
      result_cv_.notify_one();
    }
  }

  std::shared_ptr<const FeasibilityBackend> backend_;
  SolverLimits limits_;
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable work_cv_, space_cv_, result_cv_;
  std::deque<WorkItem> work_;
  std::deque<WorkResult> results_;
  std::size_t empty_wakeups_ = 0;
  bool stop_ = false;
  std::vector<std::thread> threads_;
};

class SynchronousExecutor final : public Executor {
 public:
  SynchronousExecutor(std::size_t workers, std::shared_ptr<const FeasibilityBackend> backend,
                      SolverLimits limits)
      : workers_(workers), backend_(std::move(backend)), limits_(limits) {}

  std::size_t pool_size() const override { return workers_; }

  int submit(WorkItem item) override {
    int w = static_cast<int>(next_worker_++ % workers_);
    pending_.emplace_back(std::move(item), w);
    return w;
  }

  std::vector<WorkResult> wait_and_drain(const Deadline&) override {
    if (pending_.empty()) return {};
    auto [item, w] = std::move(pending_.front());
    pending_.pop_front();
    WorkResult r = worker_run(item, *backend_, limits_);
    r.worker = w;
    std::vector<WorkResult> out;
    out.push_back(std::move(r));
    return out;
  }

  std::size_t empty_wakeups() const override { return 0; }

 private:
  std::size_t workers_;
  std::shared_ptr<const FeasibilityBackend> backend_;
  SolverLimits limits_;
  std::deque<std::pair<WorkItem, int>> pending_;
  std::size_t next_worker_ = 0;
};

struct BudgetExceeded {};

std::optional<Trace> search(const Nfa& a, State q, const Trace& prefix,
                            const std::vector<const Trace*>& relevant, const Deadline& deadline) {
  if (deadline.expired()) throw BudgetExceeded{};
  if (relevant.empty()) {
    auto suffix = shortest_suffix_from(a, q);
    if (!suffix) return std::nullopt;
    return prefix.concat(*suffix);
  }
  const std::size_t k = prefix.size();
  auto starts_with = [&](const Trace* t, Symbol op) { return t->size() > k && t->ops()[k] == op; };

  std::vector<std::pair<std::size_t, std::uint32_t>> order;  // (count, edge index)
  for (auto idx : a.outgoing(q)) {
    Symbol op = a.transitions()[idx].symbol;
    std::size_t n = std::count_if(relevant.begin(), relevant.end(),
                                  [&](const Trace* t) { return starts_with(t, op); });
    order.emplace_back(n, idx);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });

  for (const auto& [n, idx] : order) {
    const Transition& tr = a.transitions()[idx];
    std::vector<const Trace*> next;
    bool taken = false;
    for (const Trace* t : relevant) {
      if (!starts_with(t, tr.symbol)) continue;
      if (t->size() == k + 1) taken = true;
      next.push_back(t);
    }
    if (taken) continue;
    Trace ext = prefix.extended(tr.symbol);
    if (a.is_accepting(tr.dst)) return ext;
    if (auto found = search(a, tr.dst, ext, next, deadline)) return found;
  }
  return std::nullopt;
}

}  // namespace

std::unique_ptr<Executor> make_threaded_executor(std::size_t workers,
                                                 std::shared_ptr<const FeasibilityBackend> backend,
                                                 SolverLimits limits) {
  return std::make_unique<ThreadedExecutor>(workers, std::move(backend), limits);
}

std::unique_ptr<Executor> make_synchronous_executor(
    std::size_t workers, std::shared_ptr<const FeasibilityBackend> backend, SolverLimits limits) {
  return std::make_unique<SynchronousExecutor>(workers, std::move(backend), limits);
}

SearchOutcome diverse_search(const Nfa& a, State q, const Trace& prefix,
                             const std::vector<Trace>& relevant, const Deadline& deadline) {
  std::vector<const Trace*> rel;
  for (const auto& t : relevant) {
    if (prefix.is_prefix_of(t)) rel.push_back(&t);
  }
  SearchOutcome out;
  try {
    out.trace = search(a, q, prefix.symbols() ? prefix : Trace(a.symbols(), {}), rel, deadline);
  } catch (const BudgetExceeded&) {
    out.budget_exceeded = true;
  }
  return out;
}

SearchOutcome select_next(const CoordinatorState& state, bool first_in_phase,
                          const Deadline& deadline) {
  if (first_in_phase) {
    auto bfs = shortest_accepted(state.abstraction);
    if (!bfs) return {};
    if (!state.assigned.contains(*bfs) && !state.unresolved.contains(*bfs)) return {bfs, false};
  }
  std::vector<Trace> relevant(state.assigned.begin(), state.assigned.end());
  relevant.insert(relevant.end(), state.unresolved.begin(), state.unresolved.end());
  return diverse_search(state.abstraction, state.abstraction.initial(),
                        Trace(state.abstraction.symbols(), {}), relevant, deadline);
}

Verdict verify_parallel(const ProgramAutomaton& program,
                        std::shared_ptr<const FeasibilityBackend> backend,
                        const ParallelOptions& options, const Limits& limits) {
  if (options.workers == 0) throw std::invalid_argument("verify_parallel needs at least one worker");
  const auto start = Clock::now();
  const Deadline deadline = Deadline::from_timeout(limits.timeout);
  auto executor = options.executor == ExecutorKind::Threaded
                      ? make_threaded_executor(options.workers, backend, limits.solver)
                      : make_synchronous_executor(options.workers, backend, limits.solver);

  CoordinatorState st{program.automaton(), {}, {}, 0};
  Verdict v;
  v.stats.worker_busy.assign(options.workers, std::chrono::nanoseconds{0});
  std::uint64_t next_seq = 0;

  auto log = [&](std::string kind, int worker, std::uint64_t seq, const Trace* t,
                 std::string outcome = {}) {
    Event e;
    e.time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    e.kind = std::move(kind);
    e.worker = worker;
    e.sequence_no = seq;
    if (t) {
      e.trace_hash = t->hash();
      e.trace = t->text();
    }
    e.abstraction_size = count_states(st.abstraction);
    e.outcome = std::move(outcome);
    v.stats.events.push_back(std::move(e));
  };
  auto finish = [&](VerdictKind k, std::string reason = {}) {
    v.kind = k;
    v.reason = std::move(reason);
    v.stats.final_abstraction_states = count_states(st.abstraction);
    v.stats.empty_wakeups = executor->empty_wakeups();
    log("verdict", -1, 0, v.witness ? &*v.witness : nullptr, to_string(k));
    v.stats.wall_time = Clock::now() - start;
    return v;
  };

  for (;;) {
    if (deadline.expired()) return finish(VerdictKind::Unknown, "timeout");
    if (st.outstanding == 0 && is_empty(st.abstraction)) return finish(VerdictKind::Safe);

    bool first = true;
    bool budget_hit = false;
    while (st.outstanding < options.workers && st.unresolved.size() < limits.max_unresolved) {
      Deadline budget = Deadline::after(limits.search_budget).min(deadline);
      SearchOutcome pick = select_next(st, first, budget);
      first = false;
      if (!pick.trace) {
        budget_hit = pick.budget_exceeded;
        break;
      }
      WorkItem item{*pick.trace, std::make_shared<const Nfa>(st.abstraction), next_seq++};
      st.assigned.insert(item.trace);
      ++st.outstanding;
      ++v.stats.traces_checked;
      v.stats.iterations.push_back({item.trace.text(), item.trace.size(), SatStatus::Unknown, 0});
      const Trace t = item.trace;
      const std::uint64_t seq = item.sequence_no;
      int w = executor->submit(std::move(item));
      log("assign", w, seq, &t);
    }

    if (st.outstanding == 0) {
      if (is_empty(st.abstraction)) return finish(VerdictKind::Safe);
      if (!st.unresolved.empty()) return finish(VerdictKind::Unknown, "unresolved-traces");
      return finish(VerdictKind::Unknown, budget_hit ? "search-budget-exceeded" : "no-trace-found");
    }

    std::vector<WorkResult> results = executor->wait_and_drain(deadline);
    if (results.empty()) continue;  // deadline; reported at the loop head
    std::sort(results.begin(), results.end(),
              [](const WorkResult& x, const WorkResult& y) { return x.sequence_no < y.sequence_no; });

    for (auto& r : results) {
      --st.outstanding;
      st.assigned.erase(r.trace);
      if (r.worker >= 0 && static_cast<std::size_t>(r.worker) < v.stats.worker_busy.size()) {
        v.stats.worker_busy[r.worker] += r.busy;
      }
      IterationRecord& rec = v.stats.iterations.at(r.sequence_no);

      if (r.verdict == SatStatus::Sat) {
        rec.verdict = SatStatus::Sat;
        log("result", r.worker, r.sequence_no, &r.trace, to_string(r.verdict));
        v.witness = r.trace;
        v.model = std::move(r.model);
        v.havoc_values = std::move(r.havoc_values);
        return finish(VerdictKind::Unsafe);
      }
      if (r.verdict == SatStatus::Unknown) {
        st.unresolved.insert(r.trace);
        rec.verdict = SatStatus::Unknown;
        log("result", r.worker, r.sequence_no, &r.trace, to_string(r.verdict));
        continue;
      }
      if (!accepts(st.abstraction, r.trace)) ++v.stats.wasted_results;
      st.abstraction = difference(st.abstraction, r.automaton);
      ++v.stats.refinements;
      rec.verdict = SatStatus::Unsat;
      rec.abstraction_states = count_states(st.abstraction);
      log("result", r.worker, r.sequence_no, &r.trace, to_string(r.verdict));
    }
    if (v.stats.refinements >= limits.max_refinements && !is_empty(st.abstraction)) {
      return finish(VerdictKind::Unknown, "max-refinements");
    }
  }
}

}  // namespace partrace
