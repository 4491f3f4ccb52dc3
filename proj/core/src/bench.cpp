#include "partrace/bench.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace partrace {

Expectation parse_expectation(const std::string& token) {
  std::string t;
  for (char c : token) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "safe") return Expectation::Safe;
  if (t == "unsafe") return Expectation::Unsafe;
  if (t == "any") return Expectation::Any;
  throw std::invalid_argument("expected verdict must be safe, unsafe or any, got '" + token + "'");
}

std::string to_string(Expectation e) {
  switch (e) {
    case Expectation::Safe:
      return "safe";
    case Expectation::Unsafe:
      return "unsafe";
    case Expectation::Any:
      return "any";
  }
  return "any";
}

namespace {

std::string trim_copy(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool matches(Expectation e, VerdictKind v) {
  switch (e) {
    case Expectation::Any:
      return true;
    case Expectation::Safe:
      return v == VerdictKind::Safe;
    case Expectation::Unsafe:
      return v == VerdictKind::Unsafe;
  }
  return false;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

}  // namespace

std::vector<TaskSpec> parse_suite(const std::string& text, const std::string& base_dir) {
  std::vector<TaskSpec> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim_copy(line);
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string col;
    while (std::getline(ls, col, ',')) cols.push_back(trim_copy(col));
    if (cols.size() != 3 || cols[0].empty() || cols[1].empty()) {
      throw std::invalid_argument("suite line " + std::to_string(lineno) +
                                  ": expected label,path,expected");
    }
    TaskSpec t;
    t.label = cols[0];
    std::filesystem::path p(cols[1]);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    t.path = p.string();
    t.expected = parse_expectation(cols[2]);
    out.push_back(std::move(t));
  }
  return out;
}

ProgramAutomaton load_program_text(const std::string& text, bool automaton_format) {
  if (automaton_format) return load_automaton(text);
  return build_program_automaton(parse_program(text));
}

ProgramAutomaton load_program_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_program_text(buf.str(), std::filesystem::path(path).extension() == ".aut");
}

Verdict run_engine(const ProgramAutomaton& program, std::size_t workers,
                   std::shared_ptr<const FeasibilityBackend> backend, const Limits& limits,
                   ExecutorKind executor) {
  if (workers == 0) return verify_sequential(program, *backend, limits);
  return verify_parallel(program, std::move(backend), {workers, executor}, limits);
}

std::vector<BenchRecord> bench_sweep(const std::vector<TaskSpec>& suite, const BenchConfig& config) {
  if (config.repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  auto backend = make_backend(config.backend);
  std::vector<BenchRecord> out;
  for (const auto& task : suite) {
    std::optional<ProgramAutomaton> program;
    std::string load_error;
    try {
      program = task.source.empty() ? load_program_file(task.path)
                                    : load_program_text(task.source, false);
    } catch (const std::exception& e) {
      load_error = e.what();
    }
    for (std::size_t w : config.worker_counts) {
      for (int rep = 0; rep < config.repetitions; ++rep) {
        BenchRecord r;
        r.label = task.label;
        r.workers = w;
        r.repetition = rep;
        r.expected = task.expected;
        if (!program) {
          r.reason = load_error;
        } else {
          try {
            Verdict v = run_engine(*program, w, backend, config.limits, config.executor);
            r.verdict = v.kind;
            r.reason = v.reason;
            r.wall_time_s = std::chrono::duration<double>(v.stats.wall_time).count();
            r.traces_checked = v.stats.traces_checked;
            r.refinements = v.stats.refinements;
            r.wasted_results = v.stats.wasted_results;
          } catch (const std::exception& e) {
            r.verdict = VerdictKind::Unknown;
            r.reason = e.what();
          }
        }
        r.correct = r.verdict != VerdictKind::Unknown && matches(task.expected, r.verdict);
        if (task.expected == Expectation::Any) r.correct = true;
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

std::vector<SpeedupRow> summarize(const std::vector<BenchRecord>& records) {
  std::vector<std::string> labels;
  std::map<std::pair<std::string, std::size_t>, std::vector<const BenchRecord*>> groups;
  for (const auto& r : records) {
    if (std::find(labels.begin(), labels.end(), r.label) == labels.end()) labels.push_back(r.label);
    groups[{r.label, r.workers}].push_back(&r);
  }
  std::vector<SpeedupRow> out;
  for (const auto& label : labels) {
    std::optional<double> base;
    if (auto it = groups.find({label, 1}); it != groups.end()) {
      std::vector<double> w;
      for (auto* r : it->second) w.push_back(r->wall_time_s);
      base = median(w);
    }
    for (const auto& [key, rs] : groups) {
      if (key.first != label) continue;
      SpeedupRow row;
      row.label = label;
      row.workers = key.second;
      std::vector<double> w;
      for (auto* r : rs) {
        w.push_back(r->wall_time_s);
        (r->correct ? row.correct : row.incorrect)++;
      }
      row.median_wall_time_s = median(w);
      if (base && row.median_wall_time_s > 0) row.speedup = *base / row.median_wall_time_s;
      out.push_back(row);
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "label,workers,repetition,verdict,expected,correct,wall_time_s,traces_checked,"
         "refinements,wasted_results,reason\r\n";
  for (const auto& r : records) {
    out << csv_field(r.label) << ',' << r.workers << ',' << r.repetition << ','
        << to_string(r.verdict) << ',' << to_string(r.expected) << ','
        << (r.correct ? "true" : "false") << ',' << r.wall_time_s << ',' << r.traces_checked
        << ',' << r.refinements << ',' << r.wasted_results << ',' << csv_field(r.reason) << "\r\n";
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SpeedupRow>& rows) {
  out << "label,workers,median_wall_time_s,median_speedup,correct,incorrect\r\n";
  for (const auto& r : rows) {
    out << csv_field(r.label) << ',' << r.workers << ',' << r.median_wall_time_s << ','
        << r.speedup << ',' << r.correct << ',' << r.incorrect << "\r\n";
  }
}

}  // namespace partrace
