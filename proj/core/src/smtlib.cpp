#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <set>
#include <sstream>

#include "partrace/feasibility.hpp"

namespace partrace {

namespace {

std::string smt_symbol(const std::string& name) { return "|" + name + "|"; }

std::string smt_int(const Int& v) { return v < 0 ? "(- " + Int(-v).str() + ")" : v.str(); }

std::string smt_term(const Predicate& p) {
  switch (p.kind()) {
    case Predicate::Kind::True:
      return "true";
    case Predicate::Kind::False:
      return "false";
    case Predicate::Kind::Atom: {
      const Atom& a = p.as_atom();
      std::vector<std::string> terms;
      for (const auto& [v, c] : a.coeffs) {
        terms.push_back(c == 1 ? smt_symbol(v) : "(* " + smt_int(c) + " " + smt_symbol(v) + ")");
      }
      std::string lhs = terms.size() == 1 ? terms[0] : "(+";
      if (terms.size() > 1) {
        for (const auto& t : terms) lhs += " " + t;
        lhs += ")";
      }
      return "(<= " + lhs + " " + smt_int(a.bound) + ")";
    }
    case Predicate::Kind::And:
    case Predicate::Kind::Or: {
      std::string out = p.kind() == Predicate::Kind::And ? "(and" : "(or";
      for (const auto& c : p.children()) out += " " + smt_term(c);
      return out + ")";
    }
  }
  return "true";
}

// Minimal s-expression reader for (get-value) answers.
struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;
};

class SExprReader {
 public:
  explicit SExprReader(std::string_view s) : s_(s) {}

  std::optional<SExpr> next() {
    skip();
    if (i_ >= s_.size()) return std::nullopt;
    SExpr e;
    if (s_[i_] == '(') {
      ++i_;
      e.is_list = true;
      for (;;) {
        skip();
        if (i_ >= s_.size()) throw BackendError("unbalanced solver output");
        if (s_[i_] == ')') {
          ++i_;
          return e;
        }
        auto sub = next();
        if (!sub) throw BackendError("unbalanced solver output");
        e.list.push_back(std::move(*sub));
      }
    }
    if (s_[i_] == ')') throw BackendError("unbalanced solver output");
    if (s_[i_] == '|') {
      auto end = s_.find('|', i_ + 1);
      if (end == std::string_view::npos) throw BackendError("unterminated symbol in solver output");
      e.atom = std::string(s_.substr(i_ + 1, end - i_ - 1));
      i_ = end + 1;
      return e;
    }
    if (s_[i_] == '"') {
      auto end = s_.find('"', i_ + 1);
      if (end == std::string_view::npos) throw BackendError("unterminated string in solver output");
      e.atom = std::string(s_.substr(i_, end - i_ + 1));
      i_ = end + 1;
      return e;
    }
    std::size_t start = i_;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' &&
           s_[i_] != ')') {
      ++i_;
    }
    e.atom = std::string(s_.substr(start, i_ - start));
    return e;
  }

 private:
  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

Int read_int(const SExpr& e) {
  try {
    if (!e.is_list) return Int(e.atom);
    if (e.list.size() == 2 && !e.list[0].is_list && e.list[0].atom == "-") return -read_int(e.list[1]);
  } catch (const std::runtime_error&) {
  }
  throw BackendError("unexpected value in solver output");
}

std::vector<std::string> split_command(const std::string& command) {
  std::vector<std::string> argv;
  std::istringstream in(command);
  std::string word;
  while (in >> word) argv.push_back(word);
  if (argv.empty()) throw BackendError("empty solver command");
  return argv;
}

struct ProcessOutput {
  std::string out;
  bool timed_out = false;
};

ProcessOutput run_process(const std::string& command, const std::string& input,
                          std::chrono::milliseconds timeout) {
  std::vector<std::string> args = split_command(command);
  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0 || pipe2(out_pipe, O_CLOEXEC) != 0 ||
      pipe2(err_pipe, O_CLOEXEC) != 0) {
    throw BackendError(std::string("pipe: ") + std::strerror(errno));
  }
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = fork();
  if (pid < 0) throw BackendError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    execvp(argv[0], argv.data());
    int e = errno;
    (void)!write(err_pipe[1], &e, sizeof e);
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  close(err_pipe[1]);

  int exec_errno = 0;
  ssize_t n = read(err_pipe[0], &exec_errno, sizeof exec_errno);
  close(err_pipe[0]);
  if (n == static_cast<ssize_t>(sizeof exec_errno)) {
    close(in_pipe[1]);
    close(out_pipe[0]);
    waitpid(pid, nullptr, 0);
    throw BackendError("cannot launch solver '" + args[0] + "': " + std::strerror(exec_errno));
  }

  // The script is small; a broken pipe just means the solver exited early.
  static const bool sigpipe_ignored = [] {
    signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;
  std::size_t off = 0;
  while (off < input.size()) {
    ssize_t w = write(in_pipe[1], input.data() + off, input.size() - off);
    if (w < 0) {
      if (errno == EINTR) continue;
      break;
    }
    off += static_cast<std::size_t>(w);
  }
  close(in_pipe[1]);

  ProcessOutput result;
  auto deadline = std::chrono::steady_clock::now() + timeout;
  char buf[4096];
  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      result.timed_out = true;
      break;
    }
    pollfd pfd{out_pipe[0], POLLIN, 0};
    int pr = poll(&pfd, 1, static_cast<int>(left.count()));
    if (pr < 0 && errno == EINTR) continue;
    if (pr == 0) {
      result.timed_out = true;
      break;
    }
    ssize_t r = read(out_pipe[0], buf, sizeof buf);
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) break;
    result.out.append(buf, static_cast<std::size_t>(r));
  }
  close(out_pipe[0]);
  if (result.timed_out) kill(pid, SIGKILL);
  waitpid(pid, nullptr, 0);
  return result;
}

std::set<std::string> script_variables(const SsaFormula& f) {
  std::set<std::string> vars;
  for (const auto& c : f.conjuncts) {
    auto v = c.variables();
    vars.insert(v.begin(), v.end());
  }
  return vars;
}

}  // namespace

std::string smtlib_script(const SsaFormula& f) {
  std::set<std::string> vars = script_variables(f);
  std::ostringstream s;
  s << "(set-option :produce-models true)\n(set-logic QF_LIA)\n";
  for (const auto& v : vars) s << "(declare-const " << smt_symbol(v) << " Int)\n";
  for (const auto& c : f.conjuncts) {
    if (!c.is_true()) s << "(assert " << smt_term(c) << ")\n";
  }
  s << "(check-sat)\n";
  if (!vars.empty()) {
    s << "(get-value (";
    bool first = true;
    for (const auto& v : vars) {
      s << (first ? "" : " ") << smt_symbol(v);
      first = false;
    }
    s << "))\n";
  }
  s << "(exit)\n";
  return s.str();
}

SatResult smtlib_check(const SsaFormula& f, const std::string& command,
                       std::chrono::milliseconds timeout) {
  ProcessOutput po = run_process(command, smtlib_script(f), timeout);
  SatResult r;
  if (po.timed_out) {
    r.status = SatStatus::Unknown;
    r.reason = "solver timeout";
    return r;
  }
  SExprReader reader(po.out);
  auto head = reader.next();
  if (!head || head->is_list) throw BackendError("solver gave no check-sat answer");
  if (head->atom == "unsat") {
    r.status = SatStatus::Unsat;
    return r;
  }
  if (head->atom == "unknown") {
    r.status = SatStatus::Unknown;
    r.reason = "solver returned unknown";
    return r;
  }
  if (head->atom != "sat") throw BackendError("unexpected solver answer '" + head->atom + "'");
  r.status = SatStatus::Sat;
  if (script_variables(f).empty()) return r;
  auto values = reader.next();
  if (!values || !values->is_list) throw BackendError("solver gave no model");
  for (const auto& pair : values->list) {
    if (!pair.is_list || pair.list.size() != 2 || pair.list[0].is_list) {
      throw BackendError("malformed get-value entry");
    }
    r.model[pair.list[0].atom] = read_int(pair.list[1]);
  }
  return r;
}

SmtLibBackend::SmtLibBackend(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {}

SatResult SmtLibBackend::check(const SsaFormula& f) const {
  return smtlib_check(f, command_, timeout_);
}

}  // namespace partrace
