#include "partrace/program.hpp"

#include <map>
#include <unordered_map>

#include "syntax.hpp"

namespace partrace {

namespace {

using detail::Tok;
using detail::TokenStream;

class ProgramParser {
 public:
  explicit ProgramParser(std::string_view source) : ts_(detail::tokenize(source)) {}

  Program run() {
    Program p;
    while (ts_.peek().kind == Tok::Ident && ts_.peek().text == "int") {
      ts_.next();
      detail::Token id = ts_.expect(Tok::Ident, "variable name");
      if (detail::is_keyword(id.text)) {
        throw ParseError("keyword '" + id.text + "' used as variable name", id.pos);
      }
      if (!declared_.insert(id.text).second) {
        throw ParseError("duplicate declaration of '" + id.text + "'", id.pos);
      }
      p.variables.push_back(id.text);
      ts_.expect(Tok::Semi, "';'");
    }
    while (!ts_.at_end()) p.body.push_back(statement());
    return p;
  }

 private:
  ExprPtr condition() {
    ts_.expect(Tok::LParen, "'('");
    ExprPtr e = detail::parse_expr(ts_);
    ts_.expect(Tok::RParen, "')'");
    check_expression(*e, true, &declared_);
    return e;
  }

  std::vector<Stmt> block() {
    ts_.expect(Tok::LBrace, "'{'");
    std::vector<Stmt> out;
    while (ts_.peek().kind != Tok::RBrace) {
      if (ts_.at_end()) throw ParseError("unterminated block", ts_.peek().pos);
      out.push_back(statement());
    }
    ts_.next();
    return out;
  }

  std::string declared_target() {
    detail::Token id = ts_.expect(Tok::Ident, "variable name");
    if (!declared_.contains(id.text)) {
      throw ParseError("use of undeclared variable '" + id.text + "'", id.pos);
    }
    return id.text;
  }

  Stmt statement() {
    Stmt s;
    const detail::Token t = ts_.peek();
    s.pos = t.pos;
    if (t.kind != Tok::Ident) {
      throw ParseError("expected a statement, found '" + t.text + "'", t.pos);
    }
    if (ts_.accept_keyword("if")) {
      s.kind = StmtKind::If;
      s.expr = condition();
      s.then_body = block();
      if (ts_.accept_keyword("else")) s.else_body = block();
      return s;
    }
    if (ts_.accept_keyword("while")) {
      s.kind = StmtKind::While;
      s.expr = condition();
      s.then_body = block();
      return s;
    }
    if (ts_.accept_keyword("assert") || ts_.accept_keyword("assume")) {
      s.kind = t.text == "assert" ? StmtKind::Assert : StmtKind::Assume;
      s.expr = condition();
      ts_.expect(Tok::Semi, "';'");
      return s;
    }
    if (ts_.accept_keyword("havoc")) {
      s.kind = StmtKind::Havoc;
      s.target = declared_target();
      ts_.expect(Tok::Semi, "';'");
      return s;
    }
    if (detail::is_keyword(t.text)) {
      throw ParseError("unexpected keyword '" + t.text + "'", t.pos);
    }
    s.kind = StmtKind::Assign;
    s.target = declared_target();
    ts_.expect(Tok::Assign, "'='");
    s.expr = detail::parse_expr(ts_);
    check_expression(*s.expr, false, &declared_);
    ts_.expect(Tok::Semi, "';'");
    return s;
  }

  TokenStream ts_;
  std::set<std::string> declared_;
};

class AutomatonBuilder {
 public:
  AutomatonBuilder() : table_(std::make_shared<SymbolTable>()) {}

  ProgramAutomaton run(const Program& p) {
    number(p.body);
    std::size_t end = next_id_;
    NfaBuilder b(table_);
    builder_ = &b;
    for (std::size_t i = 0; i <= end; ++i) b.add_state(std::to_string(i));
    b.set_initial(0);
    compile_block(p.body, static_cast<State>(end));
    builder_ = nullptr;
    for (const auto& v : p.variables) variables_.insert(v);
    return ProgramAutomaton(std::move(b).build());
  }

 private:
  void number(const std::vector<Stmt>& stmts) {
    for (const auto& s : stmts) {
      ids_[&s] = static_cast<State>(next_id_++);
      number(s.then_body);
      number(s.else_body);
    }
  }

  State entry(const std::vector<Stmt>& stmts, State fallback) const {
    return stmts.empty() ? fallback : ids_.at(&stmts.front());
  }

  void edge(State from, const Operation& op, State to) {
    builder_->add_transition(from, table_->intern(op), to);
  }

  void compile_block(const std::vector<Stmt>& stmts, State exit) {
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      State succ = i + 1 < stmts.size() ? ids_.at(&stmts[i + 1]) : exit;
      compile(stmts[i], succ);
    }
  }

  void compile(const Stmt& s, State succ) {
    State loc = ids_.at(&s);
    auto negated = [&] { return Expr::unary(ExprKind::Not, s.expr, s.expr->pos()); };
    switch (s.kind) {
      case StmtKind::Assign:
        edge(loc, Operation::assign(s.target, s.expr), succ);
        break;
      case StmtKind::Havoc:
        edge(loc, Operation::havoc(s.target), succ);
        break;
      case StmtKind::Assume:
        edge(loc, Operation::assume(s.expr), succ);
        break;
      case StmtKind::Assert: {
        edge(loc, Operation::assume(s.expr), succ);
        State err = builder_->add_state(std::to_string(loc) + "_err");
        builder_->set_accepting(err);
        edge(loc, Operation::assume(negated()), err);
        break;
      }
      case StmtKind::If:
        edge(loc, Operation::assume(s.expr), entry(s.then_body, succ));
        edge(loc, Operation::assume(negated()), entry(s.else_body, succ));
        compile_block(s.then_body, succ);
        compile_block(s.else_body, succ);
        break;
      case StmtKind::While:
        edge(loc, Operation::assume(s.expr), entry(s.then_body, loc));
        edge(loc, Operation::assume(negated()), succ);
        compile_block(s.then_body, loc);
        break;
    }
  }

  std::shared_ptr<SymbolTable> table_;
  NfaBuilder* builder_ = nullptr;
  std::unordered_map<const Stmt*, State> ids_;
  std::size_t next_id_ = 0;
  std::set<std::string> variables_;
};

}  // namespace

Program parse_program(std::string_view source) { return ProgramParser(source).run(); }

ProgramAutomaton::ProgramAutomaton(Nfa automaton) : automaton_(std::move(automaton)) {
  const Nfa& a = automaton_;
  for (State s = 0; s < a.num_states(); ++s) {
    const auto& out = a.outgoing(s);
    if (a.is_accepting(s) && !out.empty()) {
      throw std::invalid_argument("error location '" + a.name(s) + "' has outgoing transitions");
    }
    std::set<Symbol> labels;
    for (auto idx : out) {
      Symbol sym = a.transitions()[idx].symbol;
      if (!labels.insert(sym).second) {
        throw std::invalid_argument("determinism violation at location '" + a.name(s) +
                                    "' on '" + (*a.symbols())[sym].text() + "'");
      }
    }
  }
}

std::set<std::string> ProgramAutomaton::variables() const {
  std::set<std::string> out;
  for (Symbol s : automaton_.alphabet()) {
    const Operation& op = (*automaton_.symbols())[s];
    if (!op.target().empty()) out.insert(op.target());
    if (op.expr()) collect_vars(*op.expr(), out);
  }
  return out;
}

ProgramAutomaton build_program_automaton(const Program& program) {
  return AutomatonBuilder().run(program);
}

ProgramAutomaton load_automaton(std::string_view text) {
  return ProgramAutomaton(parse_automaton(text).automaton);
}

}  // namespace partrace
