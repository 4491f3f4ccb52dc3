#include "partrace/expr.hpp"

#include <array>
#include <cctype>

#include "syntax.hpp"

namespace partrace {

namespace {

std::string format_pos(const std::string& message, SourcePos pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
         message;
}

int precedence(ExprKind kind) {
  switch (kind) {
    case ExprKind::Or:
      return 1;
    case ExprKind::And:
      return 2;
    case ExprKind::Eq:
    case ExprKind::Ne:
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge:
      return 3;
    case ExprKind::Add:
    case ExprKind::Sub:
      return 4;
    case ExprKind::Mul:
      return 5;
    case ExprKind::Neg:
    case ExprKind::Not:
      return 6;
    default:
      return 7;
  }
}

const char* op_symbol(ExprKind kind) {
  switch (kind) {
    case ExprKind::Add:
      return "+";
    case ExprKind::Sub:
      return "-";
    case ExprKind::Mul:
      return "*";
    case ExprKind::Eq:
      return "==";
    case ExprKind::Ne:
      return "!=";
    case ExprKind::Lt:
      return "<";
    case ExprKind::Le:
      return "<=";
    case ExprKind::Gt:
      return ">";
    case ExprKind::Ge:
      return ">=";
    case ExprKind::And:
      return "&&";
    case ExprKind::Or:
      return "||";
    default:
      return "?";
  }
}

bool is_comparison(ExprKind kind) {
  return kind == ExprKind::Eq || kind == ExprKind::Ne ||
         kind == ExprKind::Lt || kind == ExprKind::Le ||
         kind == ExprKind::Gt || kind == ExprKind::Ge;
}

void render(const Expr& e, int min_prec, std::string& out) {
  switch (e.kind()) {
    case ExprKind::IntConst: {
      bool neg = e.value() < 0;
      if (neg && min_prec > 6) out += '(';
      out += e.value().str();
      if (neg && min_prec > 6) out += ')';
      return;
    }
    case ExprKind::BoolConst:
      out += e.truth() ? "true" : "false";
      return;
    case ExprKind::Var:
      out += e.name();
      return;
    case ExprKind::Not:
      out += "!(";
      render(*e.lhs(), 0, out);
      out += ')';
      return;
    case ExprKind::Neg: {
      bool paren = min_prec > 6;
      if (paren) out += '(';
      out += '-';
      render(*e.lhs(), 6, out);
      if (paren) out += ')';
      return;
    }
    default:
      break;
  }
  int p = precedence(e.kind());
  bool paren = p < min_prec;
  if (paren) out += '(';
  // Left-associative binary operators; comparisons do not chain.
  render(*e.lhs(), is_comparison(e.kind()) ? p + 1 : p, out);
  out += op_symbol(e.kind());
  render(*e.rhs(), p + 1, out);
  if (paren) out += ')';
}

}  // namespace

ParseError::ParseError(const std::string& message, SourcePos pos)
    : std::runtime_error(format_pos(message, pos)), pos_(pos) {}

ExprPtr Expr::constant(Int value, SourcePos pos) {
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = ExprKind::IntConst;
  e->value_ = std::move(value);
  e->pos_ = pos;
  return e;
}

ExprPtr Expr::boolean(bool value, SourcePos pos) {
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = ExprKind::BoolConst;
  e->truth_ = value;
  e->pos_ = pos;
  return e;
}

ExprPtr Expr::var(std::string name, SourcePos pos) {
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = ExprKind::Var;
  e->name_ = std::move(name);
  e->pos_ = pos;
  return e;
}

ExprPtr Expr::unary(ExprKind kind, ExprPtr operand, SourcePos pos) {
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = kind;
  e->lhs_ = std::move(operand);
  e->pos_ = pos;
  return e;
}

ExprPtr Expr::binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = kind;
  e->lhs_ = std::move(lhs);
  e->rhs_ = std::move(rhs);
  e->pos_ = pos;
  return e;
}

bool Expr::is_boolean() const {
  return kind_ == ExprKind::BoolConst || kind_ == ExprKind::Not ||
         kind_ == ExprKind::And || kind_ == ExprKind::Or ||
         is_comparison(kind_);
}

std::string to_text(const Expr& e) {
  std::string out;
  render(e, 0, out);
  return out;
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == ExprKind::Var) out.insert(e.name());
  if (e.lhs()) collect_vars(*e.lhs(), out);
  if (e.rhs()) collect_vars(*e.rhs(), out);
}

Int eval_int(const Expr& e, const std::map<std::string, Int>& env) {
  switch (e.kind()) {
    case ExprKind::IntConst:
      return e.value();
    case ExprKind::Var: {
      auto it = env.find(e.name());
      return it == env.end() ? Int(0) : it->second;
    }
    case ExprKind::Neg:
      return -eval_int(*e.lhs(), env);
    case ExprKind::Add:
      return eval_int(*e.lhs(), env) + eval_int(*e.rhs(), env);
    case ExprKind::Sub:
      return eval_int(*e.lhs(), env) - eval_int(*e.rhs(), env);
    case ExprKind::Mul:
      return eval_int(*e.lhs(), env) * eval_int(*e.rhs(), env);
    default:
      throw std::logic_error("eval_int on boolean expression " + to_text(e));
  }
}

bool eval_bool(const Expr& e, const std::map<std::string, Int>& env) {
  switch (e.kind()) {
    case ExprKind::BoolConst:
      return e.truth();
    case ExprKind::Not:
      return !eval_bool(*e.lhs(), env);
    case ExprKind::And:
      return eval_bool(*e.lhs(), env) && eval_bool(*e.rhs(), env);
    case ExprKind::Or:
      return eval_bool(*e.lhs(), env) || eval_bool(*e.rhs(), env);
    case ExprKind::Eq:
      return eval_int(*e.lhs(), env) == eval_int(*e.rhs(), env);
    case ExprKind::Ne:
      return eval_int(*e.lhs(), env) != eval_int(*e.rhs(), env);
    case ExprKind::Lt:
      return eval_int(*e.lhs(), env) < eval_int(*e.rhs(), env);
    case ExprKind::Le:
      return eval_int(*e.lhs(), env) <= eval_int(*e.rhs(), env);
    case ExprKind::Gt:
      return eval_int(*e.lhs(), env) > eval_int(*e.rhs(), env);
    case ExprKind::Ge:
      return eval_int(*e.lhs(), env) >= eval_int(*e.rhs(), env);
    default:
      throw std::logic_error("eval_bool on integer expression " + to_text(e));
  }
}

namespace {

bool has_vars(const Expr& e) {
  if (e.kind() == ExprKind::Var) return true;
  return (e.lhs() && has_vars(*e.lhs())) || (e.rhs() && has_vars(*e.rhs()));
}

void check_sort(const Expr& e, bool want_bool,
                const std::set<std::string>* declared) {
  if (e.is_boolean() != want_bool) {
    throw ParseError(want_bool ? "expected a condition, found integer term '" +
                                     to_text(e) + "'"
                               : "expected an integer term, found condition '" +
                                     to_text(e) + "'",
                     e.pos());
  }
  switch (e.kind()) {
    case ExprKind::Var:
      if (declared && !declared->contains(e.name())) {
        throw ParseError("use of undeclared variable '" + e.name() + "'",
                         e.pos());
      }
      return;
    case ExprKind::Neg:
      check_sort(*e.lhs(), false, declared);
      return;
    case ExprKind::Not:
      check_sort(*e.lhs(), true, declared);
      return;
    case ExprKind::And:
    case ExprKind::Or:
      check_sort(*e.lhs(), true, declared);
      check_sort(*e.rhs(), true, declared);
      return;
    case ExprKind::Mul:
      check_sort(*e.lhs(), false, declared);
      check_sort(*e.rhs(), false, declared);
      if (has_vars(*e.lhs()) && has_vars(*e.rhs())) {
        throw ParseError("non-linear arithmetic in '" + to_text(e) + "'",
                         e.pos());
      }
      return;
    case ExprKind::IntConst:
    case ExprKind::BoolConst:
      return;
    default:
      // Add, Sub and the comparisons take integer operands.
      check_sort(*e.lhs(), false, declared);
      check_sort(*e.rhs(), false, declared);
      return;
  }
}

}  // namespace

void check_expression(const Expr& e, bool expect_boolean,
                      const std::set<std::string>* declared) {
  check_sort(e, expect_boolean, declared);
}

ExprPtr parse_expression(std::string_view text, bool expect_boolean) {
  detail::TokenStream ts(detail::tokenize(text));
  ExprPtr e = detail::parse_expr(ts);
  if (!ts.at_end()) {
    throw ParseError("unexpected '" + ts.peek().text + "' after expression",
                     ts.peek().pos);
  }
  check_expression(*e, expect_boolean);
  return e;
}

// ---------------------------------------------------------------------------
// Tokenizer and expression parser

namespace detail {

namespace {

constexpr std::array<std::string_view, 9> kKeywords = {
    "int", "if", "else", "while", "assert", "assume", "havoc", "true", "false"};

}  // namespace

bool is_keyword(std::string_view word) {
  for (auto k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourcePos pos{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    auto two = src.substr(i, 2);
    Tok kind = Tok::End;
    std::size_t len = 2;
    if (two == "==") kind = Tok::EqEq;
    else if (two == "!=") kind = Tok::NotEq;
    else if (two == "<=") kind = Tok::Le;
    else if (two == ">=") kind = Tok::Ge;
    else if (two == "&&") kind = Tok::AndAnd;
    else if (two == "||") kind = Tok::OrOr;
    else {
      len = 1;
      switch (c) {
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case ';': kind = Tok::Semi; break;
        case '=': kind = Tok::Assign; break;
        case '<': kind = Tok::Lt; break;
        case '>': kind = Tok::Gt; break;
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '*': kind = Tok::Star; break;
        case '!': kind = Tok::Bang; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", pos);
      }
    }
    out.push_back({kind, std::string(src.substr(i, len)), pos});
    advance(len);
  }
  out.push_back({Tok::End, "end of input", {line, col}});
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t k = std::min(index_ + ahead, tokens_.size() - 1);
  return tokens_[k];
}

Token TokenStream::next() {
  Token t = peek();
  if (index_ < tokens_.size() - 1) ++index_;
  return t;
}

bool TokenStream::accept(Tok kind) {
  if (peek().kind != kind) return false;
  next();
  return true;
}

bool TokenStream::accept_keyword(std::string_view word) {
  if (peek().kind != Tok::Ident || peek().text != word) return false;
  next();
  return true;
}

Token TokenStream::expect(Tok kind, std::string_view what) {
  if (peek().kind != kind) {
    throw ParseError("expected " + std::string(what) + ", found '" +
                         peek().text + "'",
                     peek().pos);
  }
  return next();
}

namespace {

ExprPtr parse_or(TokenStream& ts);

ExprPtr parse_primary(TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.kind == Tok::Number) {
    Token n = ts.next();
    return Expr::constant(Int(n.text), n.pos);
  }
  if (t.kind == Tok::Ident) {
    Token id = ts.next();
    if (id.text == "true") return Expr::boolean(true, id.pos);
    if (id.text == "false") return Expr::boolean(false, id.pos);
    if (is_keyword(id.text)) {
      throw ParseError("unexpected keyword '" + id.text + "'", id.pos);
    }
    return Expr::var(id.text, id.pos);
  }
  if (t.kind == Tok::LParen) {
    ts.next();
    ExprPtr e = parse_or(ts);
    ts.expect(Tok::RParen, "')'");
    return e;
  }
  throw ParseError("expected an expression, found '" + t.text + "'", t.pos);
}

ExprPtr parse_unary(TokenStream& ts) {
  SourcePos pos = ts.peek().pos;
  if (ts.accept(Tok::Minus)) {
    return Expr::unary(ExprKind::Neg, parse_unary(ts), pos);
  }
  if (ts.accept(Tok::Bang)) {
    return Expr::unary(ExprKind::Not, parse_unary(ts), pos);
  }
  return parse_primary(ts);
}

ExprPtr parse_mul(TokenStream& ts) {
  ExprPtr e = parse_unary(ts);
  while (ts.peek().kind == Tok::Star) {
    SourcePos pos = ts.next().pos;
    e = Expr::binary(ExprKind::Mul, e, parse_unary(ts), pos);
  }
  return e;
}

ExprPtr parse_add(TokenStream& ts) {
  ExprPtr e = parse_mul(ts);
  for (;;) {
    Tok k = ts.peek().kind;
    if (k != Tok::Plus && k != Tok::Minus) return e;
    SourcePos pos = ts.next().pos;
    e = Expr::binary(k == Tok::Plus ? ExprKind::Add : ExprKind::Sub, e,
                     parse_mul(ts), pos);
  }
}

ExprPtr parse_cmp(TokenStream& ts) {
  ExprPtr e = parse_add(ts);
  ExprKind kind;
  switch (ts.peek().kind) {
    case Tok::EqEq: kind = ExprKind::Eq; break;
    case Tok::NotEq: kind = ExprKind::Ne; break;
    case Tok::Lt: kind = ExprKind::Lt; break;
    case Tok::Le: kind = ExprKind::Le; break;
    case Tok::Gt: kind = ExprKind::Gt; break;
    case Tok::Ge: kind = ExprKind::Ge; break;
    default:
      return e;
  }
  SourcePos pos = ts.next().pos;
  return Expr::binary(kind, e, parse_add(ts), pos);
}

ExprPtr parse_and(TokenStream& ts) {
  ExprPtr e = parse_cmp(ts);
  while (ts.peek().kind == Tok::AndAnd) {
    SourcePos pos = ts.next().pos;
    e = Expr::binary(ExprKind::And, e, parse_cmp(ts), pos);
  }
  return e;
}

ExprPtr parse_or(TokenStream& ts) {
  ExprPtr e = parse_and(ts);
  while (ts.peek().kind == Tok::OrOr) {
    SourcePos pos = ts.next().pos;
    e = Expr::binary(ExprKind::Or, e, parse_and(ts), pos);
  }
  return e;
}

}  // namespace

ExprPtr parse_expr(TokenStream& ts) { return parse_or(ts); }

}  // namespace detail
}  // namespace partrace
