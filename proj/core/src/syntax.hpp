#pragma once

// Shared tokenizer and expression parser for program sources, automaton
// files and predicate text.

#include <string>
#include <string_view>
#include <vector>

#include "partrace/expr.hpp"

namespace partrace::detail {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Semi,
  Assign,
  EqEq,
  NotEq,
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  Star,
  Bang,
  AndAnd,
  OrOr,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

std::vector<Token> tokenize(std::string_view source);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool accept(Tok kind);
  bool accept_keyword(std::string_view word);
  Token expect(Tok kind, std::string_view what);
  bool at_end() const { return peek().kind == Tok::End; }

 private:
  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

/// Precedence-climbing parser over the full operator set. Sorts are checked
/// separately by check_expression.
ExprPtr parse_expr(TokenStream& ts);

bool is_keyword(std::string_view word);

}  // namespace partrace::detail
