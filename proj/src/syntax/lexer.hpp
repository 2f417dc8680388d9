#pragma once

#include <string>
#include <vector>

#include "persevo/error.hpp"

namespace persevo::detail {

enum class Tok { Name, Hash, At, LBrace, RBrace, LParen, RParen, Semi, Comma, Dot, Arrow, BackArrow, Colon, Eq, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> lex(const std::string& text);
std::string describe(const Token& t);

/** Cursor over a token stream with syntax-error reporting. */
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(const std::string& w) const { return peek().kind == Tok::Name && peek().text == w; }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  Token expect(Tok k, const std::string& what);
  std::string expect_name(const std::string& what);
  void expect_word(const std::string& w);
  [[noreturn]] void fail(const std::string& msg) const;
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const;

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace persevo::detail
