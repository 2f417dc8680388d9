#include <cctype>
#include <set>

#include "lexer.hpp"
#include "persevo/syntax.hpp"

namespace persevo {
namespace detail {

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string s, int l, int c) { out.push_back({k, std::move(s), l, c}); };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    int l = line, cc = col;
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      push(Tok::Name, text.substr(i, j - i), l, cc);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      push(Tok::Arrow, "->", l, cc);
      i += 2;
      col += 2;
      continue;
    }
    if (c == '<' && i + 1 < text.size() && text[i + 1] == '-') {
      push(Tok::BackArrow, "<-", l, cc);
      i += 2;
      col += 2;
      continue;
    }
    Tok k;
    switch (c) {
      case '#': k = Tok::Hash; break;
      case '@': k = Tok::At; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ';': k = Tok::Semi; break;
      case ',': k = Tok::Comma; break;
      case '.': k = Tok::Dot; break;
      case ':': k = Tok::Colon; break;
      case '=': k = Tok::Eq; break;
      default:
        throw Error(ErrorKind::Syntax, "SYNTAX", std::string("unexpected character '") + c + "'",
                    std::to_string(l) + ":" + std::to_string(cc));
    }
    push(k, std::string(1, c), l, cc);
    ++i;
    ++col;
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

void TokenStream::fail_at(const Token& t, const std::string& msg) const {
  throw Error(ErrorKind::Syntax, "SYNTAX", msg, std::to_string(t.line) + ":" + std::to_string(t.col));
}

void TokenStream::fail(const std::string& msg) const { fail_at(peek(), msg); }

Token TokenStream::expect(Tok k, const std::string& what) {
  if (!at(k)) fail("expected " + what + ", found " + describe(peek()));
  return next();
}

std::string TokenStream::expect_name(const std::string& what) {
  if (!at(Tok::Name) || is_reserved_word(peek().text))
    fail("expected " + what + ", found " + describe(peek()));
  if (!is_valid_name(peek().text)) fail("invalid name " + describe(peek()));
  return next().text;
}

void TokenStream::expect_word(const std::string& w) {
  if (!at_word(w)) fail("expected '" + w + "', found " + describe(peek()));
  next();
}

}  // namespace detail

namespace {

using detail::Tok;
using detail::Token;
using detail::TokenStream;

class Parser {
 public:
  Parser(const std::string& text, bool allow_annotated)
      : ts_(detail::lex(text)), allow_annotated_(allow_annotated) {}

  Program program() {
    Program p;
    while (ts_.at_word("class")) {
      Token start = ts_.peek();
      ClassDecl c = class_decl();
      if (p.ct.count(c.name)) ts_.fail_at(start, "duplicate class " + c.name);
      p.ct.emplace(c.name, std::move(c));
    }
    ts_.expect_word("main");
    ts_.expect(Tok::LBrace, "'{'");
    p.main = expr();
    ts_.expect(Tok::RBrace, "'}'");
    ts_.expect(Tok::End, "end of input");
    validate_class_table(p.ct);
    return p;
  }

  ExprPtr lone_expr() {
    ExprPtr e = expr();
    ts_.expect(Tok::End, "end of input");
    return e;
  }

 private:
  ClassDecl class_decl() {
    ts_.expect_word("class");
    ClassDecl c;
    c.name = ts_.expect_name("class name");
    if (c.name == kObject) ts_.fail("Object cannot be redeclared");
    ts_.expect_word("extends");
    c.super = ts_.expect_name("superclass name");
    if (c.super == c.name) ts_.fail("cyclic inheritance: " + c.name + " extends itself");
    ts_.expect(Tok::LBrace, "'{'");
    std::set<std::string> fnames, mnames;
    // Fields come first: `T f;`. A method starts with `T m(`.
    while (ts_.at(Tok::Name) && ts_.peek(1).kind == Tok::Name && ts_.peek(2).kind == Tok::Semi) {
      Token at = ts_.peek(1);
      FieldDecl f;
      f.type = ts_.expect_name("field type");
      f.name = ts_.expect_name("field name");
      ts_.expect(Tok::Semi, "';'");
      if (f.name == "id" || f.name == "time") ts_.fail_at(at, "field name '" + f.name + "' is reserved");
      if (!fnames.insert(f.name).second) ts_.fail_at(at, "duplicate field " + f.name + " in " + c.name);
      c.fields.push_back(std::move(f));
    }
    while (!ts_.at(Tok::RBrace)) {
      Token at = ts_.peek(1);
      MethodDecl m = method_decl();
      if (!mnames.insert(m.name).second) ts_.fail_at(at, "duplicate method " + m.name + " in " + c.name);
      c.methods.push_back(std::move(m));
    }
    ts_.expect(Tok::RBrace, "'}'");
    return c;
  }

  MethodDecl method_decl() {
    MethodDecl m;
    m.ret = ts_.expect_name("return type");
    Token at = ts_.peek();
    m.name = ts_.expect_name("method name");
    if (m.name == "set") ts_.fail_at(at, "'set' is predefined and cannot be declared");
    ts_.expect(Tok::LParen, "'('");
    std::set<std::string> pnames;
    if (!ts_.at(Tok::RParen)) {
      do {
        Param p;
        p.type = ts_.expect_name("parameter type");
        Token pt = ts_.peek();
        p.name = ts_.expect_name("parameter name");
        if (p.name == "this") ts_.fail_at(pt, "'this' cannot be a parameter");
        if (!pnames.insert(p.name).second) ts_.fail_at(pt, "duplicate parameter " + p.name);
        m.params.push_back(std::move(p));
      } while (ts_.at(Tok::Comma) && (ts_.next(), true));
    }
    ts_.expect(Tok::RParen, "')'");
    ts_.expect(Tok::LBrace, "'{'");
    ts_.expect_word("return");
    m.body = expr();
    ts_.expect(Tok::Semi, "';'");
    ts_.expect(Tok::RBrace, "'}'");
    return m;
  }

  std::vector<ExprPtr> args_until_rparen() {
    std::vector<ExprPtr> args;
    if (!ts_.at(Tok::RParen)) {
      args.push_back(expr());
      while (ts_.at(Tok::Comma)) {
        ts_.next();
        args.push_back(expr());
      }
    }
    ts_.expect(Tok::RParen, "')'");
    return args;
  }

  ExprPtr expr() {
    ExprPtr e = primary();
    while (ts_.at(Tok::Dot)) {
      ts_.next();
      std::string n = ts_.expect_name("field or method name");
      if (ts_.at(Tok::LParen)) {
        ts_.next();
        auto args = args_until_rparen();
        e = n == "set" ? make_set(e, std::move(args)) : make_call(e, n, std::move(args));
      } else {
        e = make_field(e, n);
      }
    }
    return e;
  }

  std::string identifier() {
    ts_.expect(Tok::Hash, "'#'");
    Token t = ts_.peek();
    if (!t.text.empty() && t.kind == Tok::Name && t.text == "_") ts_.fail("'_' is not a valid identifier");
    if (t.kind != Tok::Name) ts_.fail("expected identifier name, found " + detail::describe(t));
    return ts_.next().text;
  }

  ExprPtr primary() {
    if (ts_.at(Tok::Hash)) {
      Token start = ts_.peek();
      std::string id = identifier();
      if (ts_.at(Tok::At)) {
        if (!allow_annotated_) ts_.fail_at(start, "annotated identifiers are not allowed in source programs");
        ts_.next();
        std::string cls = ts_.expect_name("class name");
        return make_ann(id, cls);
      }
      return make_raw(id);
    }
    if (ts_.at_word("new")) {
      ts_.next();
      std::string cls = ts_.expect_name("class name");
      ts_.expect(Tok::LParen, "'('");
      if (!ts_.at(Tok::Hash)) ts_.fail("constructor key must be an identifier '#name'");
      std::string key = identifier();
      if (ts_.at(Tok::At)) ts_.fail("constructor key must be a raw identifier");
      std::vector<ExprPtr> args;
      while (ts_.at(Tok::Comma)) {
        ts_.next();
        args.push_back(expr());
      }
      ts_.expect(Tok::RParen, "')'");
      return make_new(cls, key, std::move(args));
    }
    if (ts_.at(Tok::Name) && !is_reserved_word(ts_.peek().text)) return make_var(ts_.next().text);
    ts_.fail("expected expression, found " + detail::describe(ts_.peek()));
  }

  TokenStream ts_;
  bool allow_annotated_;
};

}  // namespace

Program parse_program(const std::string& text) { return Parser(text, false).program(); }

ExprPtr parse_expr(const std::string& text, bool allow_annotated) {
  return Parser(text, allow_annotated).lone_expr();
}

}  // namespace persevo
