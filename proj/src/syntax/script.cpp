#include <set>
#include <sstream>

#include "lexer.hpp"
#include "persevo/syntax.hpp"

namespace persevo {

namespace {

using detail::Tok;
using detail::Token;
using detail::TokenStream;

std::string join_list(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += xs[i];
  }
  return out;
}

// Parses `{ item (sep item)* }` where sep is ',' or ';'. A trailing separator is allowed.
template <typename F>
void braced_items(TokenStream& ts, F item) {
  ts.expect(Tok::LBrace, "'{'");
  while (!ts.at(Tok::RBrace)) {
    item();
    if (ts.at(Tok::Comma) || ts.at(Tok::Semi)) {
      ts.next();
    } else if (!ts.at(Tok::RBrace)) {
      ts.fail("expected ',' or '}', found " + detail::describe(ts.peek()));
    }
  }
  ts.expect(Tok::RBrace, "'}'");
}

void require_nonempty(TokenStream& ts, const EvolutionOp& op) {
  if (op.names.empty()) ts.fail(op_name(op.kind) + " needs at least one field");
}

void require_distinct(TokenStream& ts, const std::vector<std::string>& xs, const std::string& what) {
  std::set<std::string> seen;
  for (const auto& x : xs)
    if (!seen.insert(x).second) ts.fail("duplicate " + what + " " + x);
}

EvolutionOp parse_tokens(TokenStream& ts) {
  EvolutionOp op;
  Token head = ts.peek();
  std::string name = ts.expect_name("operation name");
  if (name == "DeleteClass")
    ts.fail_at(head, "DeleteClass is an internal operation and cannot appear in scripts");
  if (name == "NewClass") {
    op.kind = OpKind::NewClass;
    op.cls = ts.expect_name("class name");
    ts.expect_word("extends");
    op.other = ts.expect_name("superclass name");
    if (ts.at(Tok::LBrace)) {
      braced_items(ts, [&] {
        op.types.push_back(ts.expect_name("field type"));
        op.names.push_back(ts.expect_name("field name"));
      });
    }
  } else if (name == "RenameClass") {
    op.kind = OpKind::RenameClass;
    op.cls = ts.expect_name("class name");
    ts.expect(Tok::Arrow, "'->'");
    op.other = ts.expect_name("new class name");
  } else if (name == "RenameField") {
    op.kind = OpKind::RenameField;
    op.cls = ts.expect_name("class name");
    braced_items(ts, [&] {
      op.names.push_back(ts.expect_name("field name"));
      ts.expect(Tok::Arrow, "'->'");
      op.news.push_back(ts.expect_name("new field name"));
    });
    require_nonempty(ts, op);
    require_distinct(ts, op.news, "new field name");
  } else if (name == "AddField") {
    op.kind = OpKind::AddField;
    op.cls = ts.expect_name("class name");
    braced_items(ts, [&] {
      op.types.push_back(ts.expect_name("field type"));
      op.names.push_back(ts.expect_name("field name"));
      if (!ts.at(Tok::Eq)) ts.fail("arity mismatch: field " + op.names.back() + " has no default '= #id'");
      ts.next();
      ts.expect(Tok::Hash, "'#'");
      if (ts.at_word("_")) ts.fail("'_' is not a valid identifier");
      op.defaults.push_back(ts.expect(Tok::Name, "default identifier").text);
    });
    require_nonempty(ts, op);
  } else if (name == "DeleteField") {
    op.kind = OpKind::DeleteField;
    op.cls = ts.expect_name("class name");
    braced_items(ts, [&] { op.names.push_back(ts.expect_name("field name")); });
    require_nonempty(ts, op);
  } else if (name == "ChangeFieldType") {
    op.kind = OpKind::ChangeFieldType;
    op.cls = ts.expect_name("class name");
    braced_items(ts, [&] {
      op.names.push_back(ts.expect_name("field name"));
      if (!ts.at(Tok::Colon)) ts.fail("arity mismatch: field " + op.names.back() + " has no type ': T'");
      ts.next();
      op.types.push_back(ts.expect_name("field type"));
    });
    require_nonempty(ts, op);
  } else if (name == "NewSupClass") {
    op.kind = OpKind::NewSupClass;
    op.cls = ts.expect_name("class name");
    ts.expect(Tok::Arrow, "'->'");
    op.other = ts.expect_name("superclass name");
    braced_items(ts, [&] { op.names.push_back(ts.expect_name("field name")); });
  } else if (name == "MergeClass") {
    op.kind = OpKind::MergeClass;
    op.cls = ts.expect_name("class name");
    ts.expect(Tok::BackArrow, "'<-'");
    op.other = ts.expect_name("superclass name");
  } else {
    ts.fail_at(head, "unknown operation " + name);
  }
  require_distinct(ts, op.names, "field");
  ts.expect(Tok::End, "end of line");
  return op;
}

}  // namespace

std::string op_name(OpKind k) {
  switch (k) {
    case OpKind::NewClass: return "NewClass";
    case OpKind::RenameClass: return "RenameClass";
    case OpKind::RenameField: return "RenameField";
    case OpKind::AddField: return "AddField";
    case OpKind::DeleteField: return "DeleteField";
    case OpKind::ChangeFieldType: return "ChangeFieldType";
    case OpKind::NewSupClass: return "NewSupClass";
    case OpKind::MergeClass: return "MergeClass";
    case OpKind::DeleteClass: return "DeleteClass";
  }
  return "?";
}

std::string print_op(const EvolutionOp& op) {
  std::string out = op_name(op.kind) + " " + op.cls;
  std::vector<std::string> items;
  switch (op.kind) {
    case OpKind::NewClass:
      out += " extends " + op.other;
      if (op.names.empty()) return out + " {}";
      out += " {";
      for (std::size_t i = 0; i < op.names.size(); ++i) out += " " + op.types[i] + " " + op.names[i] + ";";
      return out + " }";
    case OpKind::RenameClass: return out + " -> " + op.other;
    case OpKind::RenameField:
      for (std::size_t i = 0; i < op.names.size(); ++i) items.push_back(op.names[i] + " -> " + op.news[i]);
      break;
    case OpKind::AddField:
      for (std::size_t i = 0; i < op.names.size(); ++i)
        items.push_back(op.types[i] + " " + op.names[i] + " = #" + op.defaults[i]);
      break;
    case OpKind::DeleteField: items = op.names; break;
    case OpKind::ChangeFieldType:
      for (std::size_t i = 0; i < op.names.size(); ++i) items.push_back(op.names[i] + " : " + op.types[i]);
      break;
    case OpKind::NewSupClass:
      out += " -> " + op.other;
      items = op.names;
      break;
    case OpKind::MergeClass: return out + " <- " + op.other;
    case OpKind::DeleteClass: return out;
  }
  if (items.empty()) return out + " {}";
  return out + " { " + join_list(items) + " }";
}

EvolutionOp parse_op(const std::string& line) {
  TokenStream ts(detail::lex(line));
  return parse_tokens(ts);
}

std::vector<EvolutionOp> parse_evolution_script(const std::string& text) {
  std::vector<EvolutionOp> ops;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::lex(line);
    if (toks.size() == 1) continue;  // blank or comment-only line
    for (auto& t : toks) t.line = lineno;
    TokenStream ts(std::move(toks));
    ops.push_back(parse_tokens(ts));
  }
  return ops;
}

}  // namespace persevo
