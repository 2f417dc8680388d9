#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "gen.hpp"
#include "persevo/syntax.hpp"

using namespace persevo;

namespace {

const char* kLogin = R"(class Bool extends Object {}
class LoginStatus extends Object {
  Bool status;
  Bool check(Bool b) { return this.set(b).status; }
}
main { new LoginStatus(#kamina, #t).set(#t2).status }
)";

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Io;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.diagnostic().render();
  }
  return "";
}

}  // namespace

TEST_CASE("program parses into the expected tree") {
  Program p = parse_program(kLogin);
  REQUIRE(p.ct.size() == 2);
  const ClassDecl& ls = p.ct.at("LoginStatus");
  CHECK(ls.super == "Object");
  REQUIRE(ls.fields.size() == 1);
  CHECK(ls.fields[0] == FieldDecl{"Bool", "status"});
  REQUIRE(ls.methods.size() == 1);
  CHECK(ls.methods[0].params[0] == Param{"Bool", "b"});

  // main = ((new LoginStatus(#kamina, #t)).set(#t2)).status
  const ExprPtr& m = p.main;
  CHECK(m->kind == ExprKind::Field);
  CHECK(m->name == "status");
  CHECK(m->recv->kind == ExprKind::Set);
  CHECK(m->recv->args[0]->kind == ExprKind::RawId);
  CHECK(m->recv->recv->kind == ExprKind::New);
  CHECK(m->recv->recv->name == "kamina");
  CHECK(m->recv->recv->cls == "LoginStatus");
}

TEST_CASE("printing then parsing is the identity on the example") {
  Program p = parse_program(kLogin);
  CHECK(print_program(p) == kLogin);
  CHECK(parse_program(print_program(p)) == p);
}

TEST_CASE("round trip holds on generated programs") {
  gen::Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    gen::Config cfg = gen::gen_config(rng, jpa_backend());
    Program p{cfg.ct, cfg.main};
    std::string text = print_program(p);
    Program q = parse_program(text);
    CHECK(q == p);
    CHECK(print_program(q) == text);
  }
}

TEST_CASE("annotated identifiers print with their class and are rejected in source") {
  CHECK(print_expr(make_ann("l", "C")) == "#l@C");
  CHECK(expr_equal(parse_expr("#l@C.f", true), make_field(make_ann("l", "C"), "f")));
  CHECK(kind_of([] { parse_expr("#l@C.f"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_program("main { #l@C }"); }) == ErrorKind::Syntax);
  CHECK(contains_ann_id(parse_expr("#a.m(#b@D)", true)));
  CHECK_FALSE(contains_ann_id(parse_expr("#a.m(#b)")));
}

TEST_CASE("reserved and predefined names are refused") {
  CHECK(kind_of([] { parse_program("class A extends Object { A id; } main { #x }"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_program("class A extends Object { A time; } main { #x }"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_program("class A extends Object { A set(A x) { return x; } } main { #x }"); }) ==
        ErrorKind::Syntax);
  CHECK(kind_of([] { parse_program("class A extends Object { A m(A this) { return this; } } main { #x }"); }) ==
        ErrorKind::Syntax);
  CHECK(kind_of([] { parse_program("main { #_ }"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_program("class new extends Object {} main { #x }"); }) == ErrorKind::Syntax);
  CHECK(is_reserved_word("extends"));
  CHECK_FALSE(is_valid_name("bad-name"));
  CHECK(is_valid_name("status"));
}

TEST_CASE("duplicates and malformed classes are refused") {
  CHECK(kind_of([] { parse_program("class A extends Object { A f; A f; } main { #x }"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_program("class A extends A {} main { #x }"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_program("class Object extends Object {} main { #x }"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_program("class A extends B {} class B extends A {} main { #x }"); }) ==
        ErrorKind::Syntax);
  CHECK(kind_of([] { parse_program("class A extends Missing {} main { #x }"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_program("class A extends Object {}"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_program("main { new A(#k@A) }"); }) == ErrorKind::Syntax);
}

TEST_CASE("syntax errors carry line and column") {
  std::string msg = message_of([] { parse_program("class A extends Object {\n  A f\n}\nmain { #x }"); });
  CHECK(msg.rfind("SYNTAX: ", 0) == 0);
  CHECK(msg.find("@ 3:") != std::string::npos);
}

TEST_CASE("evolution scripts round trip through print_op") {
  const char* lines[] = {
      "NewClass N extends C { D f; E g; }",
      "NewClass N extends Object {}",
      "RenameClass C -> D",
      "RenameField C { f -> g, h -> k }",
      "AddField C { D f = #d, E g = #e }",
      "DeleteField C { f, g }",
      "ChangeFieldType C { f : D }",
      "NewSupClass C -> D { b }",
      "MergeClass C <- D",
  };
  for (const char* l : lines) {
    CAPTURE(l);
    EvolutionOp op = parse_op(l);
    CHECK(print_op(op) == l);
    CHECK(parse_op(print_op(op)) == op);
  }
  EvolutionOp add = parse_op("AddField C { D f = #d }");
  CHECK(add.kind == OpKind::AddField);
  CHECK(add.cls == "C");
  CHECK(add.types == std::vector<std::string>{"D"});
  CHECK(add.names == std::vector<std::string>{"f"});
  CHECK(add.defaults == std::vector<std::string>{"d"});
  EvolutionOp merge = parse_op("MergeClass C <- D");
  CHECK(merge.cls == "C");
  CHECK(merge.other == "D");
}

TEST_CASE("scripts are one op per line with comments and blank lines") {
  auto ops = parse_evolution_script("// rename first\nRenameClass A -> B\n\nAddField B { B x = #b }\n");
  REQUIRE(ops.size() == 2);
  CHECK(ops[0].kind == OpKind::RenameClass);
  CHECK(ops[1].kind == OpKind::AddField);
  CHECK(parse_evolution_script("").empty());
}

TEST_CASE("malformed scripts are refused") {
  CHECK(kind_of([] { parse_op("DeleteClass C"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_op("AddField C { D f }"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_op("ChangeFieldType C { f }"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_op("RenameField C { f -> g, f -> h }"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_op("DeleteField C { }"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_op("RenameClass C D"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_op("Frobnicate C"); }) == ErrorKind::Syntax);
}

TEST_CASE("script errors name the offending line") {
  std::string msg = message_of([] { parse_evolution_script("RenameClass A -> B\nRenameClass C\n"); });
  CHECK(msg.find("@ 2:") != std::string::npos);
}
