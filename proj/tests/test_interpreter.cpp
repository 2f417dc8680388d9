#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "gen.hpp"
#include "persevo/evolution.hpp"
#include "persevo/interpreter.hpp"

using namespace persevo;

namespace {

const char* kLogin = R"(class Bool extends Object {}
class LoginStatus extends Object {
  Bool status;
  Bool check(Bool b) { return this.set(b).status; }
}
main { new LoginStatus(#kamina, #t).set(#t2).status }
)";

struct Fixture {
  Program p;
  Store store;
};

Fixture login(const Backend& b) {
  Fixture f{parse_program(kLogin), {}};
  f.store = b.insert(f.store, f.p.ct, "Bool", "t", {});
  f.store = b.insert(f.store, f.p.ct, "Bool", "t2", {});
  return f;
}

std::vector<std::string> rules_of(const std::vector<std::string>& trace) {
  std::vector<std::string> out;
  for (const auto& line : trace) {
    auto a = line.find(": ") + 2;
    out.push_back(line.substr(a, line.find(' ', a) - a));
  }
  return out;
}

}  // namespace

TEST_CASE("the login example reduces to the written status on both backends") {
  for (const Backend* b : {&jpa_backend(), &signal_backend()}) {
    CAPTURE(backend_name(b->kind()));
    Fixture f = login(*b);
    std::vector<std::string> trace;
    RunResult r = run(f.p.ct, *b, f.store, f.p.main, kDefaultFuel, &trace);
    REQUIRE(r.status == RunStatus::Done);
    CHECK(print_expr(r.final.expr) == "#t2@Bool");
    CHECK(r.steps == 5);
    CHECK(rules_of(trace) == std::vector<std::string>{"R-ID", "R-NEW", "R-ID", "R-SET", "R-FIELD"});
    CHECK(b->select(r.final.store, f.p.ct, {"kamina", "LoginStatus"}, "status") == "t2");
  }
}

TEST_CASE("method invocation substitutes the receiver and the arguments") {
  Fixture f = login(jpa_backend());
  Store s = jpa_insert(f.store, f.p.ct, "LoginStatus", "k", {"t"});
  MachineState st{s, parse_expr("#k@LoginStatus.check(#t2@Bool)", true)};
  StepResult r = step(f.p.ct, jpa_backend(), st);
  REQUIRE(r.status == StepStatus::Stepped);
  CHECK(r.rule == "R-INVK");
  CHECK(print_expr(r.next.expr) == "#k@LoginStatus.set(#t2@Bool).status");
  CHECK(same_store(r.next.store, s));

  auto sub = substitute(parse_expr("x.m(y, x)"), {{"x", parse_expr("#a")}, {"y", parse_expr("#b")}});
  CHECK(print_expr(sub) == "#a.m(#b, #a)");
}

TEST_CASE("values do not step") {
  Fixture f = login(jpa_backend());
  StepResult r = step(f.p.ct, jpa_backend(), {f.store, make_ann("t", "Bool")});
  CHECK(r.status == StepStatus::Done);
  CHECK(is_value(make_ann("t", "Bool")));
  CHECK_FALSE(is_value(make_raw("t")));
}

TEST_CASE("missing objects and fields leave the machine stuck") {
  Fixture f = login(jpa_backend());
  RunResult ghost = run(f.p.ct, jpa_backend(), f.store, parse_expr("#ghost.status"));
  CHECK(ghost.status == RunStatus::Stuck);
  CHECK_FALSE(ghost.reason.rule.empty());
  RunResult nofield = run(f.p.ct, jpa_backend(), f.store, parse_expr("#t.status"));
  CHECK(nofield.status == RunStatus::Stuck);
  RunResult arity = run(f.p.ct, jpa_backend(), f.store, parse_expr("new LoginStatus(#k)"));
  CHECK(arity.status == RunStatus::Stuck);
}

TEST_CASE("fuel bounds divergent programs") {
  Program p = parse_program("class A extends Object { A loop(A x) { return this.loop(x); } } main { #a.loop(#a) }");
  Store s = jpa_insert(Store{}, p.ct, "A", "a", {});
  RunResult r = run(p.ct, jpa_backend(), s, p.main, 100);
  CHECK(r.status == RunStatus::OutOfFuel);
  CHECK(r.steps == 100);
}

TEST_CASE("trace lines carry the step, rule, term and store hash") {
  Store s;
  std::string line = trace_line(3, "R-ID", make_ann("t", "Bool"), s);
  CHECK(line.rfind("3: R-ID  #t@Bool  |", 0) == 0);
  CHECK(line.size() == std::string("3: R-ID  #t@Bool  |").size() + 17);
}

TEST_CASE("runs are deterministic") {
  for (const Backend* b : {&jpa_backend(), &signal_backend()}) {
    Fixture f = login(*b);
    std::vector<std::string> t1, t2;
    run(f.p.ct, *b, f.store, f.p.main, kDefaultFuel, &t1);
    run(f.p.ct, *b, f.store, f.p.main, kDefaultFuel, &t2);
    CHECK(t1 == t2);
  }
}

TEST_CASE("run_script folds ops and reports the failing op") {
  Fixture f = login(jpa_backend());
  EvolutionState st{f.store, {0, f.p.ct, f.p.main}};
  std::vector<EvolutionState> history;
  EvolutionState same = run_script(st, {}, jpa_backend(), &history);
  CHECK(same.program.version == 0);
  CHECK(same.program.ct == st.program.ct);
  CHECK(history.size() == 1);

  auto ops = parse_evolution_script("RenameClass Bool -> Flag\nRenameField LoginStatus { missing -> x }\n");
  try {
    run_script(st, ops, jpa_backend());
    FAIL("expected a premise error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Premise);
    CHECK(e.diagnostic().path == "op 2");
    CHECK(e.diagnostic().rule == "E-RENAMEFIELD");
  }

  history.clear();
  EvolutionState two = run_script(st, parse_evolution_script("RenameClass Bool -> Flag\nAddField LoginStatus { Flag old = #t }"),
                                  jpa_backend(), &history);
  CHECK(two.program.version == 2);
  CHECK(history.size() == 3);
  RunResult r = run(two.program.ct, jpa_backend(), two.store, two.program.main);
  CHECK(print_expr(r.final.expr) == "#t2@Flag");
}

TEST_CASE("property: well-typed generated programs never get stuck") {
  gen::Rng rng(41);
  int done = 0;
  for (int i = 0; i < 300; ++i) {
    const Backend& b = gen::coin(rng) ? jpa_backend() : signal_backend();
    gen::Config cfg = gen::gen_config(rng, b);
    CAPTURE(print_program(cfg.ct, cfg.main));
    RunResult r = run(cfg.ct, b, cfg.store, cfg.main, 60);
    CHECK(r.status != RunStatus::Stuck);
    if (r.status == RunStatus::Done) {
      ++done;
      CHECK(is_value(r.final.expr));
      std::string t0, t1;
      check_program(cfg.ct, cfg.main, cfg.store, &t0);
      StoreEnv sigma = build_store_env(cfg.ct, nullptr, r.final.store);
      t1 = type_expr(cfg.ct, {}, sigma, r.final.expr);
      CHECK(subtype(cfg.ct, t1, t0));
    }
  }
  CHECK(done > 100);
}
