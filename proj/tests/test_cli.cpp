#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const char* kProgram = R"(class V extends Object {}
class E extends Object {
  V h;
}
class C extends E {
  V a;
  V b;
}
main { #l1.set(#v3, #v1, #v2).a }
)";

const char* kStore = R"(relation V
  columns: id
  pk: id
  row: v1
  row: v2
  row: v3
relation C
  columns: id, h, a, b
  pk: id
  row: l1, v1, v2, v3
binding: l1@C -> C
binding: v1@V -> V
binding: v2@V -> V
binding: v3@V -> V
)";

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

struct Result {
  int code;
  std::string out;
  std::string err;
};

/** Scratch directory holding p.pv and its default store. */
struct Sandbox {
  fs::path dir;

  Sandbox() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("persevo_cli_" + std::to_string(rd()));
    fs::create_directories(dir);
    spit(dir / "p.pv", kProgram);
    spit(dir / "p.pv.store", kStore);
  }
  ~Sandbox() { fs::remove_all(dir); }

  Result persevo(const std::string& args) const {
    const char* bin = std::getenv("PERSEVO_BIN");
    REQUIRE(bin != nullptr);
    std::string cmd = "cd '" + dir.string() + "' && '" + bin + "' " + args + " >out.txt 2>err.txt";
    int status = std::system(cmd.c_str());
    Result r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(dir / "out.txt"), slurp(dir / "err.txt")};
    return r;
  }
};

}  // namespace

TEST_CASE("check reports the type of main") {
  Sandbox sb;
  Result r = sb.persevo("check p.pv");
  CHECK(r.code == 0);
  CHECK(r.out == "ok: main : V\n");
}

TEST_CASE("type and syntax errors exit with 1") {
  Sandbox sb;
  spit(sb.dir / "bad.pv", "class A extends Object { A f } main { #x }");
  Result syn = sb.persevo("check bad.pv");
  CHECK(syn.code == 1);
  CHECK(syn.err.find("SYNTAX") != std::string::npos);

  spit(sb.dir / "ill.pv", std::string(kProgram).replace(std::string(kProgram).find("#l1.set"), 7, "#l1.get"));
  Result ty = sb.persevo("check ill.pv --store p.pv.store");
  CHECK(ty.code == 1);
  CHECK(ty.err.find("T-INVK") != std::string::npos);
}

TEST_CASE("run prints the result and persists the store") {
  Sandbox sb;
  Result r = sb.persevo("run p.pv");
  CHECK(r.code == 0);
  CHECK(r.out == "result: #v1@V\n");
  CHECK(slurp(sb.dir / "p.pv.store").find("row: l1, v3, v1, v2") != std::string::npos);

  Result traced = sb.persevo("run p.pv --trace");
  CHECK(traced.out.rfind("1: R-ID", 0) == 0);
}

TEST_CASE("signal runs append history") {
  Sandbox sb;
  spit(sb.dir / "p.pv.store",
       "relation V\n  columns: id\n  pk: id\n  row: v1\n  row: v2\n  row: v3\n"
       "relation C_l1\n  columns: time, h, a, b\n  row: _, v1, v2, v3\n"
       "binding: l1@C -> C_l1\nbinding: v1@V -> V\nbinding: v2@V -> V\nbinding: v3@V -> V\n");
  Result r = sb.persevo("run p.pv --backend signal");
  CHECK(r.code == 0);
  CHECK(slurp(sb.dir / "p.pv.store").find("row: 1, v3, v1, v2") != std::string::npos);
}

TEST_CASE("stuck runs and fuel exhaustion exit with 2") {
  Sandbox sb;
  spit(sb.dir / "loop.pv", "class A extends Object { A go(A x) { return this.go(x); } } main { #a.go(#a) }");
  spit(sb.dir / "loop.pv.store", "relation A\n  columns: id\n  pk: id\n  row: a\nbinding: a@A -> A\n");
  Result r = sb.persevo("run loop.pv --fuel 20");
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: ", 0) == 0);
}

TEST_CASE("missing files exit with 3") {
  Sandbox sb;
  CHECK(sb.persevo("run nope.pv").code == 3);
  CHECK(sb.persevo("evolve p.pv --script nope.evo").code == 3);
}

TEST_CASE("evolve rewrites program and store and records versions") {
  Sandbox sb;
  spit(sb.dir / "s.evo", "RenameField C { a -> a2 }\nAddField C { V extra = #v1 }\n");
  Result r = sb.persevo("evolve p.pv --script s.evo");
  REQUIRE(r.code == 0);
  CHECK(r.out == "0 -> 1: RenameField C { a -> a2 }\n1 -> 2: AddField C { V extra = #v1 }\n");
  CHECK(slurp(sb.dir / "p.pv").find("main { #l1.set(#v3, #v1, #v2, #v1).a2 }") != std::string::npos);
  CHECK(slurp(sb.dir / "p.pv.store").find("columns: id, h, a2, b, extra") != std::string::npos);
  CHECK(fs::exists(sb.dir / "p.pv.store.catalog"));

  Result view = sb.persevo("inspect p.pv --at-version 0");
  CHECK(view.code == 0);
  CHECK(view.out.find("object l1@C: h=v1, a=v2, b=v3") != std::string::npos);

  Result now = sb.persevo("inspect p.pv");
  CHECK(now.code == 0);
  CHECK(now.out == slurp(sb.dir / "p.pv.store"));

  spit(sb.dir / "old.pv", kProgram);
  Result old = sb.persevo("run old.pv --store p.pv.store --at-version 0");
  CHECK(old.code == 0);
  CHECK(old.out == "result: #v1@V\n");

  Result more = sb.persevo("evolve p.pv --script s.evo");
  CHECK(more.code == 1);
}

TEST_CASE("a failing script leaves every file untouched") {
  Sandbox sb;
  spit(sb.dir / "s.evo", "RenameClass C -> K\nRenameField K { zz -> q }\n");
  Result r = sb.persevo("evolve p.pv --script s.evo");
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error: op 2", 0) == 0);
  CHECK(slurp(sb.dir / "p.pv") == kProgram);
  CHECK(slurp(sb.dir / "p.pv.store") == kStore);
  CHECK_FALSE(fs::exists(sb.dir / "p.pv.store.catalog"));
}
