#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "persevo/backends.hpp"
#include "persevo/cli.hpp"
#include "persevo/evolution.hpp"
#include "persevo/interpreter.hpp"
#include "persevo/msvdm.hpp"
#include "persevo/typing.hpp"

namespace persevo {

namespace fs = std::filesystem;

std::string Workspace::store_path() const { return store.empty() ? program + ".store" : store; }
std::string Workspace::catalog_path() const { return store_path() + ".catalog"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "IO", "cannot read " + path, path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "IO", "cannot write " + tmp, tmp);
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "IO", "cannot write " + tmp, tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::Io, "IO", "cannot replace " + path + ": " + ec.message(), path);
}

namespace {

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Syntax:
    case ErrorKind::Type:
    case ErrorKind::Premise:
      return kExitType;
    case ErrorKind::Store:
    case ErrorKind::Stuck:
      return kExitStuck;
    case ErrorKind::Io:
      return kExitIo;
  }
  return kExitIo;
}

Program load_program(const std::string& path) { return parse_program(read_file(path)); }

// Files that should have been written by this tool count as I/O failures when malformed.
Store load_store(const std::string& path) {
  if (!fs::exists(path)) return Store{};
  try {
    return parse_store(read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(ErrorKind::Io, "DUMP", "unreadable store " + path + ": " + e.diagnostic().render(), path);
  }
}

VersionCatalog load_catalog(const std::string& path) {
  if (!fs::exists(path)) throw Error(ErrorKind::Io, "CATALOG", "no version catalog at " + path, path);
  try {
    return parse_catalog(read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(ErrorKind::Io, "CATALOG", "unreadable catalog " + path + ": " + e.diagnostic().render(), path);
  }
}

// Bindings as an older version sees them; enough to build its store environment.
Store view_bindings(const VersionCatalog& cat, const Store& store, std::size_t k) {
  Store out;
  for (const auto& v : derived_view(cat, store, k)) out.bindings[v.obj] = "";
  return out;
}

int report(const std::vector<Diagnostic>& diags, std::ostream& err) {
  for (const auto& d : diags) err << "error: " << d.render() << "\n";
  return diags.empty() ? kExitOk : kExitType;
}

template <typename F>
int guarded(std::ostream& err, F body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.diagnostic().render() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace

int cmd_check(const Workspace& ws, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    Program p = load_program(ws.program);
    // Without --store, a missing default store means checking against the empty store.
    bool have_store = !ws.store.empty() || fs::exists(ws.store_path());
    Store s = have_store ? load_store(ws.store_path()) : Store{};
    std::string type;
    auto diags = check_program(p.ct, p.main, s, &type);
    if (diags.empty() && have_store) diags = check_store_wellformed(p.ct, build_store_env(p.ct, p.main, s), s);
    if (int rc = report(diags, err)) return rc;
    out << "ok: main : " << type << "\n";
    return kExitOk;
  });
}

int cmd_run(const Workspace& ws, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    Program p = load_program(ws.program);
    Store store = load_store(ws.store_path());
    std::optional<VersionCatalog> cat;
    std::unique_ptr<VersionView> view;
    const QuerySemantics* qs = nullptr;
    if (ws.at_version) {
      cat = load_catalog(ws.catalog_path());
      view = std::make_unique<VersionView>(*cat, *ws.at_version);
      qs = view.get();
      if (int rc = report(check_program(p.ct, p.main, view_bindings(*cat, store, *ws.at_version)), err)) return rc;
    } else {
      const Backend& b = backend_for(parse_backend(ws.backend));
      qs = &b;
      auto diags = check_program(p.ct, p.main, store);
      if (diags.empty()) diags = check_store_wellformed(p.ct, build_store_env(p.ct, p.main, store), store);
      if (int rc = report(diags, err)) return rc;
    }

    std::vector<std::string> trace;
    RunResult r = run(p.ct, *qs, store, p.main, ws.fuel, &trace);
    if (ws.trace)
      for (const auto& line : trace) out << line << "\n";
    if (r.status != RunStatus::Done) {
      err << "error: " << r.reason.render() << "\n";
      if (!ws.trace) {
        std::size_t from = trace.size() > 5 ? trace.size() - 5 : 0;
        for (std::size_t i = from; i < trace.size(); ++i) err << "  " << trace[i] << "\n";
      }
      return kExitStuck;
    }
    out << "result: " << print_expr(r.final.expr) << "\n";
    write_file_atomic(ws.store_path(), dump_store(r.final.store));
    if (cat) {
      write_file_atomic(ws.catalog_path(), print_catalog(*cat));
      for (const auto& n : cat->notes) err << "note: " << n << "\n";
    }
    return kExitOk;
  });
}

int cmd_evolve(const Workspace& ws, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    Program p = load_program(ws.program);
    Store store = load_store(ws.store_path());
    auto ops = parse_evolution_script(read_file(ws.script));
    BackendKind kind = parse_backend(ws.backend);
    const Backend& backend = backend_for(kind);

    VersionCatalog cat;
    if (fs::exists(ws.catalog_path())) {
      cat = load_catalog(ws.catalog_path());
      if (cat.backend != kind)
        throw Error(ErrorKind::Io, "CATALOG", "catalog was built with the " + backend_name(cat.backend) + " backend",
                    ws.catalog_path());
      const auto& last = cat.entries.back();
      if (print_program(last.ct, last.main) != print_program(p))
        throw Error(ErrorKind::Io, "CATALOG", "program does not match the latest catalog version", ws.program);
    } else {
      cat = initial_catalog(p.ct, p.main, store, kind);
    }

    EvolutionState cur{store, VersionedProgram{cat.latest(), p.ct, p.main}};
    std::vector<std::string> summary;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      EvolutionState next;
      VersionPayload payload;
      try {
        payload = compute_payload(ops[i], cur.store, cur.program.ct, backend);
        next = apply_evolution(cur, ops[i], backend);
      } catch (const Error& e) {
        err << "error: op " << i + 1 << " (" << print_op(ops[i]) << "): " << e.diagnostic().render() << "\n";
        return exit_for(e);
      }
      StoreEnv sigma;
      try {
        sigma = build_store_env(next.program.ct, next.program.main, next.store);
      } catch (const Error&) {
        sigma = evolve_store_env(ops[i], cat.entries.back().sigma);
      }
      register_version(cat, next.program.version, ops[i], next.program.ct, next.program.main, sigma,
                       std::move(payload));
      summary.push_back(std::to_string(cur.program.version) + " -> " + std::to_string(next.program.version) + ": " +
                        print_op(ops[i]));
      cur = std::move(next);
    }

    for (const auto& line : summary) out << line << "\n";
    auto diags = check_program(cur.program.ct, cur.program.main, cur.store);
    if (diags.empty())
      diags = check_store_wellformed(cur.program.ct, build_store_env(cur.program.ct, cur.program.main, cur.store),
                                     cur.store);
    for (const auto& d : diags) err << "warning: " << d.render() << "\n";

    write_file_atomic(ws.program, print_program(cur.program.ct, cur.program.main));
    write_file_atomic(ws.store_path(), dump_store(cur.store));
    write_file_atomic(ws.catalog_path(), print_catalog(cat));
    return kExitOk;
  });
}

int cmd_inspect(const Workspace& ws, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    std::string path = ws.store_path();
    if (!fs::exists(path)) throw Error(ErrorKind::Io, "IO", "no store at " + path, path);
    Store store = load_store(path);
    if (ws.at_version) {
      VersionCatalog cat = load_catalog(ws.catalog_path());
      out << print_view(derived_view(cat, store, *ws.at_version), *ws.at_version);
    } else {
      out << dump_store(store);
    }
    return kExitOk;
  });
}

}  // namespace persevo
