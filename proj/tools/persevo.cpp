#include <iostream>

#include "CLI11.hpp"
#include "persevo/cli.hpp"

int main(int argc, char** argv) {
  persevo::Workspace ws;
  CLI::App app{"persevo: evolve persistent-object programs together with their stores"};
  app.require_subcommand(1);

  auto add_backend = [&](CLI::App* cmd) {
    cmd->add_option("--backend", ws.backend, "Persistence mapping: jpa or signal")
        ->check(CLI::IsMember({"jpa", "signal"}))
        ->capture_default_str();
  };
  auto add_store = [&](CLI::App* cmd) {
    cmd->add_option("--store", ws.store, "Store dump (default: <program>.store)");
  };

  auto* check = app.add_subcommand("check", "Type-check a program");
  check->add_option("program", ws.program, "Program file")->required();
  add_store(check);

  auto* run = app.add_subcommand("run", "Run main against the store");
  run->add_option("program", ws.program, "Program file")->required();
  add_store(run);
  add_backend(run);
  run->add_option("--fuel", ws.fuel, "Maximum number of reduction steps")->capture_default_str();
  run->add_option("--at-version", ws.at_version, "Run as an older schema version through the catalog");
  run->add_flag("--trace", ws.trace, "Print one line per reduction step");

  auto* evolve = app.add_subcommand("evolve", "Apply an evolution script to program and store");
  evolve->add_option("program", ws.program, "Program file")->required();
  evolve->add_option("--script", ws.script, "Evolution script")->required();
  add_store(evolve);
  add_backend(evolve);

  auto* inspect = app.add_subcommand("inspect", "Print a store, or the view of an older version");
  inspect->add_option("program", ws.program, "Program file (locates the default store)");
  add_store(inspect);
  inspect->add_option("--at-version", ws.at_version, "Show the view of this version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : persevo::kExitIo;
  }
  if (inspect->parsed() && ws.program.empty() && ws.store.empty()) {
    std::cerr << "error: inspect needs --store or a program path\n";
    return persevo::kExitIo;
  }

  if (check->parsed()) return persevo::cmd_check(ws, std::cout, std::cerr);
  if (run->parsed()) return persevo::cmd_run(ws, std::cout, std::cerr);
  if (evolve->parsed()) return persevo::cmd_evolve(ws, std::cout, std::cerr);
  return persevo::cmd_inspect(ws, std::cout, std::cerr);
}
