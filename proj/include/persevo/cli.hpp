#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

namespace persevo {

/** Exit codes shared by every command. */
enum ExitCode { kExitOk = 0, kExitType = 1, kExitStuck = 2, kExitIo = 3 };

/**
 * Files a command works on. The store defaults to `<program>.store` and
 * the version catalog always sits next to the store as `<store>.catalog`.
 */
struct Workspace {
  std::string program;
  std::string store;
  std::string script;
  std::string backend = "jpa";
  std::size_t fuel = 10000;
  std::optional<std::size_t> at_version;
  bool trace = false;

  std::string store_path() const;
  std::string catalog_path() const;
};

int cmd_check(const Workspace& ws, std::ostream& out, std::ostream& err);
/** Runs main, prints `result: #l@C` and writes the post-run store. */
int cmd_run(const Workspace& ws, std::ostream& out, std::ostream& err);
/** Applies the script; rewrites program, store and catalog only when every op succeeds. */
int cmd_evolve(const Workspace& ws, std::ostream& out, std::ostream& err);
/** Prints the store dump, or the derived view of an older version. */
int cmd_inspect(const Workspace& ws, std::ostream& out, std::ostream& err);

std::string read_file(const std::string& path);
/** Writes through a temporary file and a rename. */
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace persevo
