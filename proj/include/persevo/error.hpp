#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace persevo {

enum class ErrorKind {
  Syntax,   // malformed program, script or dump text
  Type,     // typing rule failure
  Premise,  // evolution or schema-operation precondition failure
  Store,    // runtime store failure (missing row, arity mismatch)
  Stuck,    // evaluation cannot proceed
  Io,
};

/** One diagnostic, rendered as `RULE: message @ path`. */
struct Diagnostic {
  std::string rule;
  std::string message;
  std::string path;

  std::string render() const;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string rule, std::string message, std::string path = "-");

  ErrorKind kind() const { return kind_; }
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  ErrorKind kind_;
  Diagnostic diag_;
};

std::string render_all(const std::vector<Diagnostic>& diags);

}  // namespace persevo
