#include "persevo/error.hpp"

namespace persevo {

std::string Diagnostic::render() const {
  return rule + ": " + message + " @ " + (path.empty() ? std::string("-") : path);
}

Error::Error(ErrorKind kind, std::string rule, std::string message, std::string path)
    : std::runtime_error(rule + ": " + message + " @ " + path),
      kind_(kind),
      diag_{std::move(rule), std::move(message), std::move(path)} {}

std::string render_all(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    out += d.render();
    out += '\n';
  }
  return out;
}

}  // namespace persevo
