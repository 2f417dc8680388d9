#include <sstream>

#include "persevo/msvdm.hpp"

namespace persevo {

const VersionEntry& VersionCatalog::at(std::size_t k) const {
  if (k >= entries.size())
    throw Error(ErrorKind::Io, "VERSION", "version " + std::to_string(k) + " is not in the catalog (latest is " +
                                              std::to_string(latest()) + ")",
                "--at-version");
  return entries[k];
}

VersionCatalog initial_catalog(const ClassTable& ct, const ExprPtr& main, const Store& store, BackendKind backend) {
  VersionCatalog cat;
  cat.backend = backend;
  VersionEntry e;
  e.ct = ct;
  e.main = main;
  e.sigma = build_store_env(ct, main, store);
  cat.entries.push_back(std::move(e));
  return cat;
}

VersionPayload compute_payload(const EvolutionOp& op, const Store& pre, const ClassTable& pre_ct,
                               const Backend& backend) {
  VersionPayload p;
  if (op.kind == OpKind::DeleteField) {
    for (const auto& [a, rel] : pre.bindings) {
      if (!is_class(pre_ct, a.cls) || !subtype(pre_ct, a.cls, op.cls)) continue;
      for (const auto& f : op.names) {
        if (p.stash.count({a.id, f})) continue;
        try {
          p.stash[{a.id, f}] = backend.select(pre, pre_ct, a, f);
        } catch (const Error&) {
          // Unset fields stay unrecoverable.
        }
      }
    }
  } else if (op.kind == OpKind::MergeClass) {
    for (const auto& [a, rel] : pre.bindings) {
      if (a.cls != op.other || pre.bindings.count(AnnId{a.id, op.cls})) continue;
      auto& vals = p.orphans[a.id];
      for (const auto& f : fields(pre_ct, op.other)) {
        try {
          vals[f.name] = backend.select(pre, pre_ct, a, f.name);
        } catch (const Error&) {
        }
      }
    }
  }
  return p;
}

void register_version(VersionCatalog& cat, std::size_t version, const EvolutionOp& op, const ClassTable& ct,
                      const ExprPtr& main, const StoreEnv& sigma, VersionPayload payload) {
  if (cat.entries.empty() || version != cat.latest() + 1)
    throw Error(ErrorKind::Premise, "VERSION", "version gap: expected " + std::to_string(cat.latest() + 1) + ", got " +
                                                   std::to_string(version),
                "catalog");
  VersionEntry e;
  e.version = version;
  e.ct = ct;
  e.main = main;
  e.sigma = sigma;
  e.op = op;
  e.payload = std::move(payload);
  cat.entries.push_back(std::move(e));
}

std::string print_catalog(const VersionCatalog& cat) {
  std::ostringstream out;
  out << "persevo-catalog 1\n";
  out << "backend: " << backend_name(cat.backend) << "\n";
  for (const auto& e : cat.entries) {
    out << "version: " << e.version << "\n";
    if (e.op) out << "op: " << print_op(*e.op) << "\n";
    out << "sigma:";
    for (const auto& [a, c] : e.sigma) out << " " << a.str();
    out << "\n";
    for (const auto& [key, v] : e.payload.stash) out << "stash: " << key.first << " " << key.second << " " << v << "\n";
    for (const auto& [id, vals] : e.payload.orphans) {
      if (vals.empty()) out << "orphan: " << id << "\n";
      for (const auto& [f, v] : vals) out << "orphan: " << id << " " << f << " " << v << "\n";
    }
    out << "program:\n";
    std::istringstream prog(print_program(e.ct, e.main));
    for (std::string line; std::getline(prog, line);) out << "| " << line << "\n";
    out << "end\n";
  }
  return out.str();
}

namespace {

[[noreturn]] void bad(int lineno, const std::string& msg) {
  throw Error(ErrorKind::Syntax, "CATALOG", msg, "line " + std::to_string(lineno));
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace

VersionCatalog parse_catalog(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto next = [&]() {
    ++lineno;
    return static_cast<bool>(std::getline(in, line));
  };
  if (!next() || line != "persevo-catalog 1") bad(lineno, "missing catalog header");
  if (!next() || line.rfind("backend: ", 0) != 0) bad(lineno, "missing backend line");
  VersionCatalog cat;
  try {
    cat.backend = parse_backend(line.substr(9));
  } catch (const Error& e) {
    bad(lineno, e.diagnostic().message);
  }
  while (next()) {
    if (line.empty()) continue;
    if (line.rfind("version: ", 0) != 0) bad(lineno, "expected 'version:'");
    VersionEntry e;
    try {
      e.version = std::stoul(line.substr(9));
    } catch (const std::exception&) {
      bad(lineno, "bad version number");
    }
    if (e.version != cat.entries.size()) bad(lineno, "versions must be contiguous from 0");
    std::string program;
    bool done = false;
    while (!done && next()) {
      if (line.rfind("op: ", 0) == 0) {
        try {
          e.op = parse_op(line.substr(4));
        } catch (const Error& err) {
          bad(lineno, err.diagnostic().message);
        }
      } else if (line.rfind("sigma:", 0) == 0) {
        for (const auto& w : words(line.substr(6))) {
          auto at = w.find('@');
          if (at == std::string::npos) bad(lineno, "bad store-environment entry " + w);
          AnnId a{w.substr(0, at), w.substr(at + 1)};
          e.sigma[a] = a.cls;
        }
      } else if (line.rfind("stash: ", 0) == 0) {
        auto w = words(line.substr(7));
        if (w.size() != 3) bad(lineno, "stash lines take: id field value");
        e.payload.stash[{w[0], w[1]}] = w[2];
      } else if (line.rfind("orphan: ", 0) == 0) {
        auto w = words(line.substr(8));
        if (w.size() == 1)
          e.payload.orphans[w[0]];
        else if (w.size() == 3)
          e.payload.orphans[w[0]][w[1]] = w[2];
        else
          bad(lineno, "orphan lines take: id [field value]");
      } else if (line == "program:") {
        while (true) {
          if (!next()) bad(lineno, "unterminated program block");
          if (line == "end") break;
          if (line.rfind("|", 0) != 0) bad(lineno, "program lines start with '|'");
          program += line.size() > 1 ? line.substr(2) : "";
          program += "\n";
        }
        done = true;
      } else {
        bad(lineno, "unexpected line '" + line + "'");
      }
    }
    if (!done) bad(lineno, "entry without program block");
    if ((e.version == 0) != !e.op) bad(lineno, "only version 0 lacks a producing op");
    try {
      Program p = parse_program(program);
      e.ct = std::move(p.ct);
      e.main = std::move(p.main);
    } catch (const Error& err) {
      bad(lineno, "program of version " + std::to_string(e.version) + ": " + err.diagnostic().render());
    }
    cat.entries.push_back(std::move(e));
  }
  if (cat.entries.empty()) bad(lineno, "catalog has no versions");
  return cat;
}

}  // namespace persevo
