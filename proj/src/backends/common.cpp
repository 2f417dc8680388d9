#include <set>

#include "persevo/backends.hpp"

namespace persevo {

AnnId QuerySemantics::annotate(const Store& s, const ClassTable& ct, const std::string& id) const {
  return persevo::annotate(s, ct, id);
}

AnnId annotate(const Store& s, const ClassTable& ct, const std::string& l) {
  std::vector<std::string> cands;
  for (auto it = s.bindings.lower_bound(AnnId{l, ""}); it != s.bindings.end() && it->first.id == l; ++it)
    cands.push_back(it->first.cls);
  if (cands.empty()) throw Error(ErrorKind::Store, "ANNOTATE", "#" + l + " has no binding in the store", l);
  for (const auto& c : cands)
    if (!is_class(ct, c)) throw Error(ErrorKind::Store, "ANNOTATE", "#" + l + " is bound at unknown class " + c, l);
  try {
    return AnnId{l, most_specific(ct, cands, "ANNOTATE", "#" + l)};
  } catch (const Error& e) {
    throw Error(ErrorKind::Store, "ANNOTATE", e.diagnostic().message, l);
  }
}

std::vector<std::string> relations_of_class(const Store& s, const std::string& cls) {
  std::set<std::string> bound;
  for (const auto& [a, r] : s.bindings)
    if (a.cls == cls) bound.insert(r);
  std::vector<std::string> out;
  for (const auto& r : s.relations)
    if (bound.count(r.name)) out.push_back(r.name);
  return out;
}

namespace {

class JpaBackend : public Backend {
 public:
  std::string select(const Store& s, const ClassTable& ct, const AnnId& o, const std::string& f) const override {
    return jpa_select(s, ct, o, f);
  }
  Store insert(const Store& s, const ClassTable& ct, const std::string& c, const std::string& id,
               const Ids& v) const override {
    return jpa_insert(s, ct, c, id, v);
  }
  Store update(const Store& s, const ClassTable& ct, const AnnId& o, const Ids& v) const override {
    return jpa_update(s, ct, o, v);
  }
  BackendKind kind() const override { return BackendKind::Jpa; }
  std::string relation_name(const std::string& cls, const std::string&) const override { return cls; }
  RelationSet evolve_schema(const EvolutionOp& op, const Store& s, const ClassTable& ct) const override {
    return jpa_evolve_schema(op, s, ct);
  }
};

class SignalBackend : public Backend {
 public:
  std::string select(const Store& s, const ClassTable& ct, const AnnId& o, const std::string& f) const override {
    return sig_select(s, ct, o, f);
  }
  Store insert(const Store& s, const ClassTable& ct, const std::string& c, const std::string& id,
               const Ids& v) const override {
    return sig_insert(s, ct, c, id, v);
  }
  Store update(const Store& s, const ClassTable& ct, const AnnId& o, const Ids& v) const override {
    return sig_update(s, ct, o, v);
  }
  BackendKind kind() const override { return BackendKind::Signal; }
  std::string relation_name(const std::string& cls, const std::string& id) const override { return cls + "_" + id; }
  RelationSet evolve_schema(const EvolutionOp& op, const Store& s, const ClassTable& ct) const override {
    return sig_evolve_schema(op, s, ct);
  }
};

}  // namespace

const Backend& jpa_backend() {
  static const JpaBackend b;
  return b;
}

const Backend& signal_backend() {
  static const SignalBackend b;
  return b;
}

const Backend& backend_for(BackendKind k) { return k == BackendKind::Jpa ? jpa_backend() : signal_backend(); }

BackendKind parse_backend(const std::string& name) {
  if (name == "jpa") return BackendKind::Jpa;
  if (name == "signal") return BackendKind::Signal;
  throw Error(ErrorKind::Io, "BACKEND", "unknown backend '" + name + "' (expected jpa or signal)", "--backend");
}

std::string backend_name(BackendKind k) { return k == BackendKind::Jpa ? "jpa" : "signal"; }

}  // namespace persevo
