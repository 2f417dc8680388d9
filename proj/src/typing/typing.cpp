#include <set>

#include "persevo/typing.hpp"

namespace persevo {

namespace {

[[noreturn]] void type_error(const std::string& rule, const std::string& msg, const std::string& path) {
  throw Error(ErrorKind::Type, rule, msg, path);
}

const ClassDecl& decl(const ClassTable& ct, const std::string& c) {
  auto it = ct.find(c);
  if (it == ct.end()) type_error("CLASS", "unknown class " + c, c);
  return it->second;
}

}  // namespace

bool is_class(const ClassTable& ct, const std::string& c) { return c == kObject || ct.count(c) > 0; }

bool subtype(const ClassTable& ct, const std::string& c, const std::string& d) {
  if (!is_class(ct, c)) type_error("SUBTYPE", "unknown class " + c, c);
  if (!is_class(ct, d)) type_error("SUBTYPE", "unknown class " + d, d);
  std::string cur = c;
  for (std::size_t guard = 0; guard <= ct.size() + 1; ++guard) {
    if (cur == d) return true;
    if (cur == kObject) return false;
    cur = decl(ct, cur).super;
  }
  type_error("SUBTYPE", "cyclic inheritance at " + c, c);
}

std::vector<std::string> ancestors(const ClassTable& ct, const std::string& c) {
  std::vector<std::string> out;
  std::string cur = c;
  while (cur != kObject) {
    if (out.size() > ct.size()) type_error("CLASS", "cyclic inheritance at " + c, c);
    out.push_back(cur);
    cur = decl(ct, cur).super;
  }
  return out;
}

std::vector<FieldDecl> fields(const ClassTable& ct, const std::string& c) {
  if (c == kObject) return {};
  auto chain = ancestors(ct, c);
  std::vector<FieldDecl> out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const auto& d = ct.at(*it);
    out.insert(out.end(), d.fields.begin(), d.fields.end());
  }
  return out;
}

std::optional<MethodBody> mbody(const ClassTable& ct, const std::string& m, const std::string& c) {
  if (c == kObject) return std::nullopt;
  for (const auto& k : ancestors(ct, c)) {
    if (const auto* md = ct.at(k).method(m)) {
      MethodBody b;
      for (const auto& p : md->params) b.params.push_back(p.name);
      b.body = md->body;
      return b;
    }
  }
  return std::nullopt;
}

std::optional<MethodType> mtype(const ClassTable& ct, const std::string& m, const std::string& c) {
  if (c == kObject) return std::nullopt;
  for (const auto& k : ancestors(ct, c)) {
    if (const auto* md = ct.at(k).method(m)) {
      MethodType t;
      for (const auto& p : md->params) t.params.push_back(p.type);
      t.ret = md->ret;
      return t;
    }
  }
  return std::nullopt;
}

std::string most_specific(const ClassTable& ct, const std::vector<std::string>& candidates, const std::string& rule,
                          const std::string& what) {
  if (candidates.empty()) type_error(rule, "no class annotation for " + what, what);
  for (const auto& c : candidates) {
    bool below_all = true;
    for (const auto& d : candidates)
      if (!subtype(ct, c, d)) {
        below_all = false;
        break;
      }
    if (below_all) return c;
  }
  std::string list;
  for (const auto& c : candidates) list += (list.empty() ? "" : ", ") + c;
  type_error(rule, "ambiguous class for " + what + " among incomparable classes {" + list + "}", what);
}

std::optional<std::string> set_target(const ClassTable& ct, const std::string& recv, std::size_t arity) {
  if (!is_class(ct, recv)) return std::nullopt;
  for (const auto& c : ancestors(ct, recv))
    if (fields(ct, c).size() == arity) return c;
  if (arity == 0) return std::string(kObject);
  return std::nullopt;
}

std::string type_raw_id(const ClassTable& ct, const StoreEnv& sigma, const std::string& l) {
  std::vector<std::string> cands;
  for (auto it = sigma.lower_bound(AnnId{l, ""}); it != sigma.end() && it->first.id == l; ++it) {
    if (!is_class(ct, it->second)) type_error("T-ID1", "identifier #" + l + " annotated with unknown class " + it->second, l);
    cands.push_back(it->second);
  }
  if (cands.empty()) type_error("T-ID1", "identifier #" + l + " has no entry in the store environment", l);
  return most_specific(ct, cands, "T-ID1", "#" + l);
}

namespace {

struct Checker {
  const ClassTable& ct;
  const TypeEnv& gamma;
  const StoreEnv& sigma;
  const std::string& path;

  void require_class(const std::string& c, const std::string& rule) const {
    if (!is_class(ct, c)) type_error(rule, "unknown class " + c, path);
  }

  void check_args(const std::vector<ExprPtr>& args, const std::vector<std::string>& expected, const std::string& rule,
                  const std::string& what) const {
    if (args.size() != expected.size())
      type_error(rule, what + " expects " + std::to_string(expected.size()) + " argument(s), got " +
                           std::to_string(args.size()),
                 path);
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string t = type(args[i]);
      if (!subtype(ct, t, expected[i]))
        type_error(rule, "argument " + std::to_string(i + 1) + " of " + what + " has type " + t + ", expected " +
                             expected[i] + " in " + print_expr(args[i]),
                   path);
    }
  }

  static std::vector<std::string> types_of(const std::vector<FieldDecl>& fs) {
    std::vector<std::string> out;
    for (const auto& f : fs) out.push_back(f.type);
    return out;
  }

  std::string type(const ExprPtr& e) const {
    switch (e->kind) {
      case ExprKind::Var: {
        auto it = gamma.find(e->name);
        if (it == gamma.end()) type_error("T-VAR", "unbound variable " + e->name, path);
        return it->second;
      }
      case ExprKind::AnnId: {
        auto it = sigma.find(AnnId{e->name, e->cls});
        if (it == sigma.end() || it->second != e->cls)
          type_error("T-ID", "#" + e->name + "@" + e->cls + " is not in the store environment", path);
        return e->cls;
      }
      case ExprKind::RawId:
        try {
          return type_raw_id(ct, sigma, e->name);
        } catch (const Error& err) {
          type_error("T-ID1", err.diagnostic().message, path);
        }
      case ExprKind::Field: {
        std::string c0 = type(e->recv);
        for (const auto& f : fields(ct, c0))
          if (f.name == e->name) return f.type;
        type_error("T-FIELD", "class " + c0 + " has no field " + e->name + " in " + print_expr(e), path);
      }
      case ExprKind::Set: {
        std::string c0 = type(e->recv);
        std::string d = set_target(ct, c0, e->args.size()).value_or(c0);
        check_args(e->args, types_of(fields(ct, d)), "T-SET", c0 + ".set");
        return d;
      }
      case ExprKind::Call: {
        std::string c0 = type(e->recv);
        auto mt = mtype(ct, e->name, c0);
        if (!mt) type_error("T-INVK", "class " + c0 + " has no method " + e->name + " in " + print_expr(e), path);
        check_args(e->args, mt->params, "T-INVK", c0 + "." + e->name);
        return mt->ret;
      }
      case ExprKind::New: {
        if (e->cls == kObject || !ct.count(e->cls)) type_error("T-NEW", "unknown class " + e->cls, path);
        check_args(e->args, types_of(fields(ct, e->cls)), "T-NEW", "new " + e->cls);
        auto it = sigma.find(AnnId{e->name, e->cls});
        if (it == sigma.end())
          type_error("T-NEW", "key #" + e->name + " is not typed " + e->cls + " in the store environment", path);
        return e->cls;
      }
    }
    type_error("TYPE", "unknown expression form", path);
  }
};

}  // namespace

std::string type_expr(const ClassTable& ct, const TypeEnv& gamma, const StoreEnv& sigma, const ExprPtr& e,
                      const std::string& path) {
  return Checker{ct, gamma, sigma, path}.type(e);
}

std::vector<Diagnostic> check_class_table(const ClassTable& ct, const StoreEnv& given) {
  std::vector<Diagnostic> out;
  StoreEnv sigma = given;
  try {
    validate_class_table(ct);
    if (sigma.empty()) sigma = build_store_env(ct, nullptr, Store{});
  } catch (const Error& e) {
    out.push_back(e.diagnostic());
    return out;
  }
  for (const auto& [name, c] : ct) {
    std::set<std::string> inherited;
    for (const auto& f : fields(ct, c.super)) inherited.insert(f.name);
    for (const auto& f : c.fields) {
      if (!is_class(ct, f.type)) out.push_back({"T-CLASS", "field " + f.name + " has unknown type " + f.type, name});
      if (inherited.count(f.name)) out.push_back({"T-CLASS", "field " + f.name + " shadows an inherited field", name});
    }
    for (const auto& m : c.methods) {
      std::string path = name + "." + m.name;
      if (mtype(ct, m.name, c.super))
        out.push_back({"T-CLASS", "method " + m.name + " overrides a superclass method", path});
      bool sig_ok = true;
      if (!is_class(ct, m.ret)) {
        out.push_back({"T-METHOD", "unknown return type " + m.ret, path});
        sig_ok = false;
      }
      TypeEnv gamma{{"this", name}};
      for (const auto& p : m.params) {
        if (!is_class(ct, p.type)) {
          out.push_back({"T-METHOD", "parameter " + p.name + " has unknown type " + p.type, path});
          sig_ok = false;
        }
        gamma[p.name] = p.type;
      }
      if (!sig_ok) continue;
      try {
        std::string t = type_expr(ct, gamma, sigma, m.body, path);
        if (!subtype(ct, t, m.ret))
          out.push_back({"T-METHOD", "body has type " + t + ", not a subtype of " + m.ret, path});
      } catch (const Error& e) {
        out.push_back(e.diagnostic());
      }
    }
  }
  return out;
}

void visit(const ExprPtr& e, const std::function<void(const ExprPtr&)>& f) {
  if (!e) return;
  f(e);
  visit(e->recv, f);
  for (const auto& a : e->args) visit(a, f);
}

void for_each_body(const ClassTable& ct, const ExprPtr& main,
                   const std::function<void(const std::string&, const ExprPtr&)>& f) {
  for (const auto& [name, c] : ct)
    for (const auto& m : c.methods) f(name + "." + m.name, m.body);
  if (main) f("main", main);
}

StoreEnv build_store_env(const ClassTable& ct, const ExprPtr& main, const Store& store) {
  StoreEnv sigma;
  for (const auto& [a, _] : store.bindings) sigma[a] = a.cls;
  for_each_body(ct, main, [&](const std::string&, const ExprPtr& body) {
    visit(body, [&](const ExprPtr& e) {
      if (e->kind == ExprKind::New) sigma[AnnId{e->name, e->cls}] = e->cls;
    });
  });
  // Every identifier must have a most specific class.
  std::map<std::string, std::vector<std::string>> by_id;
  for (const auto& [a, c] : sigma) by_id[a.id].push_back(c);
  for (const auto& [id, cs] : by_id) {
    for (const auto& c : cs)
      if (!is_class(ct, c)) throw Error(ErrorKind::Type, "STORE-ENV", "#" + id + " annotated with unknown class " + c, id);
    try {
      most_specific(ct, cs, "STORE-ENV", "#" + id);
    } catch (const Error& e) {
      throw Error(ErrorKind::Type, "STORE-ENV", e.diagnostic().message, id);
    }
  }
  return sigma;
}

std::vector<Diagnostic> check_program(const ClassTable& ct, const ExprPtr& main, const Store& store,
                                      std::string* main_type) {
  std::vector<Diagnostic> out;
  StoreEnv sigma;
  try {
    validate_class_table(ct);
    sigma = build_store_env(ct, main, store);
  } catch (const Error& e) {
    out.push_back(e.diagnostic());
    return out;
  }
  auto ctd = check_class_table(ct, sigma);
  out.insert(out.end(), ctd.begin(), ctd.end());
  try {
    std::string t = type_expr(ct, {}, sigma, main, "main");
    if (main_type) *main_type = t;
  } catch (const Error& e) {
    out.push_back(e.diagnostic());
  }
  return out;
}

}  // namespace persevo
