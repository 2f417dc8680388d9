#include "gen.hpp"

#include <functional>
#include <set>

#include "persevo/evolution.hpp"
#include "persevo/interpreter.hpp"
#include "persevo/typing.hpp"

namespace persevo::gen {

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

namespace {

using Gamma = std::vector<std::pair<std::string, std::string>>;

std::vector<std::string> class_names(const ClassTable& ct) {
  std::vector<std::string> out;
  for (const auto& [n, _] : ct) out.push_back(n);
  return out;
}

std::set<std::string> used_names(const ClassTable& ct) {
  std::set<std::string> out;
  for (const auto& [n, c] : ct) {
    out.insert(n);
    for (const auto& f : c.fields) out.insert(f.name);
    for (const auto& m : c.methods) out.insert(m.name);
  }
  return out;
}

std::string fresh(const std::set<std::string>& used, const std::string& prefix) {
  for (int i = 0;; ++i) {
    std::string n = prefix + std::to_string(i);
    if (!used.count(n)) return n;
  }
}

struct ExprGen {
  Rng& rng;
  const Config& cfg;
  const Limits& lim;
  int& next_key;

  std::pair<ExprPtr, std::string> leaf(const std::string& target, const Gamma& gamma) {
    std::vector<std::pair<ExprPtr, std::string>> opts;
    for (const auto& [x, t] : gamma)
      if (subtype(cfg.ct, t, target)) opts.push_back({make_var(x), t});
    for (const auto& o : cfg.objects)
      if (subtype(cfg.ct, o.cls, target)) opts.push_back({make_raw(o.id), o.cls});
    return choose(rng, opts);
  }

  std::vector<ExprPtr> args_for(const std::vector<std::string>& types, const Gamma& gamma, int depth) {
    std::vector<ExprPtr> out;
    for (const auto& t : types) out.push_back(gen(t, gamma, depth + 1).first);
    return out;
  }

  std::pair<ExprPtr, std::string> gen(const std::string& target, const Gamma& gamma, int depth) {
    if (depth >= lim.max_depth || coin(rng, 0.35)) return leaf(target, gamma);
    const ClassTable& ct = cfg.ct;
    switch (pick(rng, 0, 3)) {
      case 0: {  // new
        std::vector<std::string> cs;
        for (const auto& [n, _] : ct)
          if (subtype(ct, n, target)) cs.push_back(n);
        if (cs.empty()) break;
        const std::string& c = choose(rng, cs);
        std::vector<std::string> types;
        for (const auto& f : fields(ct, c)) types.push_back(f.type);
        std::string key = "k" + std::to_string(next_key++);
        return {make_new(c, key, args_for(types, gamma, depth)), c};
      }
      case 1: {  // field access
        std::vector<std::pair<std::string, FieldDecl>> fs;
        for (const auto& [n, c] : ct)
          for (const auto& f : c.fields)
            if (subtype(ct, f.type, target)) fs.push_back({n, f});
        if (fs.empty()) break;
        const auto& [owner, f] = choose(rng, fs);
        auto recv = gen(owner, gamma, depth + 1);
        return {make_field(recv.first, f.name), f.type};
      }
      case 2: {  // set
        std::vector<std::string> cs;
        for (const auto& [n, _] : ct)
          if (subtype(ct, n, target)) cs.push_back(n);
        if (cs.empty()) break;
        auto recv = gen(choose(rng, cs), gamma, depth + 1);
        std::vector<std::string> types;
        for (const auto& f : fields(ct, recv.second)) types.push_back(f.type);
        return {make_set(recv.first, args_for(types, gamma, depth)), recv.second};
      }
      case 3: {  // method call
        std::vector<std::pair<std::string, const MethodDecl*>> ms;
        for (const auto& [n, c] : ct)
          for (const auto& m : c.methods)
            if (subtype(ct, m.ret, target)) ms.push_back({n, &m});
        if (ms.empty()) break;
        const auto& [owner, m] = choose(rng, ms);
        auto recv = gen(owner, gamma, depth + 1);
        std::vector<std::string> types;
        for (const auto& p : m->params) types.push_back(p.type);
        return {make_call(recv.first, m->name, args_for(types, gamma, depth)), m->ret};
      }
    }
    return leaf(target, gamma);
  }
};

std::vector<std::string> field_types(const ClassTable& ct, const std::string& c) {
  std::vector<std::string> out;
  for (const auto& f : fields(ct, c)) out.push_back(f.type);
  return out;
}

}  // namespace

std::pair<ExprPtr, std::string> gen_expr(Rng& rng, const Config& cfg, const std::string& target, const Gamma& gamma,
                                         int depth, const Limits& lim, int& next_key) {
  return ExprGen{rng, cfg, lim, next_key}.gen(target, gamma, depth);
}

std::optional<std::string> value_of_type(Rng& rng, const ClassTable& ct, const std::vector<AnnId>& objects,
                                         const std::string& type) {
  std::vector<std::string> ids;
  for (const auto& o : objects)
    if (subtype(ct, o.cls, type)) ids.push_back(o.id);
  if (ids.empty()) return std::nullopt;
  return choose(rng, ids);
}

Config gen_config(Rng& rng, const Backend& backend, const Limits& lim) {
  Config cfg;
  int n = pick(rng, 1, lim.max_classes);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("C" + std::to_string(i));

  int field_no = 0;
  int method_no = 0;
  for (int i = 0; i < n; ++i) {
    ClassDecl c;
    c.name = names[i];
    c.super = (i == 0 || coin(rng)) ? kObject : names[pick(rng, 0, i - 1)];
    int nf = pick(rng, 0, lim.max_fields);
    for (int k = 0; k < nf; ++k) c.fields.push_back({choose(rng, names), "f" + std::to_string(field_no++)});
    int nm = pick(rng, 0, lim.max_methods);
    for (int k = 0; k < nm; ++k) {
      MethodDecl m;
      m.ret = choose(rng, names);
      m.name = "m" + std::to_string(method_no++);
      int np = pick(rng, 0, 2);
      for (int p = 0; p < np; ++p) m.params.push_back({choose(rng, names), "x" + std::to_string(p)});
      c.methods.push_back(std::move(m));
    }
    cfg.ct[c.name] = std::move(c);
  }

  int obj_no = 0;
  for (const auto& c : names) {
    int k = pick(rng, 1, 2);
    for (int j = 0; j < k; ++j) cfg.objects.push_back({"o" + std::to_string(obj_no++), c});
  }
  for (const auto& o : cfg.objects) {
    Ids vals;
    for (const auto& t : field_types(cfg.ct, o.cls)) vals.push_back(value_of_type(rng, cfg.ct, cfg.objects, t).value());
    cfg.store = backend.insert(cfg.store, cfg.ct, o.cls, o.id, vals);
  }
  // A little update history, so signal tables carry timestamps.
  int updates = pick(rng, 0, 2);
  for (int u = 0; u < updates; ++u) {
    const AnnId& o = choose(rng, cfg.objects);
    auto types = field_types(cfg.ct, o.cls);
    if (types.empty()) continue;
    Ids vals;
    for (const auto& t : types) vals.push_back(value_of_type(rng, cfg.ct, cfg.objects, t).value());
    cfg.store = backend.update(cfg.store, cfg.ct, o, vals);
  }

  int next_key = 0;
  for (auto& [name, c] : cfg.ct)
    for (auto& m : c.methods) {
      Gamma gamma{{"this", name}};
      for (const auto& p : m.params) gamma.push_back({p.name, p.type});
      m.body = gen_expr(rng, cfg, m.ret, gamma, 1, lim, next_key).first;
    }
  cfg.main = gen_expr(rng, cfg, choose(rng, names), {}, 1, lim, next_key).first;
  return cfg;
}

std::vector<std::string> subclasses(const ClassTable& ct, const std::string& c) {
  std::vector<std::string> out;
  for (const auto& [n, d] : ct)
    if (d.super == c) out.push_back(n);
  return out;
}

bool has_construction_sites(const ClassTable& ct, const ExprPtr& main, const std::string& c) {
  bool found = false;
  for_each_body(ct, main, [&](const std::string&, const ExprPtr& body) {
    visit(body, [&](const ExprPtr& e) {
      if (e->kind == ExprKind::Set || (e->kind == ExprKind::New && subtype(ct, e->cls, c))) found = true;
    });
  });
  return found;
}

std::vector<AnnId> live_objects(const Store& s, const ClassTable& ct) {
  std::set<std::string> ids;
  for (const auto& [a, _] : s.bindings) ids.insert(a.id);
  std::vector<AnnId> out;
  for (const auto& id : ids) out.push_back(annotate(s, ct, id));
  return out;
}

std::optional<EvolutionOp> gen_op(Rng& rng, OpKind kind, const Config& cfg, bool typed_domain) {
  const ClassTable& ct = cfg.ct;
  auto used = used_names(ct);
  auto classes = class_names(ct);
  EvolutionOp op;
  op.kind = kind;

  auto with_own_fields = [&](bool leaf_only) {
    std::vector<std::string> out;
    for (const auto& [n, c] : ct)
      if (!c.fields.empty() && (!leaf_only || subclasses(ct, n).empty())) out.push_back(n);
    return out;
  };
  auto some_own_fields = [&](const std::string& c) {
    std::vector<std::string> out;
    for (const auto& f : ct.at(c).fields)
      if (coin(rng)) out.push_back(f.name);
    if (out.empty()) out.push_back(choose(rng, ct.at(c).fields).name);
    return out;
  };

  switch (kind) {
    case OpKind::NewClass: {
      op.cls = fresh(used, "N");
      used.insert(op.cls);
      op.other = coin(rng, 0.3) ? std::string(kObject) : choose(rng, classes);
      int nf = pick(rng, 0, 2);
      for (int i = 0; i < nf; ++i) {
        op.types.push_back(choose(rng, classes));
        op.names.push_back(fresh(used, "g"));
        used.insert(op.names.back());
      }
      return op;
    }
    case OpKind::RenameClass:
      op.cls = choose(rng, classes);
      op.other = fresh(used, "R");
      return op;
    case OpKind::RenameField: {
      auto cs = with_own_fields(typed_domain);
      if (cs.empty()) return std::nullopt;
      op.cls = choose(rng, cs);
      op.names = some_own_fields(op.cls);
      for (std::size_t i = 0; i < op.names.size(); ++i) {
        op.news.push_back(fresh(used, "r"));
        used.insert(op.news.back());
      }
      return op;
    }
    case OpKind::AddField: {
      std::vector<std::string> cs;
      for (const auto& c : classes)
        if (!typed_domain || subclasses(ct, c).empty()) cs.push_back(c);
      if (cs.empty()) return std::nullopt;
      op.cls = choose(rng, cs);
      std::vector<std::string> inhabited;
      for (const auto& t : classes)
        if (value_of_type(rng, ct, cfg.objects, t)) inhabited.push_back(t);
      if (inhabited.empty()) return std::nullopt;
      int nf = pick(rng, 1, 2);
      for (int i = 0; i < nf; ++i) {
        op.types.push_back(choose(rng, inhabited));
        op.names.push_back(fresh(used, "a"));
        used.insert(op.names.back());
        op.defaults.push_back(value_of_type(rng, ct, cfg.objects, op.types.back()).value());
      }
      return op;
    }
    case OpKind::DeleteField:
    case OpKind::ChangeFieldType: {
      auto cs = with_own_fields(false);
      if (cs.empty()) return std::nullopt;
      op.cls = choose(rng, cs);
      op.names = some_own_fields(op.cls);
      if (kind == OpKind::ChangeFieldType)
        for (std::size_t i = 0; i < op.names.size(); ++i) op.types.push_back(choose(rng, classes));
      return op;
    }
    case OpKind::NewSupClass: {
      auto cs = with_own_fields(false);
      if (cs.empty()) return std::nullopt;
      op.cls = choose(rng, cs);
      op.other = fresh(used, "S");
      const auto& own = ct.at(op.cls).fields;
      std::size_t from = 0;
      if (!typed_domain || !has_construction_sites(ct, cfg.main, op.cls))
        from = static_cast<std::size_t>(pick(rng, 0, static_cast<int>(own.size()) - 1));
      for (std::size_t i = from; i < own.size(); ++i) op.names.push_back(own[i].name);
      return op;
    }
    case OpKind::MergeClass:
    case OpKind::DeleteClass:
      return std::nullopt;
  }
  return std::nullopt;
}

Case gen_case(Rng& rng, OpKind kind, const Backend& backend, const Limits& lim, bool typed_domain) {
  for (;;) {
    Config cfg = gen_config(rng, backend, lim);
    if (kind != OpKind::MergeClass) {
      if (auto op = gen_op(rng, kind, cfg, typed_domain)) return {std::move(cfg), *op};
      continue;
    }
    auto sup = gen_op(rng, OpKind::NewSupClass, cfg, typed_domain);
    if (!sup) continue;
    EvolutionState st{cfg.store, VersionedProgram{0, cfg.ct, cfg.main}};
    EvolutionState next = apply_evolution(st, *sup, backend);
    Config merged{next.program.ct, next.program.main, next.store, {}};
    merged.objects = live_objects(merged.store, merged.ct);
    EvolutionOp op;
    op.kind = OpKind::MergeClass;
    op.cls = sup->cls;
    op.other = sup->other;
    return {std::move(merged), op};
  }
}

}  // namespace persevo::gen
