#include <algorithm>

#include "persevo/evolution.hpp"

namespace persevo {

namespace {

std::shared_ptr<Expr> rebuild(const ExprPtr& e, ExprPtr recv, std::vector<ExprPtr> args) {
  auto out = std::make_shared<Expr>(*e);
  out->recv = std::move(recv);
  out->args = std::move(args);
  return out;
}

template <typename F>
std::vector<ExprPtr> map_args(const std::vector<ExprPtr>& args, F f) {
  std::vector<ExprPtr> out;
  for (const auto& a : args) out.push_back(f(a));
  return out;
}

TypeEnv method_env(const std::string& cls, const MethodDecl& m) {
  TypeEnv gamma{{"this", cls}};
  for (const auto& p : m.params) gamma[p.name] = p.type;
  return gamma;
}

}  // namespace

std::string rename_class(const std::string& c0, const std::string& c, const std::string& d) { return c0 == c ? d : c0; }

ExprPtr rename_class(const ExprPtr& e, const std::string& c, const std::string& d) {
  if (!e) return e;
  auto recv = rename_class(e->recv, c, d);
  auto args = map_args(e->args, [&](const ExprPtr& a) { return rename_class(a, c, d); });
  auto out = rebuild(e, std::move(recv), std::move(args));
  if (e->kind == ExprKind::New || e->kind == ExprKind::AnnId) out->cls = rename_class(e->cls, c, d);
  return out;
}

ClassTable rename_class(const ClassTable& ct, const std::string& c, const std::string& d) {
  ClassTable out;
  for (const auto& [name, decl] : ct) {
    ClassDecl nd = decl;
    nd.name = rename_class(decl.name, c, d);
    nd.super = rename_class(decl.super, c, d);
    for (auto& f : nd.fields) f.type = rename_class(f.type, c, d);
    for (auto& m : nd.methods) {
      m.ret = rename_class(m.ret, c, d);
      for (auto& p : m.params) p.type = rename_class(p.type, c, d);
      m.body = rename_class(m.body, c, d);
    }
    out[nd.name] = std::move(nd);
  }
  return out;
}

ExprPtr rename_field(const ExprPtr& e, const ClassTable& ct, const std::string& c, const std::vector<std::string>& olds,
                     const std::vector<std::string>& news, const TypeEnv& gamma, const StoreEnv& sigma) {
  if (!e) return e;
  auto rec = [&](const ExprPtr& x) { return rename_field(x, ct, c, olds, news, gamma, sigma); };
  auto out = rebuild(e, rec(e->recv), map_args(e->args, rec));
  if (e->kind == ExprKind::Field) {
    auto it = std::find(olds.begin(), olds.end(), e->name);
    if (it != olds.end() && type_expr(ct, gamma, sigma, e->recv, "rename") == c)
      out->name = news[static_cast<std::size_t>(it - olds.begin())];
  }
  return out;
}

ClassTable rename_field(const ClassTable& ct, const std::string& c, const std::vector<std::string>& olds,
                        const std::vector<std::string>& news, const StoreEnv& sigma) {
  ClassTable out;
  for (const auto& [name, decl] : ct) {
    ClassDecl nd = decl;
    if (name == c)
      for (auto& f : nd.fields) {
        auto it = std::find(olds.begin(), olds.end(), f.name);
        if (it != olds.end()) f.name = news[static_cast<std::size_t>(it - olds.begin())];
      }
    for (auto& m : nd.methods) m.body = rename_field(m.body, ct, c, olds, news, method_env(name, m), sigma);
    out[name] = std::move(nd);
  }
  return out;
}

ExprPtr expand(const ExprPtr& e, const ClassTable& ct, const std::string& c, const std::vector<ExprPtr>& defaults,
               const TypeEnv& gamma, const StoreEnv& sigma) {
  if (!e) return e;
  auto rec = [&](const ExprPtr& x) { return expand(x, ct, c, defaults, gamma, sigma); };
  auto args = map_args(e->args, rec);
  bool grow = (e->kind == ExprKind::New && e->cls == c) ||
              (e->kind == ExprKind::Set &&
               set_target(ct, type_expr(ct, gamma, sigma, e->recv, "expand"), e->args.size()) == c);
  if (grow) args.insert(args.end(), defaults.begin(), defaults.end());
  return rebuild(e, rec(e->recv), std::move(args));
}

ClassTable expand(const ClassTable& target, const ClassTable& typing_ct, const std::string& c,
                  const std::vector<ExprPtr>& defaults, const StoreEnv& sigma) {
  ClassTable out;
  for (const auto& [name, decl] : target) {
    ClassDecl nd = decl;
    for (auto& m : nd.methods) m.body = expand(m.body, typing_ct, c, defaults, method_env(name, m), sigma);
    out[name] = std::move(nd);
  }
  return out;
}

}  // namespace persevo
