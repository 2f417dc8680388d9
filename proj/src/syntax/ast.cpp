#include <cctype>
#include <set>

#include "persevo/syntax.hpp"

namespace persevo {

namespace {

ExprPtr node(ExprKind k, std::string name, std::string cls, ExprPtr recv,
             std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->name = std::move(name);
  e->cls = std::move(cls);
  e->recv = std::move(recv);
  e->args = std::move(args);
  return e;
}

}  // namespace

ExprPtr make_var(std::string name) { return node(ExprKind::Var, std::move(name), "", nullptr, {}); }
ExprPtr make_field(ExprPtr recv, std::string field) {
  return node(ExprKind::Field, std::move(field), "", std::move(recv), {});
}
ExprPtr make_set(ExprPtr recv, std::vector<ExprPtr> args) {
  return node(ExprKind::Set, "set", "", std::move(recv), std::move(args));
}
ExprPtr make_call(ExprPtr recv, std::string method, std::vector<ExprPtr> args) {
  return node(ExprKind::Call, std::move(method), "", std::move(recv), std::move(args));
}
ExprPtr make_new(std::string cls, std::string key, std::vector<ExprPtr> args) {
  return node(ExprKind::New, std::move(key), std::move(cls), nullptr, std::move(args));
}
ExprPtr make_raw(std::string id) { return node(ExprKind::RawId, std::move(id), "", nullptr, {}); }
ExprPtr make_ann(std::string id, std::string cls) {
  return node(ExprKind::AnnId, std::move(id), std::move(cls), nullptr, {});
}
ExprPtr make_ann(const AnnId& a) { return make_ann(a.id, a.cls); }

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name || a->cls != b->cls) return false;
  if (!expr_equal(a->recv, b->recv)) return false;
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!expr_equal(a->args[i], b->args[i])) return false;
  return true;
}

bool is_value(const ExprPtr& e) { return e->kind == ExprKind::AnnId; }

bool contains_ann_id(const ExprPtr& e) {
  if (!e) return false;
  if (e->kind == ExprKind::AnnId) return true;
  if (contains_ann_id(e->recv)) return true;
  for (const auto& a : e->args)
    if (contains_ann_id(a)) return true;
  return false;
}

bool MethodDecl::operator==(const MethodDecl& o) const {
  return ret == o.ret && name == o.name && params == o.params && expr_equal(body, o.body);
}

const MethodDecl* ClassDecl::method(const std::string& m) const {
  for (const auto& md : methods)
    if (md.name == m) return &md;
  return nullptr;
}

const FieldDecl* ClassDecl::field(const std::string& f) const {
  for (const auto& fd : fields)
    if (fd.name == f) return &fd;
  return nullptr;
}

void validate_class_table(const ClassTable& ct) {
  if (ct.count(kObject)) throw Error(ErrorKind::Syntax, "CLASS", "Object cannot be redeclared", kObject);
  for (const auto& [name, decl] : ct) {
    if (decl.name != name)
      throw Error(ErrorKind::Syntax, "CLASS", "class table key does not match declaration", name);
    if (decl.super != kObject && !ct.count(decl.super))
      throw Error(ErrorKind::Syntax, "CLASS", "unknown superclass " + decl.super, name);
  }
  for (const auto& [name, decl] : ct) {
    std::set<std::string> seen{name};
    std::string cur = decl.super;
    while (cur != kObject) {
      if (!seen.insert(cur).second)
        throw Error(ErrorKind::Syntax, "CLASS", "cyclic inheritance through " + cur, name);
      cur = ct.at(cur).super;
    }
  }
}

bool is_reserved_word(const std::string& s) {
  static const std::set<std::string> words{"class", "extends", "main", "new", "return"};
  return words.count(s) > 0;
}

bool is_valid_name(const std::string& s) {
  if (s.empty() || s == "_") return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace persevo
