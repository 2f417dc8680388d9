#include <algorithm>
#include <set>

#include "persevo/evolution.hpp"

namespace persevo {

namespace {

[[noreturn]] void fail(const std::string& rule, const std::string& msg, const std::string& path) {
  throw Error(ErrorKind::Premise, rule, msg, path);
}

const ClassDecl& require_class(const ClassTable& ct, const std::string& c, const std::string& rule) {
  auto it = ct.find(c);
  if (it == ct.end()) fail(rule, "class " + c + " is not declared", c);
  return it->second;
}

void require_fresh_class(const ClassTable& ct, const std::string& c, const std::string& rule) {
  if (!is_valid_name(c) || is_reserved_word(c)) fail(rule, "invalid class name '" + c + "'", c);
  if (c == kObject || ct.count(c)) fail(rule, "class " + c + " already exists", c);
}

void require_types(const ClassTable& ct, const std::vector<std::string>& types, const std::string& rule,
                   const std::string& path, const std::string& self = "") {
  for (const auto& t : types)
    if (!is_class(ct, t) && t != self) fail(rule, "unknown type " + t, path);
}

void require_new_names(const std::vector<std::string>& names, const std::set<std::string>& taken,
                       const std::string& rule, const std::string& path) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!is_valid_name(n) || is_reserved_word(n)) fail(rule, "invalid field name '" + n + "'", path);
    if (n == kIdColumn || n == kTimeColumn) fail(rule, "field name " + n + " is reserved", path);
    if (!seen.insert(n).second) fail(rule, "field " + n + " listed twice", path);
    if (taken.count(n)) fail(rule, "field " + n + " already exists in " + path, path);
  }
}

void require_own_fields(const ClassDecl& d, const std::vector<std::string>& names, const std::string& rule) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!d.field(n)) fail(rule, "field " + n + " is not declared in " + d.name, d.name);
    if (!seen.insert(n).second) fail(rule, "field " + n + " listed twice", d.name);
  }
}

std::set<std::string> field_names(const ClassTable& ct, const std::string& c) {
  std::set<std::string> out;
  for (const auto& f : fields(ct, c)) out.insert(f.name);
  return out;
}

void require_lengths(const EvolutionOp& op, std::size_t a, std::size_t b, const std::string& rule) {
  if (a != b) fail(rule, "arity mismatch in " + op_name(op.kind), op.cls);
}

ClassTable new_class(const ClassTable& ct, const std::string& c, const std::string& d,
                     const std::vector<std::string>& types, const std::vector<std::string>& names) {
  ClassTable out = ct;
  ClassDecl decl{c, d, {}, {}};
  for (std::size_t i = 0; i < names.size(); ++i) decl.fields.push_back({types[i], names[i]});
  out[c] = std::move(decl);
  return out;
}

}  // namespace

std::string evolve_class_name(const EvolutionOp& op, const std::string& c) {
  return op.kind == OpKind::RenameClass ? rename_class(c, op.cls, op.other) : c;
}

ClassTable evolve_class_table(const EvolutionOp& op, const ClassTable& ct, const StoreEnv& sigma) {
  const std::string& c = op.cls;
  switch (op.kind) {
    case OpKind::NewClass: {
      const char* rule = "E-NEWCLASS";
      require_fresh_class(ct, c, rule);
      if (op.other != kObject && !ct.count(op.other)) fail(rule, "superclass " + op.other + " is not declared", c);
      require_lengths(op, op.types.size(), op.names.size(), rule);
      require_types(ct, op.types, rule, c, c);
      require_new_names(op.names, field_names(ct, op.other), rule, c);
      return new_class(ct, c, op.other, op.types, op.names);
    }
    case OpKind::DeleteClass: {
      require_class(ct, c, "E-DELCLASS");
      ClassTable out = ct;
      out.erase(c);
      return out;
    }
    case OpKind::RenameClass: {
      const char* rule = "E-RENAMECLASS";
      require_class(ct, c, rule);
      require_fresh_class(ct, op.other, rule);
      return rename_class(ct, c, op.other);
    }
    case OpKind::RenameField: {
      const char* rule = "E-RENAMEFIELD";
      const auto& decl = require_class(ct, c, rule);
      require_lengths(op, op.names.size(), op.news.size(), rule);
      require_own_fields(decl, op.names, rule);
      require_new_names(op.news, field_names(ct, c), rule, c);
      return rename_field(ct, c, op.names, op.news, sigma);
    }
    case OpKind::AddField: {
      const char* rule = "E-ADDFIELD";
      require_class(ct, c, rule);
      require_lengths(op, op.types.size(), op.names.size(), rule);
      require_lengths(op, op.defaults.size(), op.names.size(), rule);
      require_types(ct, op.types, rule, c);
      require_new_names(op.names, field_names(ct, c), rule, c);
      std::vector<ExprPtr> defaults;
      for (std::size_t i = 0; i < op.defaults.size(); ++i) {
        std::string t;
        try {
          t = type_raw_id(ct, sigma, op.defaults[i]);
        } catch (const Error& e) {
          fail(rule, "default for " + op.names[i] + ": " + e.diagnostic().message, c);
        }
        if (!subtype(ct, t, op.types[i]))
          fail(rule, "default #" + op.defaults[i] + " has type " + t + ", not a subtype of " + op.types[i], c);
        defaults.push_back(make_raw(op.defaults[i]));
      }
      ClassTable grown = ct;
      for (std::size_t i = 0; i < op.names.size(); ++i) grown[c].fields.push_back({op.types[i], op.names[i]});
      return expand(grown, ct, c, defaults, sigma);
    }
    case OpKind::DeleteField: {
      const char* rule = "E-DELFIELD";
      const auto& decl = require_class(ct, c, rule);
      require_own_fields(decl, op.names, rule);
      ClassTable out = ct;
      std::erase_if(out[c].fields, [&](const FieldDecl& f) {
        return std::find(op.names.begin(), op.names.end(), f.name) != op.names.end();
      });
      return out;
    }
    case OpKind::ChangeFieldType: {
      const char* rule = "E-CHNGFLDTYPE";
      const auto& decl = require_class(ct, c, rule);
      require_lengths(op, op.types.size(), op.names.size(), rule);
      require_own_fields(decl, op.names, rule);
      require_types(ct, op.types, rule, c);
      ClassTable out = ct;
      for (auto& f : out[c].fields)
        for (std::size_t i = 0; i < op.names.size(); ++i)
          if (f.name == op.names[i]) f.type = op.types[i];
      return out;
    }
    case OpKind::NewSupClass: {
      const char* rule = "E-NEWSUPCLASS";
      const auto& decl = require_class(ct, c, rule);
      require_fresh_class(ct, op.other, rule);
      require_own_fields(decl, op.names, rule);
      // The extracted fields are the trailing own fields of C, in declaration order.
      std::size_t keep = decl.fields.size() - op.names.size();
      for (std::size_t i = 0; i < op.names.size(); ++i)
        if (decl.fields[keep + i].name != op.names[i])
          fail(rule, "extracted fields must be the last declared fields of " + c + ", in order", c);
      std::vector<std::string> gt, gn, ft, fn;
      for (std::size_t i = 0; i < decl.fields.size(); ++i) {
        (i < keep ? ft : gt).push_back(decl.fields[i].type);
        (i < keep ? fn : gn).push_back(decl.fields[i].name);
      }
      ClassTable out = ct;
      out[c].fields.resize(keep);
      out = new_class(out, op.other, decl.super, gt, gn);
      out[c].super = op.other;
      return out;
    }
    case OpKind::MergeClass: {
      const char* rule = "E-MERGECLASS";
      const std::string& d = op.other;
      const auto& cdecl = require_class(ct, c, rule);
      const auto& ddecl = require_class(ct, d, rule);
      if (cdecl.super != d) fail(rule, c + " does not directly extend " + d, c);
      for (const auto& m : cdecl.methods)
        if (ddecl.method(m.name)) fail(rule, "method " + m.name + " is declared in both " + c + " and " + d, c);
      for (const auto& [name, other] : ct)
        if (name != c && other.super == d) fail(rule, "class " + name + " also extends " + d, name);
      for (const auto& [name, other] : ct)
        for (const auto& m : other.methods)
          visit(m.body, [&](const ExprPtr& e) {
            if (e->kind == ExprKind::New && e->cls == d)
              fail(rule, "new " + d + "(...) appears in " + name + "." + m.name, name + "." + m.name);
          });
      ClassDecl merged{c, ddecl.super, ddecl.fields, ddecl.methods};
      merged.fields.insert(merged.fields.end(), cdecl.fields.begin(), cdecl.fields.end());
      merged.methods.insert(merged.methods.end(), cdecl.methods.begin(), cdecl.methods.end());
      ClassTable out = ct;
      out.erase(d);
      out[c] = std::move(merged);
      return out;
    }
  }
  fail("EVOLVE", "unknown operation", c);
}

}  // namespace persevo
