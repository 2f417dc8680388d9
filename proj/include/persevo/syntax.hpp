#pragma once

#include <compare>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "persevo/error.hpp"

namespace persevo {

/** Identifier tagged with a class name, written `#l@C` when printed. */
struct AnnId {
  std::string id;
  std::string cls;

  auto operator<=>(const AnnId&) const = default;
  bool operator==(const AnnId&) const = default;
  std::string str() const { return id + "@" + cls; }
};

enum class ExprKind { Var, Field, Set, Call, New, RawId, AnnId };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/**
 * Core-language expression. `name` holds the variable, field, method or
 * identifier name; for New it holds the key identifier. `cls` is the class
 * of New and AnnId nodes.
 */
struct Expr {
  ExprKind kind;
  std::string name;
  std::string cls;
  ExprPtr recv;
  std::vector<ExprPtr> args;
};

ExprPtr make_var(std::string name);
ExprPtr make_field(ExprPtr recv, std::string field);
ExprPtr make_set(ExprPtr recv, std::vector<ExprPtr> args);
ExprPtr make_call(ExprPtr recv, std::string method, std::vector<ExprPtr> args);
ExprPtr make_new(std::string cls, std::string key, std::vector<ExprPtr> args);
ExprPtr make_raw(std::string id);
ExprPtr make_ann(std::string id, std::string cls);
ExprPtr make_ann(const AnnId& a);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
bool is_value(const ExprPtr& e);
bool contains_ann_id(const ExprPtr& e);

struct FieldDecl {
  std::string type;
  std::string name;
  bool operator==(const FieldDecl&) const = default;
};

struct Param {
  std::string type;
  std::string name;
  bool operator==(const Param&) const = default;
};

struct MethodDecl {
  std::string ret;
  std::string name;
  std::vector<Param> params;
  ExprPtr body;

  bool operator==(const MethodDecl& o) const;
};

struct ClassDecl {
  std::string name;
  std::string super;
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;

  bool operator==(const ClassDecl& o) const = default;
  const MethodDecl* method(const std::string& m) const;
  const FieldDecl* field(const std::string& f) const;
};

using ClassTable = std::map<std::string, ClassDecl>;

inline constexpr const char* kObject = "Object";

struct Program {
  ClassTable ct;
  ExprPtr main;

  bool operator==(const Program& o) const { return ct == o.ct && expr_equal(main, o.main); }
};

/** Checks the class-table invariants: superclasses exist and inheritance is acyclic. */
void validate_class_table(const ClassTable& ct);

Program parse_program(const std::string& text);
/** Parses a single expression; annotated identifiers are accepted only when allow_annotated is set. */
ExprPtr parse_expr(const std::string& text, bool allow_annotated = false);

std::string print_expr(const ExprPtr& e);
std::string print_class(const ClassDecl& c);
std::string print_program(const ClassTable& ct, const ExprPtr& main);
inline std::string print_program(const Program& p) { return print_program(p.ct, p.main); }

// Evolution language.

enum class OpKind {
  NewClass,
  RenameClass,
  RenameField,
  AddField,
  DeleteField,
  ChangeFieldType,
  NewSupClass,
  MergeClass,
  DeleteClass,
};

/**
 * One schema-modification operation. `cls` is the operated class C; `other`
 * is the second class (new superclass for NewClass, new name for RenameClass,
 * extracted superclass for NewSupClass, merged-away superclass for
 * MergeClass). `names` are the affected fields, `news` the replacement names
 * for RenameField, `types` the field types (NewClass, AddField,
 * ChangeFieldType) and `defaults` the raw default identifiers of AddField.
 */
struct EvolutionOp {
  OpKind kind = OpKind::NewClass;
  std::string cls;
  std::string other;
  std::vector<std::string> types;
  std::vector<std::string> names;
  std::vector<std::string> news;
  std::vector<std::string> defaults;

  bool operator==(const EvolutionOp&) const = default;
};

std::string op_name(OpKind k);
std::string print_op(const EvolutionOp& op);
std::vector<EvolutionOp> parse_evolution_script(const std::string& text);
EvolutionOp parse_op(const std::string& line);

bool is_reserved_word(const std::string& s);
bool is_valid_name(const std::string& s);

}  // namespace persevo
