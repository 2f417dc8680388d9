#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "persevo/relstore.hpp"
#include "persevo/syntax.hpp"

namespace persevo {

/** Γ: variable name to class name. */
using TypeEnv = std::map<std::string, std::string>;
/** Σ: annotated identifier to class name; Σ(l_C) = C. */
using StoreEnv = std::map<AnnId, std::string>;

struct MethodBody {
  std::vector<std::string> params;
  ExprPtr body;
};

struct MethodType {
  std::vector<std::string> params;
  std::string ret;
};

bool is_class(const ClassTable& ct, const std::string& c);
bool subtype(const ClassTable& ct, const std::string& c, const std::string& d);
std::vector<FieldDecl> fields(const ClassTable& ct, const std::string& c);
std::optional<MethodBody> mbody(const ClassTable& ct, const std::string& m, const std::string& c);
std::optional<MethodType> mtype(const ClassTable& ct, const std::string& m, const std::string& c);
/** Superclass chain of c, starting with c itself and ending before Object. */
std::vector<std::string> ancestors(const ClassTable& ct, const std::string& c);

/**
 * Picks the class C among `candidates` with C <: every other candidate.
 * Throws when the candidates are empty or have no most specific element.
 */
std::string most_specific(const ClassTable& ct, const std::vector<std::string>& candidates, const std::string& rule,
                          const std::string& what);

/**
 * Class a set call with `arity` arguments resolves to on a receiver of type
 * `recv`: the most specific class among recv and its superclasses (Object
 * included) with exactly that many fields. Nullopt when none matches.
 */
std::optional<std::string> set_target(const ClassTable& ct, const std::string& recv, std::size_t arity);

/** Types l with rule T-ID1 under Σ. */
std::string type_raw_id(const ClassTable& ct, const StoreEnv& sigma, const std::string& l);

std::string type_expr(const ClassTable& ct, const TypeEnv& gamma, const StoreEnv& sigma, const ExprPtr& e,
                      const std::string& path = "main");

std::vector<Diagnostic> check_class_table(const ClassTable& ct, const StoreEnv& sigma = {});

/** Calls f(path, expr) for main and every method body. */
void for_each_body(const ClassTable& ct, const ExprPtr& main,
                   const std::function<void(const std::string&, const ExprPtr&)>& f);
/** Calls f on e and every subexpression, outermost first. */
void visit(const ExprPtr& e, const std::function<void(const ExprPtr&)>& f);

StoreEnv build_store_env(const ClassTable& ct, const ExprPtr& main, const Store& store);

std::vector<Diagnostic> check_store_wellformed(const ClassTable& ct, const StoreEnv& sigma, const Store& store);

/** All diagnostics for a program against a store: class table, Σ construction and main. */
std::vector<Diagnostic> check_program(const ClassTable& ct, const ExprPtr& main, const Store& store,
                                      std::string* main_type = nullptr);

}  // namespace persevo
