#pragma once

#include <string>
#include <vector>

#include "persevo/backends.hpp"
#include "persevo/relstore.hpp"
#include "persevo/syntax.hpp"
#include "persevo/typing.hpp"

namespace persevo {

/** Class name after the operation: renamed for RenameClass, otherwise unchanged. */
std::string evolve_class_name(const EvolutionOp& op, const std::string& c);

/**
 * Rewrites the class table. Premise failures throw Error(Premise) tagged
 * with the rule name (E-NEWCLASS, E-RENAMEFIELD, ...).
 */
ClassTable evolve_class_table(const EvolutionOp& op, const ClassTable& ct, const StoreEnv& sigma);

/** Rewrites an expression (main, or a runtime term) under Γ = ∅. `ct` is the class table before the op. */
ExprPtr evolve_expr(const EvolutionOp& op, const ExprPtr& e, const ClassTable& ct, const StoreEnv& sigma);

StoreEnv evolve_store_env(const EvolutionOp& op, const StoreEnv& sigma);

/** op(μ): schema through the backend, then bindings and links. `ct` is the class table before the op. */
Store evolve_store(const EvolutionOp& op, const Store& store, const ClassTable& ct, const Backend& backend);

// Rewriters. The typed ones resolve receivers against the class table they are given.

std::string rename_class(const std::string& c0, const std::string& c, const std::string& d);
ExprPtr rename_class(const ExprPtr& e, const std::string& c, const std::string& d);
ClassTable rename_class(const ClassTable& ct, const std::string& c, const std::string& d);

/** Renames accesses e.f_i to e.g_i where e types exactly to c. */
ExprPtr rename_field(const ExprPtr& e, const ClassTable& ct, const std::string& c, const std::vector<std::string>& olds,
                     const std::vector<std::string>& news, const TypeEnv& gamma, const StoreEnv& sigma);
ClassTable rename_field(const ClassTable& ct, const std::string& c, const std::vector<std::string>& olds,
                        const std::vector<std::string>& news, const StoreEnv& sigma);

/** Appends `defaults` to `new c(...)` and to set calls whose receiver types exactly to c. */
ExprPtr expand(const ExprPtr& e, const ClassTable& ct, const std::string& c, const std::vector<ExprPtr>& defaults,
               const TypeEnv& gamma, const StoreEnv& sigma);
/** Expands every method body of `target`, typing receivers against `typing_ct`. */
ClassTable expand(const ClassTable& target, const ClassTable& typing_ct, const std::string& c,
                  const std::vector<ExprPtr>& defaults, const StoreEnv& sigma);

}  // namespace persevo
