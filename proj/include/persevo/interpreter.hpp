#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "persevo/backends.hpp"
#include "persevo/relstore.hpp"
#include "persevo/syntax.hpp"

namespace persevo {

struct MachineState {
  Store store;
  ExprPtr expr;
};

enum class StepStatus { Stepped, Done, Stuck };

/**
 * Outcome of one reduction step. `rule` names the rule that fired at the
 * redex (R-FIELD, R-INVK, R-NEW, R-SET, R-ID); congruence is transparent.
 */
struct StepResult {
  StepStatus status = StepStatus::Stuck;
  MachineState next;
  std::string rule;
  Diagnostic reason;
};

StepResult step(const ClassTable& ct, const QuerySemantics& qs, const MachineState& state);

/** e[x̄ ↦ v̄]: replaces free variables. */
ExprPtr substitute(const ExprPtr& e, const std::map<std::string, ExprPtr>& subst);

enum class RunStatus { Done, Stuck, OutOfFuel };

struct RunResult {
  RunStatus status = RunStatus::Stuck;
  MachineState final;
  std::size_t steps = 0;
  Diagnostic reason;
};

inline constexpr std::size_t kDefaultFuel = 10000;

/** Steps to a value, a stuck state, or fuel exhaustion. Trace lines are `n: RULE  e  |hash|`. */
RunResult run(const ClassTable& ct, const QuerySemantics& qs, const Store& store, const ExprPtr& main,
              std::size_t fuel = kDefaultFuel, std::vector<std::string>* trace = nullptr);

std::string trace_line(std::size_t n, const std::string& rule, const ExprPtr& e, const Store& s);

struct VersionedProgram {
  std::size_t version = 0;
  ClassTable ct;
  ExprPtr main;
};

struct EvolutionState {
  Store store;
  VersionedProgram program;
};

/**
 * One evolution step: checks that the class table is OK and main types,
 * then rewrites class table, main and store together with version + 1.
 * Throws without touching `state` on any premise failure.
 */
EvolutionState apply_evolution(const EvolutionState& state, const EvolutionOp& op, const Backend& backend);

/**
 * Left fold of apply_evolution. A failure is rethrown with path "op N"
 * (1-based). When `history` is given it receives every state, starting with
 * the input.
 */
EvolutionState run_script(const EvolutionState& state, const std::vector<EvolutionOp>& ops, const Backend& backend,
                          std::vector<EvolutionState>* history = nullptr);

}  // namespace persevo
