#include "persevo/evolution.hpp"
#include "persevo/interpreter.hpp"

namespace persevo {

EvolutionState apply_evolution(const EvolutionState& state, const EvolutionOp& op, const Backend& backend) {
  const auto& prog = state.program;
  auto diags = check_program(prog.ct, prog.main, state.store);
  if (!diags.empty())
    throw Error(ErrorKind::Premise, "EV-CAT", "program is not well-typed before " + op_name(op.kind) + ": " +
                                                  diags.front().render(),
                diags.front().path);
  StoreEnv sigma = build_store_env(prog.ct, prog.main, state.store);
  EvolutionState out;
  out.program.ct = evolve_class_table(op, prog.ct, sigma);
  out.program.main = evolve_expr(op, prog.main, prog.ct, sigma);
  out.program.version = prog.version + 1;
  out.store = evolve_store(op, state.store, prog.ct, backend);
  return out;
}

EvolutionState run_script(const EvolutionState& state, const std::vector<EvolutionOp>& ops, const Backend& backend,
                          std::vector<EvolutionState>* history) {
  EvolutionState cur = state;
  if (history) history->push_back(cur);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    try {
      cur = apply_evolution(cur, ops[i], backend);
    } catch (const Error& e) {
      const auto& d = e.diagnostic();
      throw Error(e.kind(), d.rule, d.message + " (at " + d.path + ")", "op " + std::to_string(i + 1));
    }
    if (history) history->push_back(cur);
  }
  return cur;
}

}  // namespace persevo
