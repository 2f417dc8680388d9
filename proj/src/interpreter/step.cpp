#include <cstdio>

#include "persevo/interpreter.hpp"
#include "persevo/typing.hpp"

namespace persevo {

namespace {

StepResult stuck(const MachineState& s, const std::string& rule, const std::string& msg, const ExprPtr& at) {
  StepResult r;
  r.status = StepStatus::Stuck;
  r.next = s;
  r.rule = rule;
  r.reason = Diagnostic{rule, msg, at ? print_expr(at) : "-"};
  return r;
}

StepResult stepped(Store store, ExprPtr e, const std::string& rule) {
  StepResult r;
  r.status = StepStatus::Stepped;
  r.next = MachineState{std::move(store), std::move(e)};
  r.rule = rule;
  return r;
}

ExprPtr with_recv(const ExprPtr& e, ExprPtr recv) {
  auto out = std::make_shared<Expr>(*e);
  out->recv = std::move(recv);
  return out;
}

ExprPtr with_arg(const ExprPtr& e, std::size_t i, ExprPtr arg) {
  auto out = std::make_shared<Expr>(*e);
  out->args[i] = std::move(arg);
  return out;
}

AnnId ann(const ExprPtr& e) { return AnnId{e->name, e->cls}; }

std::vector<std::string> ids(const std::vector<ExprPtr>& args) {
  std::vector<std::string> out;
  for (const auto& a : args) out.push_back(a->name);
  return out;
}

// Congruence: steps the receiver, then the first non-value argument. Returns
// nullopt when everything is already a value.
std::optional<StepResult> step_inside(const ClassTable& ct, const QuerySemantics& qs, const MachineState& s) {
  const ExprPtr& e = s.expr;
  if (e->recv && !is_value(e->recv)) {
    StepResult r = step(ct, qs, MachineState{s.store, e->recv});
    if (r.status == StepStatus::Stepped) r.next.expr = with_recv(e, r.next.expr);
    if (r.status == StepStatus::Stuck) r.next = s;
    return r;
  }
  for (std::size_t i = 0; i < e->args.size(); ++i) {
    if (is_value(e->args[i])) continue;
    StepResult r = step(ct, qs, MachineState{s.store, e->args[i]});
    if (r.status == StepStatus::Stepped) r.next.expr = with_arg(e, i, r.next.expr);
    if (r.status == StepStatus::Stuck) r.next = s;
    return r;
  }
  return std::nullopt;
}

}  // namespace

ExprPtr substitute(const ExprPtr& e, const std::map<std::string, ExprPtr>& subst) {
  if (!e) return e;
  if (e->kind == ExprKind::Var) {
    auto it = subst.find(e->name);
    return it == subst.end() ? e : it->second;
  }
  auto out = std::make_shared<Expr>(*e);
  out->recv = substitute(e->recv, subst);
  for (auto& a : out->args) a = substitute(a, subst);
  return out;
}

StepResult step(const ClassTable& ct, const QuerySemantics& qs, const MachineState& s) {
  const ExprPtr& e = s.expr;
  switch (e->kind) {
    case ExprKind::AnnId: {
      StepResult r;
      r.status = StepStatus::Done;
      r.next = s;
      return r;
    }
    case ExprKind::Var:
      return stuck(s, "R-VAR", "free variable " + e->name, e);
    case ExprKind::RawId:
      try {
        return stepped(s.store, make_ann(qs.annotate(s.store, ct, e->name)), "R-ID");
      } catch (const Error& err) {
        return stuck(s, "R-ID", err.diagnostic().message, e);
      }
    default:
      break;
  }
  if (auto inner = step_inside(ct, qs, s)) return *inner;

  try {
    switch (e->kind) {
      case ExprKind::Field: {
        std::string l = qs.select(s.store, ct, ann(e->recv), e->name);
        AnnId v;
        try {
          v = qs.annotate(s.store, ct, l);
        } catch (const Error& err) {
          return stuck(s, "R-FIELD", "selected #" + l + " is not in the store: " + err.diagnostic().message, e);
        }
        return stepped(s.store, make_ann(v), "R-FIELD");
      }
      case ExprKind::Set: {
        Store next = qs.update(s.store, ct, ann(e->recv), ids(e->args));
        return stepped(std::move(next), e->recv, "R-SET");
      }
      case ExprKind::Call: {
        const std::string& c = e->recv->cls;
        auto body = is_class(ct, c) ? mbody(ct, e->name, c) : std::nullopt;
        if (!body) return stuck(s, "R-INVK", "class " + c + " has no method " + e->name, e);
        if (body->params.size() != e->args.size())
          return stuck(s, "R-INVK", "method " + e->name + " expects " + std::to_string(body->params.size()) +
                                        " argument(s)", e);
        std::map<std::string, ExprPtr> subst{{"this", e->recv}};
        for (std::size_t i = 0; i < e->args.size(); ++i) subst[body->params[i]] = e->args[i];
        return stepped(s.store, substitute(body->body, subst), "R-INVK");
      }
      case ExprKind::New: {
        Store next = qs.insert(s.store, ct, e->cls, e->name, ids(e->args));
        return stepped(std::move(next), make_ann(e->name, e->cls), "R-NEW");
      }
      default:
        break;
    }
  } catch (const Error& err) {
    const char* rule = e->kind == ExprKind::Field ? "R-FIELD" : e->kind == ExprKind::Set ? "R-SET" : "R-NEW";
    return stuck(s, rule, err.diagnostic().message, e);
  }
  return stuck(s, "STEP", "no rule applies", e);
}

std::string trace_line(std::size_t n, const std::string& rule, const ExprPtr& e, const Store& s) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(store_hash(s)));
  return std::to_string(n) + ": " + rule + "  " + print_expr(e) + "  |" + hash + "|";
}

RunResult run(const ClassTable& ct, const QuerySemantics& qs, const Store& store, const ExprPtr& main, std::size_t fuel,
              std::vector<std::string>* trace) {
  RunResult out;
  out.final = MachineState{store, main};
  while (true) {
    if (is_value(out.final.expr)) {
      out.status = RunStatus::Done;
      return out;
    }
    if (out.steps >= fuel) {
      out.status = RunStatus::OutOfFuel;
      out.reason = Diagnostic{"FUEL", "no value after " + std::to_string(fuel) + " step(s)", print_expr(out.final.expr)};
      return out;
    }
    StepResult r = step(ct, qs, out.final);
    if (r.status == StepStatus::Stuck) {
      out.status = RunStatus::Stuck;
      out.reason = r.reason;
      return out;
    }
    out.final = std::move(r.next);
    ++out.steps;
    if (trace) trace->push_back(trace_line(out.steps, r.rule, out.final.expr, out.final.store));
  }
}

}  // namespace persevo
