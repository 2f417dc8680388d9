#include "persevo/syntax.hpp"

namespace persevo {

namespace {

void print_args(std::string& out, const std::vector<ExprPtr>& args, bool leading_comma) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0 || leading_comma) out += ", ";
    out += print_expr(args[i]);
  }
}

}  // namespace

std::string print_expr(const ExprPtr& e) {
  std::string out;
  switch (e->kind) {
    case ExprKind::Var: return e->name;
    case ExprKind::RawId: return "#" + e->name;
    case ExprKind::AnnId: return "#" + e->name + "@" + e->cls;
    case ExprKind::Field: return print_expr(e->recv) + "." + e->name;
    case ExprKind::Set:
    case ExprKind::Call:
      out = print_expr(e->recv) + "." + e->name + "(";
      print_args(out, e->args, false);
      return out + ")";
    case ExprKind::New:
      out = "new " + e->cls + "(#" + e->name;
      print_args(out, e->args, true);
      return out + ")";
  }
  return out;
}

std::string print_class(const ClassDecl& c) {
  std::string out = "class " + c.name + " extends " + c.super + " {";
  if (c.fields.empty() && c.methods.empty()) return out + "}\n";
  out += "\n";
  for (const auto& f : c.fields) out += "  " + f.type + " " + f.name + ";\n";
  for (const auto& m : c.methods) {
    out += "  " + m.ret + " " + m.name + "(";
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      if (i) out += ", ";
      out += m.params[i].type + " " + m.params[i].name;
    }
    out += ") { return " + print_expr(m.body) + "; }\n";
  }
  return out + "}\n";
}

std::string print_program(const ClassTable& ct, const ExprPtr& main) {
  std::string out;
  for (const auto& [_, c] : ct) out += print_class(c);
  out += "main { " + print_expr(main) + " }\n";
  return out;
}

}  // namespace persevo
