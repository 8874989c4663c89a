#pragma once

#include "minibee/ast.hpp"

#include <sstream>
#include <string>

namespace minibee {

namespace detail {

// Binding strength; higher binds tighter. Binary operators are left associative,
// so a right operand of equal strength needs parentheses.
inline int expr_strength(const Expr &e) {
  switch (e.kind) {
  case ExprKind::Union:
  case ExprKind::Inter:
    return 1;
  case ExprKind::Plus:
  case ExprKind::Minus:
    return 2;
  default:
    return 3;
  }
}

inline int pred_strength(const Pred &p) {
  switch (p.kind) {
  case PredKind::Implies:
    return 1;
  case PredKind::Or:
    return 2;
  case PredKind::And:
    return 3;
  default:
    return 4;
  }
}

inline const char *expr_op(ExprKind k) {
  switch (k) {
  case ExprKind::Union:
    return " \\/ ";
  case ExprKind::Inter:
    return " /\\ ";
  case ExprKind::Plus:
    return " + ";
  case ExprKind::Minus:
    return " - ";
  default:
    return "?";
  }
}

inline const char *pred_op(PredKind k) {
  switch (k) {
  case PredKind::And:
    return " & ";
  case PredKind::Or:
    return " or ";
  case PredKind::Implies:
    return " => ";
  case PredKind::In:
    return " : ";
  case PredKind::NotIn:
    return " /: ";
  case PredKind::Subset:
    return " <: ";
  case PredKind::Eq:
    return " = ";
  case PredKind::Neq:
    return " /= ";
  case PredKind::Lt:
    return " < ";
  case PredKind::Le:
    return " <= ";
  case PredKind::Gt:
    return " > ";
  case PredKind::Ge:
    return " >= ";
  default:
    return "?";
  }
}

inline void render_expr(std::ostream &os, const Expr &e) {
  switch (e.kind) {
  case ExprKind::Ident:
    os << e.name;
    return;
  case ExprKind::NatLit:
    os << e.number;
    return;
  case ExprKind::BoolLit:
    os << (e.number ? "TRUE" : "FALSE");
    return;
  case ExprKind::EmptySet:
    os << "{}";
    return;
  case ExprKind::SetLit:
    os << '{';
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      if (i)
        os << ", ";
      render_expr(os, *e.args[i]);
    }
    os << '}';
    return;
  case ExprKind::Card:
    os << "card(";
    render_expr(os, *e.args[0]);
    os << ')';
    return;
  case ExprKind::NatSet:
    os << "NAT";
    return;
  case ExprKind::BoolSet:
    os << "BOOL";
    return;
  case ExprKind::PowSet:
    os << "POW(" << e.name << ')';
    return;
  case ExprKind::Union:
  case ExprKind::Inter:
  case ExprKind::Plus:
  case ExprKind::Minus: {
    const int s = expr_strength(e);
    const bool lp = expr_strength(*e.args[0]) < s;
    const bool rp = expr_strength(*e.args[1]) <= s;
    if (lp)
      os << '(';
    render_expr(os, *e.args[0]);
    if (lp)
      os << ')';
    os << expr_op(e.kind);
    if (rp)
      os << '(';
    render_expr(os, *e.args[1]);
    if (rp)
      os << ')';
    return;
  }
  }
}

inline void render_pred(std::ostream &os, const Pred &p) {
  switch (p.kind) {
  case PredKind::True:
    os << "true";
    return;
  case PredKind::False:
    os << "false";
    return;
  case PredKind::Not:
    os << "not(";
    render_pred(os, *p.preds[0]);
    os << ')';
    return;
  case PredKind::Exists:
    os << "#(";
    for (std::size_t i = 0; i < p.params.size(); ++i)
      os << (i ? ", " : "") << p.params[i].name;
    os << ").(";
    render_pred(os, *p.preds[0]);
    os << ')';
    return;
  case PredKind::And:
  case PredKind::Or:
  case PredKind::Implies: {
    const int s = pred_strength(p);
    const bool lp = pred_strength(*p.preds[0]) < s;
    const bool rp = pred_strength(*p.preds[1]) <= s;
    if (lp)
      os << '(';
    render_pred(os, *p.preds[0]);
    if (lp)
      os << ')';
    os << pred_op(p.kind);
    if (rp)
      os << '(';
    render_pred(os, *p.preds[1]);
    if (rp)
      os << ')';
    return;
  }
  default:
    render_expr(os, *p.exprs[0]);
    os << pred_op(p.kind);
    render_expr(os, *p.exprs[1]);
    return;
  }
}

} // namespace detail

inline std::string to_string(const ExprPtr &e) {
  std::ostringstream os;
  detail::render_expr(os, *e);
  return os.str();
}

inline std::string to_string(const PredPtr &p) {
  std::ostringstream os;
  detail::render_pred(os, *p);
  return os.str();
}

inline std::string to_string(const Subst &s) {
  if (s.is_skip())
    return "skip";
  std::string out;
  for (std::size_t i = 0; i < s.assignments.size(); ++i) {
    if (i)
      out += " || ";
    out += s.assignments[i].var + " := " + to_string(s.assignments[i].value);
  }
  return out;
}

inline std::string to_string(const Type &t, const AbstractSystem &sys) {
  auto carrier = [&](int c) {
    return c >= 0 && c < static_cast<int>(sys.sets.size()) ? sys.sets[c] : std::string("?");
  };
  switch (t.kind) {
  case TypeKind::Bool:
    return "BOOL";
  case TypeKind::Nat:
    return "NAT";
  case TypeKind::Elem:
    return carrier(t.carrier);
  case TypeKind::Set:
    return "POW(" + carrier(t.carrier) + ")";
  case TypeKind::NatSet:
    return "POW(NAT)";
  case TypeKind::BoolSet:
    return "POW(BOOL)";
  case TypeKind::PowSet:
    return "POW(POW(" + carrier(t.carrier) + "))";
  default:
    return "?";
  }
}

namespace detail {

inline void render_list(std::ostream &os, const std::vector<std::string> &items, const char *sep) {
  for (std::size_t i = 0; i < items.size(); ++i)
    os << (i ? sep : "") << items[i];
}

inline void render_subst_block(std::ostream &os, const Subst &s, const std::string &indent) {
  if (s.is_skip()) {
    os << indent << "skip\n";
    return;
  }
  for (std::size_t i = 0; i < s.assignments.size(); ++i) {
    os << indent << (i ? "|| " : "") << s.assignments[i].var << " := "
       << to_string(s.assignments[i].value) << '\n';
  }
}

inline void render_conjunct_block(std::ostream &os, const PredPtr &p, const std::string &indent) {
  // Only split a left-nested chain; any other shape prints on one line.
  auto cs = conjuncts(p);
  if (!same_pred(conjoin(cs), p)) {
    os << indent << to_string(p) << '\n';
    return;
  }
  for (std::size_t i = 0; i < cs.size(); ++i) {
    os << indent << (i ? "& " : "");
    const bool paren = pred_strength(*cs[i]) < 4;
    if (paren)
      os << '(';
    os << to_string(cs[i]);
    if (paren)
      os << ')';
    os << '\n';
  }
}

} // namespace detail

inline std::string render_event(const EventDef &ev) {
  std::ostringstream os;
  os << "  " << ev.name << " =\n";
  if (ev.is_select()) {
    os << "    SELECT\n";
  } else {
    os << "    ANY ";
    for (std::size_t i = 0; i < ev.params.size(); ++i)
      os << (i ? ", " : "") << ev.params[i].name;
    os << " WHERE\n";
  }
  detail::render_conjunct_block(os, ev.guard, "      ");
  os << "    THEN\n";
  detail::render_subst_block(os, ev.action, "      ");
  os << "    END";
  return os.str();
}

/// Source text for a system. Reparsing it yields a structurally identical tree.
inline std::string render_system(const AbstractSystem &sys) {
  std::ostringstream os;
  os << "SYSTEM " << sys.name << '\n';
  if (!sys.sets.empty()) {
    os << "SETS\n  ";
    detail::render_list(os, sys.sets, "; ");
    os << '\n';
  }
  if (!sys.constants.empty()) {
    os << "CONSTANTS\n  ";
    detail::render_list(os, sys.constants, ", ");
    os << '\n';
  }
  if (sys.properties && sys.properties->kind != PredKind::True) {
    os << "PROPERTIES\n";
    detail::render_conjunct_block(os, sys.properties, "  ");
  }
  if (!sys.variables.empty()) {
    os << "VARIABLES\n  ";
    detail::render_list(os, sys.variables, ", ");
    os << '\n';
  }
  if (sys.invariant && sys.invariant->kind != PredKind::True) {
    os << "INVARIANT\n";
    detail::render_conjunct_block(os, sys.invariant, "  ");
  }
  if (!sys.init.is_skip()) {
    os << "INITIALISATION\n";
    detail::render_subst_block(os, sys.init, "  ");
  }
  os << "EVENTS\n";
  for (std::size_t i = 0; i < sys.events.size(); ++i)
    os << render_event(sys.events[i]) << (i + 1 < sys.events.size() ? ";\n" : "\n");
  os << "END\n";
  return os.str();
}

} // namespace minibee
