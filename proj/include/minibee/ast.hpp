#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace minibee {

enum class TypeKind : std::uint8_t {
  Unknown,
  Bool,
  Nat,
  Elem,    // element of a carrier set
  Set,     // subset of a carrier set; carrier -1 is the still-polymorphic `{}`
  NatSet,  // NAT, only as the right operand of `:`
  BoolSet, // BOOL, likewise
  PowSet,  // POW(C), likewise
};

struct Type {
  TypeKind kind = TypeKind::Unknown;
  int carrier = -1;

  static Type boolean() { return {TypeKind::Bool, -1}; }
  static Type natural() { return {TypeKind::Nat, -1}; }
  static Type element(int c) { return {TypeKind::Elem, c}; }
  static Type set(int c) { return {TypeKind::Set, c}; }

  bool operator==(const Type &) const = default;
};

enum class ExprKind : std::uint8_t {
  Ident,
  NatLit,
  BoolLit,
  EmptySet,
  SetLit,
  Union,
  Inter,
  Minus, // set difference or natural subtraction, resolved by type
  Plus,
  Card,
  NatSet,
  BoolSet,
  PowSet,
};

/// What an identifier resolved to during validation.
enum class RefKind : std::uint8_t { Unresolved, Variable, Constant, Param, Carrier, Element };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind = ExprKind::Ident;
  std::string name;         // identifier, or the carrier of POW(C)
  std::uint64_t number = 0; // literal payload
  std::vector<ExprPtr> args;

  // Annotations written by validation; not part of structural identity.
  Type type;
  RefKind ref = RefKind::Unresolved;
  int slot = -1;
};

enum class PredKind : std::uint8_t {
  True,
  False,
  And,
  Or,
  Implies,
  Not,
  In,
  NotIn,
  Subset,
  Eq,
  Neq,
  Lt,
  Le,
  Gt,
  Ge,
  Exists, // never parsed; built for the deadlock-freeness obligation
};

struct Param {
  std::string name;
  ExprPtr domain; // the typing conjunct's right operand
};

struct Pred;
using PredPtr = std::shared_ptr<const Pred>;

struct Pred {
  PredKind kind = PredKind::True;
  std::vector<PredPtr> preds;
  std::vector<ExprPtr> exprs;
  std::vector<Param> params; // Exists only
};

struct Assignment {
  std::string var;
  ExprPtr value;
  int slot = -1; // variable index, filled by validation
};

/// Parallel composition of simple assignments; empty means `skip`.
struct Subst {
  std::vector<Assignment> assignments;

  bool is_skip() const { return assignments.empty(); }
};

struct EventDef {
  std::string name;
  std::vector<Param> params; // empty: SELECT form
  PredPtr guard;
  Subst action;

  bool is_select() const { return params.empty(); }
};

struct AbstractSystem {
  std::string name;
  std::vector<std::string> sets;
  std::vector<std::string> constants;
  PredPtr properties;
  std::vector<std::string> variables;
  PredPtr invariant;
  Subst init;
  std::vector<EventDef> events;

  // Derived by validation.
  std::vector<Type> variable_types;
  std::vector<Type> constant_types;

  int set_index(const std::string &n) const { return index_of(sets, n); }
  int variable_index(const std::string &n) const { return index_of(variables, n); }
  int constant_index(const std::string &n) const { return index_of(constants, n); }
  int event_index(const std::string &n) const {
    for (std::size_t i = 0; i < events.size(); ++i)
      if (events[i].name == n)
        return static_cast<int>(i);
    return -1;
  }

private:
  static int index_of(const std::vector<std::string> &v, const std::string &n) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] == n)
        return static_cast<int>(i);
    return -1;
  }
};

// --- construction helpers -------------------------------------------------

inline ExprPtr make_expr(ExprKind k, std::vector<ExprPtr> args = {}, std::string name = {},
                         std::uint64_t number = 0) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->args = std::move(args);
  e->name = std::move(name);
  e->number = number;
  return e;
}

inline ExprPtr make_ident(std::string name) { return make_expr(ExprKind::Ident, {}, std::move(name)); }
inline ExprPtr make_nat(std::uint64_t n) { return make_expr(ExprKind::NatLit, {}, {}, n); }

inline PredPtr make_pred(PredKind k, std::vector<PredPtr> preds = {}, std::vector<ExprPtr> exprs = {}) {
  auto p = std::make_shared<Pred>();
  p->kind = k;
  p->preds = std::move(preds);
  p->exprs = std::move(exprs);
  return p;
}

inline PredPtr make_true() { return make_pred(PredKind::True); }

/// Top-level conjuncts of a predicate, left to right.
inline void collect_conjuncts(const PredPtr &p, std::vector<PredPtr> &out) {
  if (p && p->kind == PredKind::And) {
    collect_conjuncts(p->preds[0], out);
    collect_conjuncts(p->preds[1], out);
  } else if (p) {
    out.push_back(p);
  }
}

inline std::vector<PredPtr> conjuncts(const PredPtr &p) {
  std::vector<PredPtr> out;
  collect_conjuncts(p, out);
  return out;
}

/// Left-nested conjunction; `true` for an empty list.
inline PredPtr conjoin(const std::vector<PredPtr> &ps) {
  if (ps.empty())
    return make_true();
  PredPtr acc = ps.front();
  for (std::size_t i = 1; i < ps.size(); ++i)
    acc = make_pred(PredKind::And, {acc, ps[i]});
  return acc;
}

// --- structural identity (syntax only, annotations ignored) ----------------

inline bool same_expr(const ExprPtr &a, const ExprPtr &b);
inline bool same_pred(const PredPtr &a, const PredPtr &b);

inline bool same_expr(const ExprPtr &a, const ExprPtr &b) {
  if (!a || !b)
    return !a && !b;
  if (a->kind != b->kind || a->name != b->name || a->number != b->number ||
      a->args.size() != b->args.size())
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!same_expr(a->args[i], b->args[i]))
      return false;
  return true;
}

inline bool same_params(const std::vector<Param> &a, const std::vector<Param> &b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || !same_expr(a[i].domain, b[i].domain))
      return false;
  return true;
}

inline bool same_pred(const PredPtr &a, const PredPtr &b) {
  if (!a || !b)
    return !a && !b;
  if (a->kind != b->kind || a->preds.size() != b->preds.size() ||
      a->exprs.size() != b->exprs.size() || !same_params(a->params, b->params))
    return false;
  for (std::size_t i = 0; i < a->preds.size(); ++i)
    if (!same_pred(a->preds[i], b->preds[i]))
      return false;
  for (std::size_t i = 0; i < a->exprs.size(); ++i)
    if (!same_expr(a->exprs[i], b->exprs[i]))
      return false;
  return true;
}

inline bool same_subst(const Subst &a, const Subst &b) {
  if (a.assignments.size() != b.assignments.size())
    return false;
  for (std::size_t i = 0; i < a.assignments.size(); ++i)
    if (a.assignments[i].var != b.assignments[i].var ||
        !same_expr(a.assignments[i].value, b.assignments[i].value))
      return false;
  return true;
}

inline bool same_event(const EventDef &a, const EventDef &b) {
  return a.name == b.name && same_params(a.params, b.params) && same_pred(a.guard, b.guard) &&
         same_subst(a.action, b.action);
}

inline bool same_system(const AbstractSystem &a, const AbstractSystem &b) {
  if (a.name != b.name || a.sets != b.sets || a.constants != b.constants ||
      a.variables != b.variables || a.events.size() != b.events.size())
    return false;
  if (!same_pred(a.properties, b.properties) || !same_pred(a.invariant, b.invariant) ||
      !same_subst(a.init, b.init))
    return false;
  for (std::size_t i = 0; i < a.events.size(); ++i)
    if (!same_event(a.events[i], b.events[i]))
      return false;
  return true;
}

} // namespace minibee
