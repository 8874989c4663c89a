#pragma once

#include "minibee/ast.hpp"
#include "minibee/errors.hpp"
#include "minibee/render.hpp"
#include "minibee/scope.hpp"
#include "minibee/value.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <string>

namespace minibee {

/// A validated system instantiated at a finite scope. Everything the
/// evaluator needs (carrier sizes, constant values, natural bound) is resolved
/// once here.
class Model {
public:
  Model(AbstractSystem system, const Scope &scope)
      : sys_(std::make_shared<const AbstractSystem>(std::move(system))) {
    resolve(scope);
  }

  const AbstractSystem &system() const { return *sys_; }
  std::shared_ptr<const AbstractSystem> system_ptr() const { return sys_; }
  int card(int carrier) const { return cards_[carrier]; }
  const std::vector<int> &cards() const { return cards_; }
  std::uint64_t nat_max() const { return nat_max_; }

  const Value &constant(int i) const {
    if (!resolved_[i])
      throw UnresolvedConstant("constant " + sys_->constants[i] + " has no value");
    return constants_[i];
  }

private:
  void resolve(const Scope &scope);
  Value scope_value(int idx, const ScopeValue &v) const;

  std::shared_ptr<const AbstractSystem> sys_;
  std::vector<int> cards_;
  std::vector<Value> constants_;
  std::vector<bool> resolved_;
  std::uint64_t nat_max_ = 0;
};

// --- expressions and predicates --------------------------------------------

inline Value eval_expr(const Model &m, const Expr &e, const SysState &s, const Binding &b) {
  switch (e.kind) {
  case ExprKind::Ident:
    switch (e.ref) {
    case RefKind::Variable:
      return s.values[e.slot];
    case RefKind::Constant:
      return m.constant(e.slot);
    case RefKind::Param:
      return b.values[e.slot];
    case RefKind::Carrier:
      return Value::set(e.slot, full_mask(m.card(e.slot)));
    case RefKind::Element:
      if (e.number > static_cast<std::uint64_t>(m.card(e.slot)))
        throw WellDefinednessError("element " + e.name + " lies outside the scope of " +
                                   m.system().sets[e.slot]);
      return Value::element(e.slot, e.number);
    default:
      throw WellDefinednessError("unresolved identifier " + e.name);
    }
  case ExprKind::NatLit:
    return Value::natural(e.number);
  case ExprKind::BoolLit:
    return Value::boolean(e.number != 0);
  case ExprKind::EmptySet:
    return Value::set(e.type.carrier, 0);
  case ExprKind::SetLit: {
    std::uint64_t mask = 0;
    for (const auto &a : e.args)
      mask |= element_bit(eval_expr(m, *a, s, b).bits);
    return Value::set(e.type.carrier, mask);
  }
  case ExprKind::Union:
    return Value::set(e.type.carrier,
                      eval_expr(m, *e.args[0], s, b).bits | eval_expr(m, *e.args[1], s, b).bits);
  case ExprKind::Inter:
    return Value::set(e.type.carrier,
                      eval_expr(m, *e.args[0], s, b).bits & eval_expr(m, *e.args[1], s, b).bits);
  case ExprKind::Minus: {
    const Value l = eval_expr(m, *e.args[0], s, b);
    const Value r = eval_expr(m, *e.args[1], s, b);
    if (e.type.kind == TypeKind::Set)
      return Value::set(e.type.carrier, l.bits & ~r.bits);
    if (r.bits > l.bits)
      throw WellDefinednessError(to_string(std::make_shared<Expr>(e)) + " is negative (" +
                                 std::to_string(l.bits) + " - " + std::to_string(r.bits) + ")");
    return Value::natural(l.bits - r.bits);
  }
  case ExprKind::Plus:
    return Value::natural(eval_expr(m, *e.args[0], s, b).bits + eval_expr(m, *e.args[1], s, b).bits);
  case ExprKind::Card:
    return Value::natural(eval_expr(m, *e.args[0], s, b).size());
  case ExprKind::NatSet:
  case ExprKind::BoolSet:
  case ExprKind::PowSet:
    break;
  }
  throw WellDefinednessError("NAT, BOOL and POW(...) have no finite value");
}

inline Value eval_expr(const Model &m, const ExprPtr &e, const SysState &s, const Binding &b = {}) {
  return eval_expr(m, *e, s, b);
}

inline bool eval_pred(const Model &m, const Pred &p, const SysState &s, const Binding &b = {});

/// Calls `fn` for every candidate binding of `params` drawn from their typing
/// domains: carrier index ascending, first parameter outermost. Stops early
/// when `fn` returns false. Returns false if stopped.
inline bool for_each_candidate(const Model &m, const std::vector<Param> &params, const SysState &s,
                               const std::function<bool(const Binding &)> &fn) {
  Binding b;
  b.values.resize(params.size());
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == params.size())
      return fn(b);
    const Value dom = eval_expr(m, *params[i].domain, s, b);
    for (std::uint64_t bits = dom.bits; bits; bits &= bits - 1) {
      const auto index = static_cast<std::uint64_t>(std::countr_zero(bits)) + 1;
      b.values[i] = Value::element(dom.carrier, index);
      if (!rec(i + 1))
        return false;
    }
    return true;
  };
  return rec(0);
}

inline bool eval_pred(const Model &m, const Pred &p, const SysState &s, const Binding &b) {
  auto ex = [&](std::size_t i) { return eval_expr(m, *p.exprs[i], s, b); };
  switch (p.kind) {
  case PredKind::True:
    return true;
  case PredKind::False:
    return false;
  case PredKind::And:
    return eval_pred(m, *p.preds[0], s, b) && eval_pred(m, *p.preds[1], s, b);
  case PredKind::Or:
    return eval_pred(m, *p.preds[0], s, b) || eval_pred(m, *p.preds[1], s, b);
  case PredKind::Implies:
    return !eval_pred(m, *p.preds[0], s, b) || eval_pred(m, *p.preds[1], s, b);
  case PredKind::Not:
    return !eval_pred(m, *p.preds[0], s, b);
  case PredKind::In:
  case PredKind::NotIn: {
    bool member = true;
    const ExprKind rk = p.exprs[1]->kind;
    if (rk == ExprKind::NatSet || rk == ExprKind::BoolSet || rk == ExprKind::PowSet) {
      ex(0); // typing membership; still surfaces ill-definedness of the operand
    } else {
      member = ex(1).contains(ex(0).bits);
    }
    return p.kind == PredKind::In ? member : !member;
  }
  case PredKind::Subset: {
    const auto l = ex(0).bits;
    return (l & ~ex(1).bits) == 0;
  }
  case PredKind::Eq:
    return ex(0) == ex(1);
  case PredKind::Neq:
    return !(ex(0) == ex(1));
  case PredKind::Lt:
    return ex(0).bits < ex(1).bits;
  case PredKind::Le:
    return ex(0).bits <= ex(1).bits;
  case PredKind::Gt:
    return ex(0).bits > ex(1).bits;
  case PredKind::Ge:
    return ex(0).bits >= ex(1).bits;
  case PredKind::Exists: {
    bool found = false;
    for_each_candidate(m, p.params, s, [&](const Binding &inner) {
      found = eval_pred(m, *p.preds[0], s, inner);
      return !found;
    });
    return found;
  }
  }
  return false;
}

inline bool eval_pred(const Model &m, const PredPtr &p, const SysState &s, const Binding &b = {}) {
  return eval_pred(m, *p, s, b);
}

// --- events ------------------------------------------------------------------

/// Bindings under which the event's guard holds, in enumeration order. Empty
/// means the event is disabled.
inline std::vector<Binding> enabled_bindings(const Model &m, const EventDef &ev, const SysState &s) {
  std::vector<Binding> out;
  for_each_candidate(m, ev.params, s, [&](const Binding &b) {
    if (eval_pred(m, *ev.guard, s, b))
      out.push_back(b);
    return true;
  });
  return out;
}

inline bool is_enabled(const Model &m, const EventDef &ev, const SysState &s) {
  bool found = false;
  for_each_candidate(m, ev.params, s, [&](const Binding &b) {
    found = eval_pred(m, *ev.guard, s, b);
    return !found;
  });
  return found;
}

/// Simultaneous assignment: every right-hand side is read in the pre-state.
inline SysState apply_subst(const Model &m, const Subst &sub, const SysState &s, const Binding &b) {
  std::vector<Value> rhs;
  rhs.reserve(sub.assignments.size());
  for (const auto &a : sub.assignments)
    rhs.push_back(eval_expr(m, *a.value, s, b));
  SysState out = s;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    const auto &a = sub.assignments[i];
    Value v = rhs[i];
    v.carrier = m.system().variable_types[a.slot].carrier; // pins `{}`
    out.values[a.slot] = v;
  }
  return out;
}

inline SysState apply_event(const Model &m, const EventDef &ev, const Binding &b, const SysState &s) {
  return apply_subst(m, ev.action, s, b);
}

inline SysState initial_state(const Model &m) {
  const auto &sys = m.system();
  SysState empty;
  empty.values.resize(sys.variables.size());
  return apply_subst(m, sys.init, empty, {});
}

inline SysState initial_state(const AbstractSystem &sys, const Scope &scope) {
  return initial_state(Model(sys, scope));
}

// --- canonical rendering -----------------------------------------------------

inline std::string render_value(const AbstractSystem &sys, const Value &v) {
  auto carrier = [&](int c) {
    return c >= 0 && c < static_cast<int>(sys.sets.size()) ? sys.sets[c] : std::string("?");
  };
  switch (v.kind) {
  case ValueKind::Bool:
    return v.bits ? "TRUE" : "FALSE";
  case ValueKind::Nat:
    return std::to_string(v.bits);
  case ValueKind::Elem:
    return carrier(v.carrier) + std::to_string(v.bits);
  case ValueKind::Set: {
    std::string out = "{";
    bool first = true;
    for (std::uint64_t bits = v.bits; bits; bits &= bits - 1) {
      if (!first)
        out += ',';
      first = false;
      out += carrier(v.carrier) + std::to_string(std::countr_zero(bits) + 1);
    }
    return out + "}";
  }
  }
  return "?";
}

/// `var1={READER1,READER2}; var2=0` in declaration order.
inline std::string render_state(const AbstractSystem &sys, const SysState &s) {
  std::string out;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (i)
      out += "; ";
    out += sys.variables[i] + "=" + render_value(sys, s.values[i]);
  }
  return out;
}

inline std::string render_binding(const AbstractSystem &sys, const EventDef &ev, const Binding &b) {
  std::string out;
  for (std::size_t i = 0; i < b.values.size(); ++i) {
    if (i)
      out += ",";
    out += ev.params[i].name + "=" + render_value(sys, b.values[i]);
  }
  return out;
}

/// `event(rr=READER1)`, or just `event` for a SELECT event.
inline std::string render_step(const AbstractSystem &sys, const EventDef &ev, const Binding &b) {
  if (b.empty())
    return ev.name;
  return ev.name + "(" + render_binding(sys, ev, b) + ")";
}

// --- typed state space ---------------------------------------------------------

inline std::uint64_t domain_size(const Model &m, const Type &t) {
  switch (t.kind) {
  case TypeKind::Bool:
    return 2;
  case TypeKind::Nat:
    return m.nat_max() + 1;
  case TypeKind::Elem:
    return static_cast<std::uint64_t>(m.card(t.carrier));
  case TypeKind::Set:
    return m.card(t.carrier) >= 64 ? std::numeric_limits<std::uint64_t>::max()
                                   : std::uint64_t{1} << m.card(t.carrier);
  default:
    return 0;
  }
}

/// Number of well-typed states, saturating at the uint64 maximum.
inline std::uint64_t typed_state_count(const Model &m) {
  std::uint64_t total = 1;
  for (const auto &t : m.system().variable_types) {
    const std::uint64_t d = domain_size(m, t);
    if (d == 0)
      return 0;
    if (total > std::numeric_limits<std::uint64_t>::max() / d)
      return std::numeric_limits<std::uint64_t>::max();
    total *= d;
  }
  return total;
}

/// Visits every well-typed state in ascending canonical order: the first
/// variable is the most significant digit, sets ordered by bitmask. Stops when
/// `fn` returns false.
inline void for_each_typed_state(const Model &m, const std::function<bool(const SysState &)> &fn) {
  const auto &types = m.system().variable_types;
  std::vector<std::uint64_t> sizes;
  for (const auto &t : types)
    sizes.push_back(domain_size(m, t));
  for (auto d : sizes)
    if (d == 0)
      return;
  auto value_at = [&](std::size_t i, std::uint64_t digit) {
    const Type &t = types[i];
    switch (t.kind) {
    case TypeKind::Bool:
      return Value::boolean(digit != 0);
    case TypeKind::Elem:
      return Value::element(t.carrier, digit + 1);
    case TypeKind::Set:
      return Value::set(t.carrier, digit);
    default:
      return Value::natural(digit);
    }
  };
  std::vector<std::uint64_t> digits(types.size(), 0);
  SysState s;
  for (std::size_t i = 0; i < types.size(); ++i)
    s.values.push_back(value_at(i, 0));
  for (;;) {
    if (!fn(s))
      return;
    std::size_t i = types.size();
    for (;;) {
      if (i == 0)
        return;
      --i;
      if (++digits[i] < sizes[i]) {
        s.values[i] = value_at(i, digits[i]);
        break;
      }
      digits[i] = 0;
      s.values[i] = value_at(i, 0);
    }
  }
}

// --- scope resolution ----------------------------------------------------------

inline Value Model::scope_value(int idx, const ScopeValue &v) const {
  const auto &sys = *sys_;
  const Type t = sys.constant_types[idx];
  const std::string &name = sys.constants[idx];
  auto parse_elem = [&](const std::string &s) -> std::uint64_t {
    const std::string &carrier = sys.sets[t.carrier];
    if (s.size() <= carrier.size() || s.compare(0, carrier.size(), carrier) != 0)
      throw ScopeFileError("value " + s + " of constant " + name + " is not an element of " + carrier);
    const auto index = std::stoull(s.substr(carrier.size()));
    if (index < 1 || index > static_cast<std::uint64_t>(cards_[t.carrier]))
      throw ScopeFileError("element " + s + " lies outside the scope of " + carrier);
    return index;
  };
  try {
    if (t.kind == TypeKind::Nat && std::holds_alternative<std::uint64_t>(v))
      return Value::natural(std::get<std::uint64_t>(v));
    if (t.kind == TypeKind::Bool && std::holds_alternative<bool>(v))
      return Value::boolean(std::get<bool>(v));
    if (t.kind == TypeKind::Elem && std::holds_alternative<std::string>(v))
      return Value::element(t.carrier, parse_elem(std::get<std::string>(v)));
    if (t.kind == TypeKind::Set && std::holds_alternative<std::vector<std::string>>(v)) {
      std::uint64_t mask = 0;
      for (const auto &e : std::get<std::vector<std::string>>(v))
        mask |= element_bit(parse_elem(e));
      return Value::set(t.carrier, mask);
    }
  } catch (const std::invalid_argument &) {
  } catch (const std::out_of_range &) {
  }
  throw ScopeFileError("scope value for constant " + name + " does not match its type " +
                       to_string(t, sys));
}

inline void Model::resolve(const Scope &scope) {
  const auto &sys = *sys_;
  for (const auto &set : sys.sets) {
    const auto it = scope.set_cards.find(set);
    if (it == scope.set_cards.end())
      throw ScopeFileError("scope gives no cardinality for carrier set " + set);
    if (it->second < 1 || it->second > 64)
      throw ScopeFileError("cardinality of " + set + " must lie in 1..64");
    cards_.push_back(it->second);
  }

  constants_.assign(sys.constants.size(), Value{});
  resolved_.assign(sys.constants.size(), false);
  std::vector<bool> from_scope(sys.constants.size(), false);
  for (std::size_t i = 0; i < sys.constants.size(); ++i) {
    const auto it = scope.constant_values.find(sys.constants[i]);
    if (it != scope.constant_values.end()) {
      constants_[i] = scope_value(static_cast<int>(i), it->second);
      resolved_[i] = from_scope[i] = true;
    }
  }

  // Remaining constants take their value from defining `c = e` conjuncts.
  const auto props = conjuncts(sys.properties);
  auto defined_constant = [&](const PredPtr &c, int side) -> int {
    if (c->kind != PredKind::Eq)
      return -1;
    const auto &e = c->exprs[side];
    return e->kind == ExprKind::Ident && e->ref == RefKind::Constant ? e->slot : -1;
  };
  const SysState no_state;
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto &c : props) {
      for (int side = 0; side < 2; ++side) {
        const int k = defined_constant(c, side);
        if (k < 0 || resolved_[k])
          continue;
        try {
          Value v = eval_expr(*this, *c->exprs[1 - side], no_state, {});
          v.carrier = sys.constant_types[k].carrier;
          constants_[k] = v;
          resolved_[k] = true;
          progress = true;
        } catch (const UnresolvedConstant &) {
        }
      }
    }
  }
  for (std::size_t i = 0; i < sys.constants.size(); ++i)
    if (!resolved_[i])
      throw UnresolvedConstant("constant " + sys.constants[i] +
                               " has no value; define it in PROPERTIES or in the scope file");

  // Scope values override defining conjuncts; every other property must hold.
  for (const auto &c : props) {
    const int l = defined_constant(c, 0), r = defined_constant(c, 1);
    if ((l >= 0 && from_scope[l]) || (r >= 0 && from_scope[r]))
      continue;
    if (!eval_pred(*this, *c, no_state, {}))
      throw PropertiesViolated("property " + to_string(c) + " does not hold at this scope");
  }

  if (scope.nat_max) {
    nat_max_ = *scope.nat_max;
  } else {
    nat_max_ = 1;
    for (int c : cards_)
      nat_max_ = std::max<std::uint64_t>(nat_max_, static_cast<std::uint64_t>(c));
    for (std::size_t i = 0; i < constants_.size(); ++i)
      if (sys.constant_types[i].kind == TypeKind::Nat)
        nat_max_ = std::max(nat_max_, constants_[i].bits);
  }
}

} // namespace minibee
