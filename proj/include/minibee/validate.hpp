#pragma once

#include "minibee/ast.hpp"
#include "minibee/errors.hpp"
#include "minibee/parser.hpp"
#include "minibee/render.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace minibee {

namespace detail {

class Checker {
public:
  explicit Checker(const AbstractSystem &raw) : raw_(raw) {}

  AbstractSystem run() {
    declare_names();

    out_.name = raw_.name;
    out_.sets = raw_.sets;
    out_.constants = raw_.constants;
    out_.variables = raw_.variables;

    const_types_.assign(raw_.constants.size(), Type{});
    var_types_.assign(raw_.variables.size(), Type{});

    context_ = Context::Properties;
    infer_types(raw_.properties, Role::Constant);
    for (std::size_t i = 0; i < raw_.constants.size(); ++i)
      if (const_types_[i].kind == TypeKind::Unknown)
        throw TypeError("cannot infer the type of constant " + raw_.constants[i] +
                        "; add a PROPERTIES conjunct such as " + raw_.constants[i] + " : NAT");
    out_.properties = check_pred(raw_.properties);

    context_ = Context::Invariant;
    infer_types(raw_.invariant, Role::Variable);
    for (std::size_t i = 0; i < raw_.variables.size(); ++i)
      if (var_types_[i].kind == TypeKind::Unknown)
        throw TypeError("cannot infer the type of variable " + raw_.variables[i] +
                        "; add an INVARIANT conjunct such as " + raw_.variables[i] + " : NAT");
    out_.invariant = check_pred(raw_.invariant);

    context_ = Context::Init;
    out_.init = check_init(raw_.init);

    context_ = Context::Event;
    std::set<std::string> event_names;
    for (const auto &ev : raw_.events) {
      if (!event_names.insert(ev.name).second)
        throw DuplicateError("event " + ev.name + " is defined twice");
      out_.events.push_back(check_event(ev));
    }

    out_.variable_types = var_types_;
    out_.constant_types = const_types_;
    return out_;
  }

private:
  enum class Context { Properties, Invariant, Init, Event };
  enum class Role { Constant, Variable };

  void declare_names() {
    std::set<std::string> seen;
    auto add = [&](const std::string &n, const char *what) {
      if (!seen.insert(n).second)
        throw DuplicateError(std::string(what) + " name " + n + " is already declared");
    };
    for (const auto &s : raw_.sets)
      add(s, "set");
    for (const auto &c : raw_.constants)
      add(c, "constant");
    for (const auto &v : raw_.variables)
      add(v, "variable");
    global_names_ = std::move(seen);
  }

  int index_in(const std::vector<std::string> &v, const std::string &n) const {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] == n)
        return static_cast<int>(i);
    return -1;
  }

  // READER2 -> (carrier READER, index 2); longest carrier prefix wins.
  std::optional<std::pair<int, std::uint64_t>> element_literal(const std::string &n) const {
    std::optional<std::pair<int, std::uint64_t>> best;
    std::size_t best_len = 0;
    for (std::size_t c = 0; c < raw_.sets.size(); ++c) {
      const std::string &s = raw_.sets[c];
      if (n.size() <= s.size() || n.compare(0, s.size(), s) != 0 || s.size() < best_len)
        continue;
      const std::string_view digits(n.data() + s.size(), n.size() - s.size());
      if (digits.empty() || digits.front() == '0' || digits.size() > 9)
        continue;
      bool ok = true;
      for (char ch : digits)
        ok = ok && ch >= '0' && ch <= '9';
      if (!ok)
        continue;
      best = std::make_pair(static_cast<int>(c), std::stoull(std::string(digits)));
      best_len = s.size();
    }
    return best;
  }

  const char *context_name() const {
    switch (context_) {
    case Context::Properties:
      return "PROPERTIES";
    case Context::Invariant:
      return "INVARIANT";
    case Context::Init:
      return "INITIALISATION";
    default:
      return "an event";
    }
  }

  std::string type_name(Type t) const { return to_string(t, raw_); }

  // --- type inference from typing conjuncts ------------------------------

  std::optional<Type> probe_type(const ExprPtr &e) {
    try {
      return check_expr(e, true)->type;
    } catch (const Error &) {
      return std::nullopt;
    }
  }

  void infer_types(const PredPtr &p, Role role) {
    auto &names = role == Role::Constant ? raw_.constants : raw_.variables;
    auto &types = role == Role::Constant ? const_types_ : var_types_;
    const auto cs = conjuncts(p);
    bool progress = true;
    while (progress) {
      progress = false;
      for (const auto &c : cs) {
        if (c->exprs.size() != 2 || c->exprs[0]->kind != ExprKind::Ident)
          continue;
        const int idx = index_in(names, c->exprs[0]->name);
        if (idx < 0 || types[idx].kind != TypeKind::Unknown)
          continue;
        const auto rhs = probe_type(c->exprs[1]);
        if (!rhs)
          continue;
        std::optional<Type> t;
        if (c->kind == PredKind::In) {
          switch (rhs->kind) {
          case TypeKind::NatSet:
            t = Type::natural();
            break;
          case TypeKind::BoolSet:
            t = Type::boolean();
            break;
          case TypeKind::PowSet:
            t = Type::set(rhs->carrier);
            break;
          case TypeKind::Set:
            if (rhs->carrier >= 0)
              t = Type::element(rhs->carrier);
            break;
          default:
            break;
          }
        } else if (c->kind == PredKind::Subset && rhs->kind == TypeKind::Set && rhs->carrier >= 0) {
          t = Type::set(rhs->carrier);
        } else if (c->kind == PredKind::Eq && role == Role::Constant &&
                   (rhs->kind == TypeKind::Nat || rhs->kind == TypeKind::Bool ||
                    rhs->kind == TypeKind::Elem ||
                    (rhs->kind == TypeKind::Set && rhs->carrier >= 0))) {
          t = *rhs;
        }
        if (t) {
          types[idx] = *t;
          progress = true;
        }
      }
    }
  }

  // --- expressions -------------------------------------------------------

  static ExprPtr annotate(const Expr &src, std::vector<ExprPtr> args, Type t,
                          RefKind ref = RefKind::Unresolved, int slot = -1,
                          std::uint64_t number = 0) {
    auto e = std::make_shared<Expr>();
    e->kind = src.kind;
    e->name = src.name;
    e->number = src.kind == ExprKind::Ident ? number : src.number;
    e->args = std::move(args);
    e->type = t;
    e->ref = ref;
    e->slot = slot;
    return e;
  }

  /// Pins a still-polymorphic set expression (`{}` and operators over it) to
  /// a carrier.
  static ExprPtr pin_carrier(const ExprPtr &e, int carrier) {
    if (e->type.kind != TypeKind::Set || e->type.carrier >= 0)
      return e;
    std::vector<ExprPtr> args;
    for (const auto &a : e->args)
      args.push_back(pin_carrier(a, carrier));
    auto copy = std::make_shared<Expr>(*e);
    copy->args = std::move(args);
    copy->type.carrier = carrier;
    return copy;
  }

  // Unifies two set-typed operands; returns the common carrier (-1 if both open).
  int unify_sets(ExprPtr &a, ExprPtr &b, const char *what) const {
    if (a->type.kind != TypeKind::Set || b->type.kind != TypeKind::Set)
      throw TypeError(std::string(what) + " expects sets, got " + type_name(a->type) + " and " +
                      type_name(b->type));
    const int ca = a->type.carrier, cb = b->type.carrier;
    if (ca >= 0 && cb >= 0 && ca != cb)
      throw TypeError(std::string(what) + " mixes " + type_name(a->type) + " and " +
                      type_name(b->type));
    const int c = ca >= 0 ? ca : cb;
    if (c >= 0) {
      a = pin_carrier(a, c);
      b = pin_carrier(b, c);
    }
    return c;
  }

  ExprPtr check_ident(const Expr &e) {
    const std::string &n = e.name;
    for (std::size_t i = 0; i < params_.size(); ++i) {
      if (params_[i].first == n) {
        if (params_[i].second.kind == TypeKind::Unknown)
          throw TypeError("parameter " + n + " is used before its typing conjunct");
        return annotate(e, {}, params_[i].second, RefKind::Param, static_cast<int>(i));
      }
    }
    if (const int v = index_in(raw_.variables, n); v >= 0) {
      if (context_ == Context::Properties || context_ == Context::Init)
        throw ScopeError("variable " + n + " cannot be referenced in " + context_name());
      return annotate(e, {}, var_types_[v], RefKind::Variable, v);
    }
    if (const int c = index_in(raw_.constants, n); c >= 0)
      return annotate(e, {}, const_types_[c], RefKind::Constant, c);
    if (const int s = index_in(raw_.sets, n); s >= 0)
      return annotate(e, {}, Type::set(s), RefKind::Carrier, s);
    if (auto lit = element_literal(n))
      return annotate(e, {}, Type::element(lit->first), RefKind::Element, lit->first, lit->second);
    throw ScopeError("undeclared identifier " + n);
  }

  ExprPtr check_expr(const ExprPtr &ep, bool allow_type_sets = false) {
    const Expr &e = *ep;
    switch (e.kind) {
    case ExprKind::Ident:
      return check_ident(e);
    case ExprKind::NatLit:
      return annotate(e, {}, Type::natural());
    case ExprKind::BoolLit:
      return annotate(e, {}, Type::boolean());
    case ExprKind::EmptySet:
      return annotate(e, {}, Type::set(-1));
    case ExprKind::SetLit: {
      std::vector<ExprPtr> args;
      int carrier = -1;
      for (const auto &a : e.args) {
        auto c = check_expr(a);
        if (c->type.kind != TypeKind::Elem)
          throw TypeError("set literal element " + to_string(a) + " has type " +
                          type_name(c->type) + ", expected a carrier element");
        if (carrier >= 0 && carrier != c->type.carrier)
          throw TypeError("set literal mixes elements of different carriers");
        carrier = c->type.carrier;
        args.push_back(std::move(c));
      }
      return annotate(e, std::move(args), Type::set(carrier));
    }
    case ExprKind::Union:
    case ExprKind::Inter: {
      auto a = check_expr(e.args[0]);
      auto b = check_expr(e.args[1]);
      const int c = unify_sets(a, b, e.kind == ExprKind::Union ? "\\/" : "/\\");
      return annotate(e, {a, b}, Type::set(c));
    }
    case ExprKind::Minus: {
      auto a = check_expr(e.args[0]);
      auto b = check_expr(e.args[1]);
      if (a->type.kind == TypeKind::Nat && b->type.kind == TypeKind::Nat)
        return annotate(e, {a, b}, Type::natural());
      const int c = unify_sets(a, b, "-");
      return annotate(e, {a, b}, Type::set(c));
    }
    case ExprKind::Plus: {
      auto a = check_expr(e.args[0]);
      auto b = check_expr(e.args[1]);
      if (a->type.kind != TypeKind::Nat || b->type.kind != TypeKind::Nat)
        throw TypeError("+ expects naturals in " + to_string(ep));
      return annotate(e, {a, b}, Type::natural());
    }
    case ExprKind::Card: {
      auto a = check_expr(e.args[0]);
      if (a->type.kind != TypeKind::Set)
        throw TypeError("card applies to sets, not " + type_name(a->type) + " in " +
                        to_string(ep));
      return annotate(e, {a}, Type::natural());
    }
    case ExprKind::NatSet:
    case ExprKind::BoolSet:
    case ExprKind::PowSet: {
      if (!allow_type_sets)
        throw TypeError(to_string(ep) + " may only appear as the right operand of ':' or '/:'");
      if (e.kind == ExprKind::NatSet)
        return annotate(e, {}, Type{TypeKind::NatSet, -1});
      if (e.kind == ExprKind::BoolSet)
        return annotate(e, {}, Type{TypeKind::BoolSet, -1});
      const int c = index_in(raw_.sets, e.name);
      if (c < 0)
        throw ScopeError("undeclared carrier set " + e.name);
      return annotate(e, {}, Type{TypeKind::PowSet, c});
    }
    }
    throw TypeError("unsupported expression");
  }

  // --- predicates --------------------------------------------------------

  PredPtr check_pred(const PredPtr &pp) {
    const Pred &p = *pp;
    auto out = std::make_shared<Pred>();
    out->kind = p.kind;
    switch (p.kind) {
    case PredKind::True:
    case PredKind::False:
      return out;
    case PredKind::And:
    case PredKind::Or:
    case PredKind::Implies:
    case PredKind::Not:
      for (const auto &q : p.preds)
        out->preds.push_back(check_pred(q));
      return out;
    case PredKind::In:
    case PredKind::NotIn: {
      auto lhs = check_expr(p.exprs[0]);
      auto rhs = check_expr(p.exprs[1], true);
      const Type r = rhs->type;
      bool ok = false;
      if (r.kind == TypeKind::NatSet)
        ok = lhs->type.kind == TypeKind::Nat;
      else if (r.kind == TypeKind::BoolSet)
        ok = lhs->type.kind == TypeKind::Bool;
      else if (r.kind == TypeKind::PowSet) {
        ok = lhs->type.kind == TypeKind::Set &&
             (lhs->type.carrier < 0 || lhs->type.carrier == r.carrier);
        lhs = pin_carrier(lhs, r.carrier);
      } else if (r.kind == TypeKind::Set) {
        ok = lhs->type.kind == TypeKind::Elem &&
             (r.carrier < 0 || r.carrier == lhs->type.carrier);
        rhs = pin_carrier(rhs, lhs->type.carrier);
      }
      if (!ok)
        throw TypeError("membership " + to_string(pp) + ": " + type_name(lhs->type) +
                        " cannot belong to " + type_name(r));
      out->exprs = {lhs, rhs};
      return out;
    }
    case PredKind::Subset: {
      auto lhs = check_expr(p.exprs[0]);
      auto rhs = check_expr(p.exprs[1]);
      unify_sets(lhs, rhs, "<:");
      out->exprs = {lhs, rhs};
      return out;
    }
    case PredKind::Eq:
    case PredKind::Neq: {
      auto lhs = check_expr(p.exprs[0]);
      auto rhs = check_expr(p.exprs[1]);
      if (lhs->type.kind == TypeKind::Set || rhs->type.kind == TypeKind::Set) {
        unify_sets(lhs, rhs, "=");
      } else if (!(lhs->type == rhs->type)) {
        throw TypeError("comparison " + to_string(pp) + " mixes " + type_name(lhs->type) +
                        " and " + type_name(rhs->type));
      }
      out->exprs = {lhs, rhs};
      return out;
    }
    case PredKind::Lt:
    case PredKind::Le:
    case PredKind::Gt:
    case PredKind::Ge: {
      auto lhs = check_expr(p.exprs[0]);
      auto rhs = check_expr(p.exprs[1]);
      if (lhs->type.kind != TypeKind::Nat || rhs->type.kind != TypeKind::Nat)
        throw TypeError("ordering " + to_string(pp) + " expects naturals");
      out->exprs = {lhs, rhs};
      return out;
    }
    case PredKind::Exists:
      throw TypeError("existential quantification is not part of the source language");
    }
    return out;
  }

  // --- substitutions -----------------------------------------------------

  Subst check_assignments(const Subst &s, bool is_init) {
    Subst out;
    std::set<std::string> assigned;
    for (const auto &a : s.assignments) {
      const int v = index_in(raw_.variables, a.var);
      if (v < 0)
        throw ScopeError(a.var + " is not a declared variable and cannot be assigned");
      if (!assigned.insert(a.var).second) {
        if (is_init)
          throw InitError("variable " + a.var + " is initialised twice");
        throw DuplicateError("variable " + a.var + " is assigned twice in one parallel substitution");
      }
      auto rhs = check_expr(a.value);
      const Type want = var_types_[v];
      if (want.kind == TypeKind::Set && rhs->type.kind == TypeKind::Set &&
          (rhs->type.carrier < 0 || rhs->type.carrier == want.carrier)) {
        rhs = pin_carrier(rhs, want.carrier);
      } else if (!(rhs->type == want)) {
        throw TypeError("assignment " + a.var + " := " + to_string(a.value) + " gives " +
                        type_name(rhs->type) + " to a variable of type " + type_name(want));
      }
      out.assignments.push_back(Assignment{a.var, rhs, v});
    }
    return out;
  }

  Subst check_init(const Subst &s) {
    Subst out = check_assignments(s, true);
    for (const auto &v : raw_.variables) {
      bool found = false;
      for (const auto &a : out.assignments)
        found = found || a.var == v;
      if (!found)
        throw InitError("variable " + v + " is not initialised");
    }
    return out;
  }

  EventDef check_event(const EventDef &ev) {
    params_.clear();
    std::set<std::string> pnames;
    for (const auto &p : ev.params) {
      if (!pnames.insert(p.name).second)
        throw DuplicateError("parameter " + p.name + " of event " + ev.name + " is bound twice");
      if (global_names_.count(p.name))
        throw DuplicateError("parameter " + p.name + " of event " + ev.name +
                             " shadows a declared name");
      params_.emplace_back(p.name, Type{});
    }

    // Parameters are typed by the leading `p : SetExpr` conjuncts, in order.
    const auto raw_cs = conjuncts(ev.guard);
    std::vector<int> typing_conjunct(params_.size(), -1);
    for (std::size_t i = 0; i < raw_cs.size(); ++i) {
      const auto &c = raw_cs[i];
      if (c->kind != PredKind::In || c->exprs[0]->kind != ExprKind::Ident)
        break;
      int pi = -1;
      for (std::size_t k = 0; k < params_.size(); ++k)
        if (params_[k].first == c->exprs[0]->name)
          pi = static_cast<int>(k);
      if (pi < 0 || params_[pi].second.kind != TypeKind::Unknown)
        break;
      auto dom = check_expr(c->exprs[1]);
      if (dom->type.kind != TypeKind::Set || dom->type.carrier < 0)
        throw TypeError("parameter " + params_[pi].first + " of event " + ev.name +
                        " must be typed by a set of carrier elements, not " + to_string(c->exprs[1]));
      params_[pi].second = Type::element(dom->type.carrier);
      typing_conjunct[pi] = static_cast<int>(i);
    }
    for (std::size_t k = 0; k < params_.size(); ++k)
      if (params_[k].second.kind == TypeKind::Unknown)
        throw TypeError("parameter " + params_[k].first + " of event " + ev.name +
                        " needs a leading guard conjunct " + params_[k].first + " : SetExpr");

    EventDef out;
    out.name = ev.name;
    out.guard = check_pred(ev.guard);
    const auto cs = conjuncts(out.guard);
    for (std::size_t k = 0; k < params_.size(); ++k)
      out.params.push_back(Param{params_[k].first, cs[typing_conjunct[k]]->exprs[1]});
    out.action = check_assignments(ev.action, false);
    params_.clear();
    return out;
  }

  const AbstractSystem &raw_;
  AbstractSystem out_;
  std::set<std::string> global_names_;
  std::vector<Type> const_types_;
  std::vector<Type> var_types_;
  std::vector<std::pair<std::string, Type>> params_;
  Context context_ = Context::Properties;
};

} // namespace detail

/// Resolves names, infers types and checks well-formedness. The result carries
/// all annotations the evaluator relies on.
inline AbstractSystem validate(const AbstractSystem &raw) {
  detail::Checker checker(raw);
  return checker.run();
}

inline AbstractSystem parse_system(std::string_view text) {
  return validate(parse_unchecked(text));
}

} // namespace minibee
