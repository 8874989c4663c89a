#pragma once

#include "minibee/ast.hpp"
#include "minibee/errors.hpp"
#include "minibee/render.hpp"
#include "minibee/validate.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>

namespace minibee {

namespace detail {

inline void append_unique(std::vector<std::string> &into, const std::vector<std::string> &from) {
  for (const auto &n : from)
    if (std::find(into.begin(), into.end(), n) == into.end())
      into.push_back(n);
}

inline PredPtr conjoin_nontrivial(const PredPtr &a, const PredPtr &b) {
  const bool ta = !a || a->kind == PredKind::True;
  const bool tb = !b || b->kind == PredKind::True;
  if (ta)
    return tb ? make_true() : b;
  if (tb)
    return a;
  // Keep the result a flat left-nested chain of the conjuncts of both sides.
  auto cs = conjuncts(a);
  for (const auto &c : conjuncts(b))
    cs.push_back(c);
  return conjoin(cs);
}

} // namespace detail

/// Parallel composition: signatures and variables are united by name,
/// invariants conjoined, initialisations run in parallel (a shared variable is
/// initialised once) and the name-disjoint event sets concatenated.
inline AbstractSystem compose(const AbstractSystem &s1, const AbstractSystem &s2,
                              std::string name = {}) {
  for (const auto &e : s2.events)
    if (s1.event_index(e.name) >= 0)
      throw EventClash("event " + e.name + " is defined in both " + s1.name + " and " + s2.name);

  for (std::size_t i = 0; i < s2.variables.size(); ++i) {
    const int j = s1.variable_index(s2.variables[i]);
    if (j < 0)
      continue;
    const auto t1 = to_string(s1.variable_types[j], s1);
    const auto t2 = to_string(s2.variable_types[i], s2);
    if (t1 != t2)
      throw TypeClash("shared variable " + s2.variables[i] + " has type " + t1 + " in " + s1.name +
                      " but " + t2 + " in " + s2.name);
  }
  for (std::size_t i = 0; i < s2.constants.size(); ++i) {
    const int j = s1.constant_index(s2.constants[i]);
    if (j < 0)
      continue;
    const auto t1 = to_string(s1.constant_types[j], s1);
    const auto t2 = to_string(s2.constant_types[i], s2);
    if (t1 != t2)
      throw TypeClash("shared constant " + s2.constants[i] + " has type " + t1 + " in " + s1.name +
                      " but " + t2 + " in " + s2.name);
  }

  AbstractSystem raw;
  raw.name = name.empty() ? s1.name + "_" + s2.name : std::move(name);
  raw.sets = s1.sets;
  detail::append_unique(raw.sets, s2.sets);
  raw.constants = s1.constants;
  detail::append_unique(raw.constants, s2.constants);
  raw.properties = detail::conjoin_nontrivial(s1.properties, s2.properties);
  raw.variables = s1.variables;
  detail::append_unique(raw.variables, s2.variables);
  raw.invariant = detail::conjoin_nontrivial(s1.invariant, s2.invariant);

  raw.init = s1.init;
  for (const auto &a : s2.init.assignments) {
    const Assignment *prior = nullptr;
    for (const auto &b : s1.init.assignments)
      if (b.var == a.var)
        prior = &b;
    if (!prior) {
      raw.init.assignments.push_back(a);
    } else if (!same_expr(prior->value, a.value)) {
      throw SharedInitConflict("shared variable " + a.var + " is initialised to " +
                               to_string(prior->value) + " in " + s1.name + " but to " +
                               to_string(a.value) + " in " + s2.name);
    }
  }

  raw.events = s1.events;
  raw.events.insert(raw.events.end(), s2.events.begin(), s2.events.end());
  return validate(raw);
}

/// Left fold of `compose` over a nonempty list.
inline AbstractSystem compose_all(std::span<const AbstractSystem> systems, std::string name = {}) {
  if (systems.empty())
    throw std::invalid_argument("compose_all needs at least one system");
  AbstractSystem acc = systems.front();
  for (std::size_t i = 1; i < systems.size(); ++i)
    acc = compose(acc, systems[i], i + 1 == systems.size() ? name : std::string{});
  if (systems.size() == 1 && !name.empty())
    acc.name = std::move(name);
  return acc;
}

} // namespace minibee
