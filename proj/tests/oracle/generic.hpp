#pragma once

// Recursive depth-first enumeration over the evaluator's successor relation.
// Shares the evaluator with the explorer but none of its queueing, indexing
// or classification code.

#include "minibee/evaluator.hpp"

#include <set>
#include <string>

namespace oracle {

struct GenericExploration {
  std::set<std::string> states;
  std::set<std::string> deadlocked;
  std::set<std::string> violated;
};

namespace detail {

inline void generic_dfs(const minibee::Model &m, const minibee::SysState &s, GenericExploration &x) {
  const auto &sys = m.system();
  const std::string text = minibee::render_state(sys, s);
  if (!x.states.insert(text).second)
    return;
  if (!minibee::eval_pred(m, sys.invariant, s)) {
    x.violated.insert(text);
    return;
  }
  bool any = false;
  for (const auto &ev : sys.events) {
    for (const auto &b : minibee::enabled_bindings(m, ev, s)) {
      any = true;
      generic_dfs(m, minibee::apply_event(m, ev, b, s), x);
    }
  }
  if (!any)
    x.deadlocked.insert(text);
}

} // namespace detail

inline GenericExploration generic_explore(const minibee::Model &m) {
  GenericExploration x;
  detail::generic_dfs(m, minibee::initial_state(m), x);
  return x;
}

} // namespace oracle
