#pragma once

#include "minibee/evaluator.hpp"

#include <deque>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace minibee {

enum class NodeClass : std::uint8_t { Live, Open, Deadlocked, InvariantViolated };

inline const char *to_string(NodeClass c) {
  switch (c) {
  case NodeClass::Live:
    return "live";
  case NodeClass::Open:
    return "open";
  case NodeClass::Deadlocked:
    return "deadlocked";
  case NodeClass::InvariantViolated:
    return "invariant_violated";
  }
  return "?";
}

struct ExploreLimits {
  std::optional<std::size_t> max_nodes;
  std::optional<std::size_t> max_depth;
};

struct Transition {
  int src = 0;
  int event = 0;
  Binding binding;
  int dst = 0;
};

/// A well-definedness failure met during exploration, tied to the state (and
/// event, when one was being fired) that provoked it. `event` is -1 for the
/// invariant itself.
struct Finding {
  int node = 0;
  int event = -1;
  std::string message;
};

struct StateGraph {
  Model model;
  std::vector<SysState> states;
  std::vector<NodeClass> classes;
  std::vector<std::size_t> depth;
  std::vector<Transition> transitions;
  std::vector<std::vector<int>> outgoing; // transition indices per node
  std::vector<Finding> findings;
  std::unordered_map<SysState, int, SysStateHash> index;
  int initial = 0;

  explicit StateGraph(Model m) : model(std::move(m)) {}

  const AbstractSystem &system() const { return model.system(); }
  std::size_t size() const { return states.size(); }

  std::optional<int> find(const SysState &s) const {
    const auto it = index.find(s);
    if (it == index.end())
      return std::nullopt;
    return it->second;
  }
};

namespace detail {

inline int add_node(StateGraph &g, SysState s, std::size_t depth) {
  const int id = static_cast<int>(g.states.size());
  g.index.emplace(s, id);
  g.states.push_back(std::move(s));
  g.classes.push_back(NodeClass::Open);
  g.depth.push_back(depth);
  g.outgoing.emplace_back();
  return id;
}

inline bool invariant_holds(const Model &m, const SysState &s, std::string *error = nullptr) {
  try {
    return eval_pred(m, *m.system().invariant, s);
  } catch (const WellDefinednessError &e) {
    if (error)
      *error = e.what();
    return false;
  }
}

} // namespace detail

/// Breadth-first exploration from the initial state. States failing the
/// invariant are recorded but not expanded; states at a limit stay open.
inline StateGraph explore(const Model &m, const ExploreLimits &limits = {}) {
  StateGraph g(m);
  const auto &sys = m.system();
  g.initial = detail::add_node(g, initial_state(m), 0);

  std::deque<int> queue{g.initial};
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();

    std::string inv_error;
    if (!detail::invariant_holds(m, g.states[id], &inv_error)) {
      g.classes[id] = NodeClass::InvariantViolated;
      if (!inv_error.empty())
        g.findings.push_back({id, -1, inv_error});
      continue;
    }
    if (limits.max_depth && g.depth[id] >= *limits.max_depth) {
      g.classes[id] = NodeClass::Open;
      continue;
    }

    bool complete = true;
    for (std::size_t e = 0; e < sys.events.size(); ++e) {
      const auto &ev = sys.events[e];
      std::vector<Binding> bindings;
      try {
        bindings = enabled_bindings(m, ev, g.states[id]);
      } catch (const WellDefinednessError &err) {
        g.findings.push_back({id, static_cast<int>(e), err.what()});
        complete = false;
        continue;
      }
      for (auto &b : bindings) {
        SysState post;
        try {
          post = apply_event(m, ev, b, g.states[id]);
        } catch (const WellDefinednessError &err) {
          g.findings.push_back({id, static_cast<int>(e), err.what()});
          complete = false;
          continue;
        }
        int dst;
        if (auto known = g.find(post)) {
          dst = *known;
        } else if (limits.max_nodes && g.states.size() >= *limits.max_nodes) {
          complete = false;
          continue;
        } else {
          dst = detail::add_node(g, std::move(post), g.depth[id] + 1);
          queue.push_back(dst);
        }
        g.outgoing[id].push_back(static_cast<int>(g.transitions.size()));
        g.transitions.push_back({id, static_cast<int>(e), std::move(b), dst});
      }
    }
    if (!complete)
      g.classes[id] = NodeClass::Open;
    else
      g.classes[id] = g.outgoing[id].empty() ? NodeClass::Deadlocked : NodeClass::Live;
  }
  return g;
}

inline StateGraph explore(const AbstractSystem &sys, const Scope &scope, const ExploreLimits &limits = {}) {
  return explore(Model(sys, scope), limits);
}

// --- coverage ------------------------------------------------------------------

struct CoverageReport {
  std::size_t deadlocked = 0;
  std::size_t invariant_violated = 0;
  std::size_t live = 0;
  std::size_t open = 0;
  std::size_t total = 0;
  std::vector<std::pair<std::string, std::size_t>> firings; // declaration order
  std::vector<std::string> covered;
  std::vector<std::string> uncovered;
};

inline CoverageReport coverage_from_counts(const AbstractSystem &sys, const std::vector<std::size_t> &counts) {
  CoverageReport r;
  for (std::size_t e = 0; e < sys.events.size(); ++e) {
    r.firings.emplace_back(sys.events[e].name, counts[e]);
    (counts[e] ? r.covered : r.uncovered).push_back(sys.events[e].name);
  }
  return r;
}

inline CoverageReport coverage_report(const StateGraph &g) {
  std::vector<std::size_t> counts(g.system().events.size(), 0);
  for (const auto &t : g.transitions)
    ++counts[t.event];
  CoverageReport r = coverage_from_counts(g.system(), counts);
  for (auto c : g.classes) {
    switch (c) {
    case NodeClass::Deadlocked:
      ++r.deadlocked;
      break;
    case NodeClass::InvariantViolated:
      ++r.invariant_violated;
      break;
    case NodeClass::Live:
      ++r.live;
      break;
    case NodeClass::Open:
      ++r.open;
      break;
    }
  }
  r.total = g.size();
  return r;
}

namespace detail {

inline std::string padded(const std::string &label, std::size_t width = 20) {
  return label.size() >= width ? label + " " : label + std::string(width - label.size(), ' ');
}

inline void render_operations(std::ostream &os, const CoverageReport &r) {
  os << "COVERED_OPERATIONS\n";
  for (const auto &[name, n] : r.firings)
    if (n)
      os << padded(name) << ':' << n << '\n';
  os << "UNCOVERED_OPERATIONS\n";
  for (const auto &name : r.uncovered)
    os << name << '\n';
}

} // namespace detail

/// NODES / COVERED_OPERATIONS / UNCOVERED_OPERATIONS blocks.
inline std::string render_coverage(const CoverageReport &r) {
  std::ostringstream os;
  os << "NODES\n";
  os << detail::padded("deadlocked") << ':' << r.deadlocked << '\n';
  os << detail::padded("invariant_violated") << ':' << r.invariant_violated << '\n';
  os << detail::padded("live") << ':' << r.live << '\n';
  os << detail::padded("open") << ':' << r.open << '\n';
  os << detail::padded("total") << ':' << r.total << '\n';
  detail::render_operations(os, r);
  return os.str();
}

// --- deadlock diagnosis ------------------------------------------------------------

/// Why one event is disabled: the first failing guard conjunct for the first
/// candidate binding, or the typing conjunct whose domain is empty.
struct DisabledReason {
  std::string event;
  std::optional<Binding> candidate;
  std::size_t conjunct_index = 0;
  std::string conjunct;
  std::string explanation;
};

struct DeadlockDiagnosis {
  int node = 0;
  std::string state;
  std::vector<DisabledReason> reasons;
};

inline DisabledReason explain_disabled(const Model &m, const EventDef &ev, const SysState &s) {
  const auto &sys = m.system();
  DisabledReason r;
  r.event = ev.name;
  const auto cs = conjuncts(ev.guard);

  Binding b;
  b.values.resize(ev.params.size());
  for (std::size_t i = 0; i < ev.params.size(); ++i) {
    Value dom;
    try {
      dom = eval_expr(m, *ev.params[i].domain, s, b);
    } catch (const WellDefinednessError &e) {
      r.explanation = e.what();
      return r;
    }
    if (dom.bits == 0) {
      for (std::size_t k = 0; k < cs.size(); ++k) {
        if (cs[k]->kind == PredKind::In && cs[k]->exprs[0]->kind == ExprKind::Ident &&
            cs[k]->exprs[0]->name == ev.params[i].name) {
          r.conjunct_index = k;
          r.conjunct = to_string(cs[k]);
          break;
        }
      }
      r.explanation = "no candidate for " + ev.params[i].name + ": " +
                      to_string(ev.params[i].domain) + " is empty";
      return r;
    }
    b.values[i] = Value::element(dom.carrier, static_cast<std::uint64_t>(std::countr_zero(dom.bits)) + 1);
  }
  if (!ev.params.empty())
    r.candidate = b;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    bool holds = false;
    try {
      holds = eval_pred(m, *cs[k], s, b);
    } catch (const WellDefinednessError &e) {
      r.conjunct_index = k;
      r.conjunct = to_string(cs[k]);
      r.explanation = e.what();
      return r;
    }
    if (!holds) {
      r.conjunct_index = k;
      r.conjunct = to_string(cs[k]);
      r.explanation = "guard conjunct is false";
      if (r.candidate)
        r.explanation += " for " + render_binding(sys, ev, *r.candidate);
      return r;
    }
  }
  r.explanation = "guard holds for the first candidate";
  return r;
}

inline std::vector<DeadlockDiagnosis> find_deadlocks(const StateGraph &g) {
  std::vector<DeadlockDiagnosis> out;
  for (std::size_t id = 0; id < g.size(); ++id) {
    if (g.classes[id] != NodeClass::Deadlocked)
      continue;
    DeadlockDiagnosis d;
    d.node = static_cast<int>(id);
    d.state = render_state(g.system(), g.states[id]);
    for (const auto &ev : g.system().events)
      d.reasons.push_back(explain_disabled(g.model, ev, g.states[id]));
    out.push_back(std::move(d));
  }
  return out;
}

inline std::string render_diagnosis(const DeadlockDiagnosis &d) {
  std::ostringstream os;
  os << "DEADLOCK node " << d.node << '\n' << "  state: " << d.state << '\n';
  for (const auto &r : d.reasons) {
    os << "  " << detail::padded(r.event) << "disabled";
    if (!r.conjunct.empty())
      os << " by conjunct " << r.conjunct_index << " `" << r.conjunct << "`";
    os << " (" << r.explanation << ")\n";
  }
  return os.str();
}

// --- invariant analysis ------------------------------------------------------------

struct InvariantFailure {
  int node = 0;
  std::size_t conjunct_index = 0;
  std::string conjunct;
};

/// Evaluates every top-level invariant conjunct in every node of the graph.
inline std::vector<InvariantFailure> check_invariant_pointwise(const StateGraph &g) {
  std::vector<InvariantFailure> out;
  const auto cs = conjuncts(g.system().invariant);
  for (std::size_t id = 0; id < g.size(); ++id) {
    for (std::size_t k = 0; k < cs.size(); ++k) {
      bool holds = false;
      try {
        holds = eval_pred(g.model, *cs[k], g.states[id]);
      } catch (const WellDefinednessError &) {
      }
      if (!holds)
        out.push_back({static_cast<int>(id), k, to_string(cs[k])});
    }
  }
  return out;
}

/// Truth value of each top-level invariant conjunct in one state.
inline std::vector<std::pair<std::string, bool>> invariant_conjunct_values(const Model &m, const SysState &s) {
  std::vector<std::pair<std::string, bool>> out;
  for (const auto &c : conjuncts(m.system().invariant)) {
    bool holds = false;
    try {
      holds = eval_pred(m, *c, s);
    } catch (const WellDefinednessError &) {
    }
    out.emplace_back(to_string(c), holds);
  }
  return out;
}

// --- constraint-based checking ----------------------------------------------------

struct CbcWitness {
  SysState state;
  Binding binding;
  std::optional<SysState> post; // absent when firing itself was ill-defined
  std::size_t conjunct_index = 0;
  std::string conjunct;
};

struct CbcResult {
  std::string event;
  std::optional<CbcWitness> violation;
  std::uint64_t states_examined = 0;
  std::uint64_t invariant_states = 0;
  std::uint64_t firings = 0;
};

inline constexpr std::uint64_t default_state_ceiling = 2'000'000;

inline void require_within_ceiling(const Model &m, std::uint64_t ceiling) {
  const auto n = typed_state_count(m);
  if (n > ceiling)
    throw StateSpaceTooLarge(std::to_string(n) + " well-typed states exceed the ceiling of " +
                             std::to_string(ceiling) + "; shrink the scope or nat_max");
}

/// Applies `event` from every invariant-satisfying well-typed state, reachable
/// or not, and reports the first post-state that breaks the invariant.
inline CbcResult constraint_based_check(const Model &m, const std::string &event,
                                        std::uint64_t ceiling = default_state_ceiling) {
  const auto &sys = m.system();
  const int ei = sys.event_index(event);
  if (ei < 0)
    throw ScopeError("unknown event " + event);
  require_within_ceiling(m, ceiling);
  const auto &ev = sys.events[ei];
  const auto cs = conjuncts(sys.invariant);

  CbcResult r;
  r.event = event;
  for_each_typed_state(m, [&](const SysState &s) {
    ++r.states_examined;
    if (!detail::invariant_holds(m, s))
      return true;
    ++r.invariant_states;
    std::vector<Binding> bindings;
    try {
      bindings = enabled_bindings(m, ev, s);
    } catch (const WellDefinednessError &e) {
      r.violation = CbcWitness{s, {}, std::nullopt, 0, e.what()};
      return false;
    }
    for (const auto &b : bindings) {
      ++r.firings;
      SysState post;
      try {
        post = apply_event(m, ev, b, s);
      } catch (const WellDefinednessError &e) {
        r.violation = CbcWitness{s, b, std::nullopt, 0, e.what()};
        return false;
      }
      for (std::size_t k = 0; k < cs.size(); ++k) {
        bool holds = false;
        try {
          holds = eval_pred(m, *cs[k], post);
        } catch (const WellDefinednessError &) {
        }
        if (!holds) {
          r.violation = CbcWitness{s, b, post, k, to_string(cs[k])};
          return false;
        }
      }
    }
    return true;
  });
  return r;
}

// --- dumps -----------------------------------------------------------------------

inline std::string render_binding_or_dash(const AbstractSystem &sys, const EventDef &ev, const Binding &b) {
  return b.empty() ? std::string("-") : render_binding(sys, ev, b);
}

/// One node per line (`class TAB state`), then one transition per line
/// (`src TAB event TAB binding TAB dst`). Node ids are line numbers from 0.
inline std::string dump_graph(const StateGraph &g) {
  const auto &sys = g.system();
  std::ostringstream os;
  for (std::size_t id = 0; id < g.size(); ++id)
    os << to_string(g.classes[id]) << '\t' << render_state(sys, g.states[id]) << '\n';
  for (const auto &t : g.transitions) {
    const auto &ev = sys.events[t.event];
    os << t.src << '\t' << ev.name << '\t' << render_binding_or_dash(sys, ev, t.binding) << '\t'
       << t.dst << '\n';
  }
  return os.str();
}

inline std::string dot_escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\')
      out += '\\';
    out += c;
  }
  return out;
}

inline std::string graph_to_dot(const StateGraph &g) {
  const auto &sys = g.system();
  std::ostringstream os;
  os << "digraph \"" << dot_escape(sys.name) << "\" {\n";
  os << "  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t id = 0; id < g.size(); ++id) {
    os << "  n" << id << " [label=\"" << dot_escape(render_state(sys, g.states[id])) << "\"";
    switch (g.classes[id]) {
    case NodeClass::Deadlocked:
      os << ", style=filled, fillcolor=orange";
      break;
    case NodeClass::InvariantViolated:
      os << ", style=filled, fillcolor=red";
      break;
    case NodeClass::Open:
      os << ", style=dashed";
      break;
    default:
      break;
    }
    if (static_cast<int>(id) == g.initial)
      os << ", penwidth=2";
    os << "];\n";
  }
  for (const auto &t : g.transitions) {
    const auto &ev = sys.events[t.event];
    os << "  n" << t.src << " -> n" << t.dst << " [label=\""
       << dot_escape(render_step(sys, ev, t.binding)) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

} // namespace minibee
