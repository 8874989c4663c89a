#pragma once

#include "minibee/evaluator.hpp"
#include "minibee/explorer.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

namespace minibee {

/// 64-bit linear congruential generator (Knuth's MMIX constants):
///   state' = state * 6364136223846793005 + 1442695040888963407 (mod 2^64)
/// and each draw yields the high 31 bits, state' >> 33. The seed is the
/// initial state. Fixed so animation logs are portable across builds.
class Lcg {
public:
  static constexpr std::uint64_t multiplier = 6364136223846793005ull;
  static constexpr std::uint64_t increment = 1442695040888963407ull;

  explicit Lcg(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ = state_ * multiplier + increment;
    return state_ >> 33;
  }

private:
  std::uint64_t state_;
};

/// One enabled (event, binding) pair.
struct Choice {
  int event = 0;
  Binding binding;

  bool operator==(const Choice &) const = default;
};

/// Every enabled (event, binding) pair: events in declaration order, bindings
/// in enumeration order. Empty exactly when the state is a deadlock.
inline std::vector<Choice> all_options(const Model &m, const SysState &s) {
  std::vector<Choice> out;
  const auto &events = m.system().events;
  for (std::size_t e = 0; e < events.size(); ++e)
    for (auto &b : enabled_bindings(m, events[e], s))
      out.push_back({static_cast<int>(e), std::move(b)});
  return out;
}

struct StepEdge {
  SysState from;
  int event = 0;
  SysState to;

  bool operator==(const StepEdge &) const = default;
};

/// States in first-visit order, with set semantics.
class VisitedStates {
public:
  bool insert(const SysState &s) {
    if (!seen_.insert(s).second)
      return false;
    order_.push_back(s);
    return true;
  }
  bool contains(const SysState &s) const { return seen_.count(s) > 0; }
  std::size_t size() const { return order_.size(); }
  const std::vector<SysState> &states() const { return order_; }

private:
  std::unordered_set<SysState, SysStateHash> seen_;
  std::vector<SysState> order_;
};

enum class Termination : std::uint8_t { StepBudget, Deadlock };

inline const char *to_string(Termination t) {
  return t == Termination::StepBudget ? "step-budget" : "deadlock";
}

struct AnimationStep {
  Choice choice;
  SysState post;
};

struct AnimationLog {
  std::uint64_t seed = 0;
  SysState initial;
  std::vector<AnimationStep> steps;
  VisitedStates visited;
  Termination terminated = Termination::StepBudget;

  std::vector<StepEdge> edges() const {
    std::vector<StepEdge> out;
    const SysState *prev = &initial;
    for (const auto &s : steps) {
      StepEdge e{*prev, s.choice.event, s.post};
      if (std::find(out.begin(), out.end(), e) == out.end())
        out.push_back(std::move(e));
      prev = &s.post;
    }
    return out;
  }
};

/// Random animation: at each step all enabled pairs are gathered and the
/// generator's next draw modulo their number picks one. Stops early on deadlock.
inline AnimationLog random_animate(const Model &m, std::size_t steps, std::uint64_t seed) {
  AnimationLog log;
  log.seed = seed;
  log.initial = initial_state(m);
  log.visited.insert(log.initial);
  Lcg rng(seed);
  SysState current = log.initial;
  for (std::size_t i = 0; i < steps; ++i) {
    auto options = all_options(m, current);
    if (options.empty()) {
      log.terminated = Termination::Deadlock;
      return log;
    }
    Choice pick = std::move(options[rng.next() % options.size()]);
    current = apply_event(m, m.system().events[pick.event], pick.binding, current);
    log.visited.insert(current);
    log.steps.push_back({std::move(pick), current});
  }
  return log;
}

inline CoverageReport animation_coverage(const AbstractSystem &sys, const AnimationLog &log) {
  std::vector<std::size_t> counts(sys.events.size(), 0);
  for (const auto &s : log.steps)
    ++counts[s.choice.event];
  CoverageReport r = coverage_from_counts(sys, counts);
  r.total = log.visited.size();
  return r;
}

/// `step N: event(binding) -> state` lines, framed by seed and outcome.
inline std::string render_log(const AbstractSystem &sys, const AnimationLog &log) {
  std::ostringstream os;
  os << "seed: " << log.seed << '\n';
  os << "initial: " << render_state(sys, log.initial) << '\n';
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    const auto &s = log.steps[i];
    os << "step " << i + 1 << ": "
       << render_step(sys, sys.events[s.choice.event], s.choice.binding) << " -> "
       << render_state(sys, s.post) << '\n';
  }
  os << "terminated: " << to_string(log.terminated) << '\n';
  os << "visited: " << log.visited.size() << '\n';
  return os.str();
}

/// Interactive animation. Single owner: callers serialize fire/undo.
class Session {
public:
  explicit Session(Model m) : model_(std::move(m)), current_(initial_state(model_)) {
    visited_.insert(current_);
  }

  const Model &model() const { return model_; }
  const SysState &current() const { return current_; }
  const VisitedStates &visited() const { return visited_; }
  const std::vector<StepEdge> &edges() const { return edges_; }
  std::size_t history_size() const { return history_.size(); }

  std::vector<Choice> step_options() const { return all_options(model_, current_); }

  /// Throws IllegalChoice if `choice` is not enabled in the current state.
  const SysState &fire(const Choice &choice) {
    const auto &events = model_.system().events;
    if (choice.event < 0 || choice.event >= static_cast<int>(events.size()))
      throw IllegalChoice("no such event");
    const auto &ev = events[choice.event];
    const auto options = enabled_bindings(model_, ev, current_);
    if (std::find(options.begin(), options.end(), choice.binding) == options.end())
      throw IllegalChoice(render_step(model_.system(), ev, choice.binding) +
                          " is not enabled in the current state");
    SysState next = apply_event(model_, ev, choice.binding, current_);
    StepEdge edge{current_, choice.event, next};
    if (std::find(edges_.begin(), edges_.end(), edge) == edges_.end())
      edges_.push_back(std::move(edge));
    history_.push_back({choice, current_});
    current_ = std::move(next);
    visited_.insert(current_);
    return current_;
  }

  /// Throws EmptyHistory on a fresh session. The visited set is kept.
  const SysState &undo() {
    if (history_.empty())
      throw EmptyHistory("nothing to undo");
    current_ = std::move(history_.back().prior);
    history_.pop_back();
    return current_;
  }

  /// Parses `event` plus `param -> element name` pairs into a Choice.
  Choice choice_from_names(const std::string &event, const std::map<std::string, std::string> &binding) const {
    const auto &sys = model_.system();
    const int ei = sys.event_index(event);
    if (ei < 0)
      throw IllegalChoice("unknown event " + event);
    const auto &ev = sys.events[ei];
    if (binding.size() != ev.params.size())
      throw IllegalChoice("event " + event + " takes " + std::to_string(ev.params.size()) + " parameter(s)");
    Choice c;
    c.event = ei;
    for (const auto &p : ev.params) {
      const auto it = binding.find(p.name);
      if (it == binding.end())
        throw IllegalChoice("missing value for parameter " + p.name);
      const int carrier = p.domain->type.carrier;
      const std::string &cname = sys.sets[carrier];
      const std::string &v = it->second;
      std::uint64_t index = 0;
      if (v.size() > cname.size() && v.compare(0, cname.size(), cname) == 0 &&
          v.find_first_not_of("0123456789", cname.size()) == std::string::npos)
        index = std::stoull(v.substr(cname.size()));
      if (index < 1 || index > static_cast<std::uint64_t>(model_.card(carrier)))
        throw IllegalChoice(v + " is not an element of " + cname + " at this scope");
      c.binding.values.push_back(Value::element(carrier, index));
    }
    return c;
  }

private:
  struct HistoryEntry {
    Choice choice;
    SysState prior;
  };

  Model model_;
  SysState current_;
  std::vector<HistoryEntry> history_;
  VisitedStates visited_;
  std::vector<StepEdge> edges_;
};

/// DOT digraph over visited states only. States enabling the same set of event
/// names share a fill color; this groups states visually, it does not merge them.
inline std::string reduced_view(const Model &m, const std::vector<SysState> &visited,
                                const std::vector<StepEdge> &edges) {
  static const char *const palette[] = {
      "#a6cee3", "#b2df8a", "#fb9a99", "#fdbf6f", "#cab2d6", "#ffff99",
      "#1f78b4", "#33a02c", "#e31a1c", "#ff7f00", "#6a3d9a", "#b15928",
  };
  const auto &sys = m.system();
  std::map<std::vector<int>, std::size_t> groups;
  std::unordered_map<SysState, std::size_t, SysStateHash> ids;
  std::ostringstream os;
  os << "digraph \"" << dot_escape(sys.name) << "_visited\" {\n";
  os << "  node [shape=box, style=filled, fontname=\"monospace\"];\n";
  for (std::size_t i = 0; i < visited.size(); ++i) {
    const auto &s = visited[i];
    ids.emplace(s, i);
    std::vector<int> signature;
    std::string enabled;
    for (std::size_t e = 0; e < sys.events.size(); ++e) {
      bool on = false;
      try {
        on = is_enabled(m, sys.events[e], s);
      } catch (const WellDefinednessError &) {
      }
      if (on) {
        signature.push_back(static_cast<int>(e));
        enabled += (enabled.empty() ? "" : ",") + sys.events[e].name;
      }
    }
    const auto g = groups.emplace(signature, groups.size()).first->second;
    os << "  s" << i << " [label=\"" << dot_escape(render_state(sys, s)) << "\", fillcolor=\""
       << palette[g % std::size(palette)] << "\", tooltip=\"enabled: " << dot_escape(enabled)
       << "\"];\n";
  }
  for (const auto &e : edges) {
    const auto a = ids.find(e.from), b = ids.find(e.to);
    if (a == ids.end() || b == ids.end())
      continue;
    os << "  s" << a->second << " -> s" << b->second << " [label=\"" << dot_escape(sys.events[e.event].name)
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

} // namespace minibee
