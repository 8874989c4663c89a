#pragma once

#include "minibee/animator.hpp"
#include "minibee/explorer.hpp"
#include "minibee/refiner.hpp"

#include <nlohmann/json.hpp>

#include <sstream>
#include <string>

namespace minibee {

using nlohmann::json;

inline json value_to_json(const AbstractSystem &sys, const Value &v) {
  switch (v.kind) {
  case ValueKind::Bool:
    return v.bits != 0;
  case ValueKind::Nat:
    return v.bits;
  case ValueKind::Elem:
    return render_value(sys, v);
  case ValueKind::Set: {
    json arr = json::array();
    for (std::uint64_t i = 1; i <= 64; ++i)
      if (v.contains(i))
        arr.push_back(sys.sets[v.carrier] + std::to_string(i));
    return arr;
  }
  }
  return nullptr;
}

/// Variable name -> value, in declaration order.
inline json state_to_json(const AbstractSystem &sys, const SysState &s) {
  json j = json::object();
  for (std::size_t i = 0; i < sys.variables.size(); ++i)
    j[sys.variables[i]] = value_to_json(sys, s.values[i]);
  return j;
}

inline json binding_to_json(const AbstractSystem &sys, const EventDef &ev, const Binding &b) {
  json j = json::object();
  for (std::size_t i = 0; i < b.values.size() && i < ev.params.size(); ++i)
    j[ev.params[i].name] = render_value(sys, b.values[i]);
  return j;
}

inline json coverage_to_json(const CoverageReport &r) {
  json covered = json::object();
  for (const auto &[name, n] : r.firings)
    if (n)
      covered[name] = n;
  return {{"nodes",
           {{"deadlocked", r.deadlocked},
            {"invariant_violated", r.invariant_violated},
            {"live", r.live},
            {"open", r.open},
            {"total", r.total}}},
          {"covered_operations", covered},
          {"uncovered_operations", r.uncovered}};
}

inline json reason_to_json(const Model &m, const DisabledReason &r) {
  const auto &sys = m.system();
  json j{{"event", r.event},
         {"conjunct_index", r.conjunct_index},
         {"conjunct", r.conjunct},
         {"explanation", r.explanation},
         {"candidate", nullptr}};
  if (r.candidate) {
    const int ei = sys.event_index(r.event);
    j["candidate"] = binding_to_json(sys, sys.events[ei], *r.candidate);
  }
  return j;
}

inline json diagnosis_to_json(const StateGraph &g, const DeadlockDiagnosis &d) {
  json reasons = json::array();
  for (const auto &r : d.reasons)
    reasons.push_back(reason_to_json(g.model, r));
  return {{"node", d.node}, {"state", d.state}, {"values", state_to_json(g.system(), g.states[d.node])},
          {"reasons", reasons}};
}

/// The explore subcommand's findings: coverage, deadlocks, pointwise
/// invariant failures and well-definedness findings.
struct ExploreReport {
  CoverageReport coverage;
  std::vector<DeadlockDiagnosis> deadlocks;
  std::vector<InvariantFailure> invariant_failures;

  bool has_findings(const StateGraph &g) const {
    return !deadlocks.empty() || !invariant_failures.empty() || !g.findings.empty() ||
           coverage.invariant_violated > 0;
  }
};

inline ExploreReport make_explore_report(const StateGraph &g) {
  return {coverage_report(g), find_deadlocks(g), check_invariant_pointwise(g)};
}

inline std::string render_explore_report(const StateGraph &g, const ExploreReport &r) {
  const auto &sys = g.system();
  std::ostringstream os;
  os << "SYSTEM " << sys.name << '\n';
  os << render_coverage(r.coverage);
  for (const auto &d : r.deadlocks)
    os << render_diagnosis(d);
  for (const auto &f : r.invariant_failures)
    os << "INVARIANT node " << f.node << " conjunct " << f.conjunct_index << " `" << f.conjunct
       << "` is false\n  state: " << render_state(sys, g.states[f.node]) << '\n';
  for (const auto &f : g.findings)
    os << "FINDING node " << f.node << (f.event >= 0 ? " event " + sys.events[f.event].name : std::string(" invariant"))
       << ": " << f.message << "\n  state: " << render_state(sys, g.states[f.node]) << '\n';
  return os.str();
}

inline json explore_report_json(const StateGraph &g, const ExploreReport &r) {
  const auto &sys = g.system();
  json j = coverage_to_json(r.coverage);
  j["system"] = sys.name;
  json dl = json::array();
  for (const auto &d : r.deadlocks)
    dl.push_back(diagnosis_to_json(g, d));
  j["deadlocks"] = dl;
  json inv = json::array();
  for (const auto &f : r.invariant_failures)
    inv.push_back({{"node", f.node},
                   {"conjunct_index", f.conjunct_index},
                   {"conjunct", f.conjunct},
                   {"state", render_state(sys, g.states[f.node])}});
  j["invariant_failures"] = inv;
  json fs = json::array();
  for (const auto &f : g.findings)
    fs.push_back({{"node", f.node},
                  {"event", f.event >= 0 ? json(sys.events[f.event].name) : json(nullptr)},
                  {"message", f.message},
                  {"state", render_state(sys, g.states[f.node])}});
  j["findings"] = fs;
  return j;
}

inline std::string render_cbc(const AbstractSystem &sys, const CbcResult &r) {
  std::ostringstream os;
  const auto &ev = sys.events[sys.event_index(r.event)];
  os << "CBC " << r.event << '\n';
  os << "states examined: " << r.states_examined << '\n';
  os << "invariant states: " << r.invariant_states << '\n';
  os << "firings: " << r.firings << '\n';
  if (!r.violation) {
    os << "no violation\n";
    return os.str();
  }
  const auto &w = *r.violation;
  os << "VIOLATION of conjunct " << w.conjunct_index << " `" << w.conjunct << "`\n";
  os << "  state: " << render_state(sys, w.state) << '\n';
  os << "  binding: " << render_binding(sys, ev, w.binding) << '\n';
  if (w.post)
    os << "  post state: " << render_state(sys, *w.post) << '\n';
  return os.str();
}

inline json cbc_to_json(const AbstractSystem &sys, const CbcResult &r) {
  const auto &ev = sys.events[sys.event_index(r.event)];
  json j{{"event", r.event},
         {"states_examined", r.states_examined},
         {"invariant_states", r.invariant_states},
         {"firings", r.firings},
         {"violation", nullptr}};
  if (r.violation) {
    const auto &w = *r.violation;
    j["violation"] = {{"state", render_state(sys, w.state)},
                      {"binding", binding_to_json(sys, ev, w.binding)},
                      {"post_state", w.post ? json(render_state(sys, *w.post)) : json(nullptr)},
                      {"conjunct_index", w.conjunct_index},
                      {"conjunct", w.conjunct}};
  }
  return j;
}

inline json refinement_to_json(const RefinementReport &r) {
  json steps = json::array();
  for (const auto &s : r.counterexample)
    steps.push_back({{"event", s.event}, {"step", s.rendered}, {"hidden", s.hidden}});
  return {{"verdict", to_string(r.verdict)},
          {"common_events", r.alphabet.common},
          {"hidden_events", r.alphabet.new_in_refined},
          {"abstract_nodes", r.abstract_nodes},
          {"refined_nodes", r.refined_nodes},
          {"product_states", r.product_states},
          {"warnings", r.warnings},
          {"counterexample", steps},
          {"refined_end_state", r.refined_end_state.empty() ? json(nullptr) : json(r.refined_end_state)},
          {"abstract_end_states", r.abstract_end_states}};
}

inline json animation_to_json(const AbstractSystem &sys, const AnimationLog &log) {
  json steps = json::array();
  for (const auto &s : log.steps) {
    const auto &ev = sys.events[s.choice.event];
    steps.push_back({{"event", ev.name},
                     {"binding", binding_to_json(sys, ev, s.choice.binding)},
                     {"state", render_state(sys, s.post)}});
  }
  return {{"seed", log.seed},
          {"initial", render_state(sys, log.initial)},
          {"steps", steps},
          {"terminated", to_string(log.terminated)},
          {"visited", log.visited.size()},
          {"coverage", coverage_to_json(animation_coverage(sys, log))}};
}

} // namespace minibee
