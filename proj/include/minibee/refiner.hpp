#pragma once

#include "minibee/explorer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace minibee {

struct Alphabet {
  std::vector<std::string> common;
  std::vector<std::string> new_in_refined;
};

/// Every abstract event must survive in the refinement; events only in the
/// refinement are hidden during trace comparison.
inline Alphabet make_alphabet(const AbstractSystem &abstract, const AbstractSystem &refined) {
  Alphabet a;
  for (const auto &e : abstract.events) {
    if (refined.event_index(e.name) < 0)
      throw AlphabetError("abstract event " + e.name + " has no counterpart in " + refined.name);
  }
  for (const auto &e : refined.events)
    (abstract.event_index(e.name) >= 0 ? a.common : a.new_in_refined).push_back(e.name);
  return a;
}

enum class Verdict : std::uint8_t { Pass, Fail, Inconclusive };

inline const char *to_string(Verdict v) {
  switch (v) {
  case Verdict::Pass:
    return "pass";
  case Verdict::Fail:
    return "fail";
  default:
    return "inconclusive";
  }
}

struct TraceStep {
  std::string event;
  Binding binding;
  bool hidden = false;
  std::string rendered; // event(binding)
};

struct RefinementReport {
  Verdict verdict = Verdict::Pass;
  Alphabet alphabet;
  std::vector<TraceStep> counterexample; // refined steps, hidden ones included
  std::string refined_end_state;
  std::vector<std::string> abstract_end_states; // abstract states offered before the failing step
  std::size_t product_states = 0;
  std::size_t abstract_nodes = 0;
  std::size_t refined_nodes = 0;
  std::vector<std::string> warnings;

  /// The counterexample with hidden steps removed, as event names.
  std::vector<std::string> projected() const {
    std::vector<std::string> out;
    for (const auto &s : counterexample)
      if (!s.hidden)
        out.push_back(s.event);
    return out;
  }
};

namespace detail {

inline bool has_hidden_cycle(const StateGraph &g, const std::vector<bool> &hidden_event) {
  // Iterative DFS colouring over hidden transitions only.
  std::vector<std::uint8_t> colour(g.size(), 0);
  for (std::size_t root = 0; root < g.size(); ++root) {
    if (colour[root])
      continue;
    std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(root), 0}};
    colour[root] = 1;
    while (!stack.empty()) {
      auto &[node, next] = stack.back();
      if (next == g.outgoing[node].size()) {
        colour[node] = 2;
        stack.pop_back();
        continue;
      }
      const auto &t = g.transitions[g.outgoing[node][next++]];
      if (!hidden_event[t.event])
        continue;
      if (colour[t.dst] == 1)
        return true;
      if (colour[t.dst] == 0) {
        colour[t.dst] = 1;
        stack.push_back({t.dst, 0});
      }
    }
  }
  return false;
}

} // namespace detail

/// Trace inclusion of `refined` (new events hidden) in `abstract`, both
/// explored at the same scope. The abstract graph is determinized over event
/// names on the fly; the first failing step met in breadth-first order gives a
/// shortest counterexample.
inline RefinementReport check_refinement(const AbstractSystem &abstract, const AbstractSystem &refined,
                                         const Scope &scope, const ExploreLimits &limits = {}) {
  RefinementReport report;
  report.alphabet = make_alphabet(abstract, refined);

  const StateGraph ga = explore(abstract, scope, limits);
  const StateGraph gr = explore(refined, scope, limits);
  report.abstract_nodes = ga.size();
  report.refined_nodes = gr.size();

  // refined event index -> abstract event index, or -1 when hidden
  std::vector<int> to_abstract;
  std::vector<bool> hidden;
  for (const auto &e : refined.events) {
    to_abstract.push_back(abstract.event_index(e.name));
    hidden.push_back(to_abstract.back() < 0);
  }

  if (detail::has_hidden_cycle(gr, hidden))
    report.warnings.push_back("divergence: the refinement can loop forever on hidden events");

  auto unexpanded = [](const StateGraph &g, int n) { return g.classes[n] == NodeClass::Open ||
                                                            g.classes[n] == NodeClass::InvariantViolated; };

  std::map<std::vector<int>, int> subset_ids;
  std::vector<std::vector<int>> subsets;
  auto intern = [&](std::vector<int> s) {
    const auto it = subset_ids.find(s);
    if (it != subset_ids.end())
      return it->second;
    const int id = static_cast<int>(subsets.size());
    subset_ids.emplace(s, id);
    subsets.push_back(std::move(s));
    return id;
  };

  struct ProductNode {
    int refined;
    int subset;
    int parent;
    int via; // refined transition index
  };
  std::vector<ProductNode> nodes;
  std::map<std::pair<int, int>, int> seen;
  auto visit = [&](int r, int subset, int parent, int via) {
    if (seen.emplace(std::make_pair(r, subset), static_cast<int>(nodes.size())).second) {
      nodes.push_back({r, subset, parent, via});
      return true;
    }
    return false;
  };

  bool incomplete = false;
  visit(gr.initial, intern({ga.initial}), -1, -1);
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int pid = queue.front();
    queue.pop_front();
    const ProductNode cur = nodes[pid];
    if (gr.classes[cur.refined] == NodeClass::Open)
      incomplete = true;
    for (int ti : gr.outgoing[cur.refined]) {
      const auto &t = gr.transitions[ti];
      if (hidden[t.event]) {
        if (visit(t.dst, cur.subset, pid, ti))
          queue.push_back(static_cast<int>(nodes.size()) - 1);
        continue;
      }
      const int ae = to_abstract[t.event];
      std::set<int> next;
      bool partial = false;
      for (int a : subsets[cur.subset]) {
        partial = partial || unexpanded(ga, a);
        for (int ai : ga.outgoing[a])
          if (ga.transitions[ai].event == ae)
            next.insert(ga.transitions[ai].dst);
      }
      if (next.empty()) {
        if (partial) {
          incomplete = true;
          continue;
        }
        // Failing step: rebuild the refined path.
        std::vector<int> path{ti};
        for (int p = pid; nodes[p].via >= 0; p = nodes[p].parent)
          path.push_back(nodes[p].via);
        std::reverse(path.begin(), path.end());
        for (int step : path) {
          const auto &st = gr.transitions[step];
          const auto &ev = refined.events[st.event];
          report.counterexample.push_back(
              {ev.name, st.binding, hidden[st.event], render_step(refined, ev, st.binding)});
        }
        report.refined_end_state = render_state(refined, gr.states[t.dst]);
        for (int a : subsets[cur.subset])
          report.abstract_end_states.push_back(render_state(abstract, ga.states[a]));
        report.verdict = Verdict::Fail;
        report.product_states = nodes.size();
        return report;
      }
      if (visit(t.dst, intern({next.begin(), next.end()}), pid, ti))
        queue.push_back(static_cast<int>(nodes.size()) - 1);
    }
  }
  report.product_states = nodes.size();
  report.verdict = incomplete ? Verdict::Inconclusive : Verdict::Pass;
  if (incomplete)
    report.warnings.push_back("inconclusive up to limits: some states were not fully explored");
  return report;
}

/// `k: event(binding)` lines plus both end states.
inline std::string render_refinement(const RefinementReport &r) {
  std::ostringstream os;
  os << "REFINEMENT " << to_string(r.verdict) << '\n';
  os << "abstract nodes: " << r.abstract_nodes << '\n';
  os << "refined nodes: " << r.refined_nodes << '\n';
  os << "product states: " << r.product_states << '\n';
  os << "hidden events:";
  for (const auto &e : r.alphabet.new_in_refined)
    os << ' ' << e;
  os << '\n';
  for (const auto &w : r.warnings)
    os << "warning: " << w << '\n';
  if (r.verdict == Verdict::Fail) {
    os << "COUNTEREXAMPLE\n";
    for (std::size_t k = 0; k < r.counterexample.size(); ++k)
      os << k + 1 << ": " << r.counterexample[k].rendered << (r.counterexample[k].hidden ? " [hidden]" : "")
         << '\n';
    os << "refined end state: " << r.refined_end_state << '\n';
    for (const auto &s : r.abstract_end_states)
      os << "abstract end state: " << s << '\n';
  }
  return os.str();
}

/// Every event-name sequence of length <= depth the graph can perform, with
/// `hide` events skipped (they do not count towards the length).
inline std::set<std::vector<std::string>> traces_to_depth(const StateGraph &g, const std::set<std::string> &hide,
                                                          std::size_t depth) {
  const auto &events = g.system().events;
  std::vector<bool> hidden;
  for (const auto &e : events)
    hidden.push_back(hide.count(e.name) > 0);

  auto closure = [&](std::set<int> s) {
    std::vector<int> work(s.begin(), s.end());
    while (!work.empty()) {
      const int n = work.back();
      work.pop_back();
      for (int ti : g.outgoing[n]) {
        const auto &t = g.transitions[ti];
        if (hidden[t.event] && s.insert(t.dst).second)
          work.push_back(t.dst);
      }
    }
    return s;
  };

  std::set<std::vector<std::string>> result{{}};
  std::map<std::vector<std::string>, std::set<int>> frontier{{{}, closure({g.initial})}};
  for (std::size_t d = 0; d < depth && !frontier.empty(); ++d) {
    std::map<std::vector<std::string>, std::set<int>> next;
    for (const auto &[trace, nodes] : frontier) {
      for (int n : nodes) {
        for (int ti : g.outgoing[n]) {
          const auto &t = g.transitions[ti];
          if (hidden[t.event])
            continue;
          auto extended = trace;
          extended.push_back(events[t.event].name);
          next[std::move(extended)].insert(t.dst);
        }
      }
    }
    frontier.clear();
    for (auto &[trace, nodes] : next) {
      result.insert(trace);
      frontier.emplace(trace, closure(std::move(nodes)));
    }
  }
  return result;
}

} // namespace minibee
