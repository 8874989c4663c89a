#include "oracle/readers_writers.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace minibee;
using testing_support::class_set;
using testing_support::corpus;
using testing_support::make_scope;
using testing_support::node_set;

namespace {

const char *const no_events = "SYSTEM Still VARIABLES x INVARIANT x : NAT INITIALISATION x := 0 EVENTS END";

StateGraph desk_graph(const std::string &id, const ExploreLimits &limits = {}) {
  return explore(corpus().get(id).system, corpus().scope, limits);
}

Value card_of(const StateGraph &g, int node, const std::string &var) {
  const auto &v = g.states[node].values[g.system().variable_index(var)];
  return Value::natural(v.size());
}

} // namespace

TEST(Explorer, NoEventSystemDeadlocksImmediately) {
  const auto g = explore(parse_system(no_events), {});
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.classes[0], NodeClass::Deadlocked);
  const auto r = coverage_report(g);
  EXPECT_EQ(r.deadlocked, 1u);
  EXPECT_EQ(r.total, 1u);
  EXPECT_EQ(render_coverage(r), "NODES\n"
                                "deadlocked          :1\n"
                                "invariant_violated  :0\n"
                                "live                :0\n"
                                "open                :0\n"
                                "total               :1\n"
                                "COVERED_OPERATIONS\n"
                                "UNCOVERED_OPERATIONS\n");
  const auto d = find_deadlocks(g);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_TRUE(d[0].reasons.empty());
}

TEST(Explorer, UncoveredEventsAreListed) {
  const auto g = explore(parse_system("SYSTEM N VARIABLES x INVARIANT x : NAT INITIALISATION x := 0 "
                                      "EVENTS never = SELECT x > 1 THEN x := 0 END END"),
                         {});
  const auto r = coverage_report(g);
  EXPECT_TRUE(r.covered.empty());
  EXPECT_EQ(r.uncovered, std::vector<std::string>{"never"});
  EXPECT_NE(render_coverage(r).find("UNCOVERED_OPERATIONS\nnever\n"), std::string::npos);
}

TEST(Explorer, ReadWriteMatchesOracleCount) {
  const auto g = explore(corpus().get("readWrite").system, make_scope(2, 1));
  const auto x = oracle::explore(oracle::variant_for("readWrite"), {2, 1, 2});
  EXPECT_EQ(g.size(), x.states.size());
  EXPECT_EQ(node_set(g), x.states);
  const auto r = coverage_report(g);
  EXPECT_TRUE(r.uncovered.empty());
  EXPECT_EQ(r.open, 0u);
  EXPECT_EQ(r.deadlocked + r.invariant_violated + r.live + r.open, r.total);
}

TEST(Explorer, BuggyDeadlocksHaveOneActiveReader) {
  const auto g = desk_graph("readWriteR-buggy");
  const auto r = coverage_report(g);
  EXPECT_GE(r.deadlocked, 1u);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.classes[i] == NodeClass::Deadlocked)
      EXPECT_EQ(card_of(g, static_cast<int>(i), "activeReaders"), Value::natural(1));
  EXPECT_NE(render_coverage(r).find("deadlocked          :" + std::to_string(r.deadlocked)), std::string::npos);
}

TEST(Explorer, BuggyDiagnosisNamesEndReadingGuard) {
  const auto g = desk_graph("readWriteR-buggy");
  const auto ds = find_deadlocks(g);
  ASSERT_FALSE(ds.empty());
  for (const auto &d : ds) {
    EXPECT_EQ(d.state, render_state(g.system(), g.states[d.node]));
    ASSERT_EQ(d.reasons.size(), g.system().events.size());
    const auto &end = d.reasons[g.system().event_index("endReading")];
    EXPECT_EQ(end.conjunct, "nbActiveReaders > 1");
    EXPECT_EQ(end.conjunct_index, 1u);
    ASSERT_TRUE(end.candidate.has_value());
  }
  const auto text = render_diagnosis(ds[0]);
  EXPECT_NE(text.find("endReading"), std::string::npos);
  EXPECT_NE(text.find("`nbActiveReaders > 1`"), std::string::npos);
}

TEST(Explorer, FixedHasNoDeadlock) {
  const auto g = desk_graph("readWriteR-fixed");
  EXPECT_TRUE(find_deadlocks(g).empty());
  const auto r = coverage_report(g);
  EXPECT_EQ(r.invariant_violated, 0u);
  EXPECT_EQ(r.open, 0u);
}

TEST(Explorer, PointwiseInvariant) {
  EXPECT_TRUE(check_invariant_pointwise(desk_graph("readWrite")).empty());

  const auto g = desk_graph("readWriteR-mutant");
  const auto failures = check_invariant_pointwise(g);
  ASSERT_FALSE(failures.empty());
  const auto last = conjuncts(g.system().invariant).size() - 1;
  for (const auto &f : failures) {
    EXPECT_EQ(f.conjunct_index, last);
    EXPECT_EQ(f.conjunct, "not(card(activeWriter) = 1 & card(activeReaders) >= 1)");
    EXPECT_EQ(g.classes[f.node], NodeClass::InvariantViolated);
    EXPECT_TRUE(g.outgoing[f.node].empty());
  }

  ExploreLimits only_initial;
  only_initial.max_depth = 0;
  const auto single = desk_graph("readWrite", only_initial);
  EXPECT_EQ(single.size(), 1u);
  EXPECT_TRUE(check_invariant_pointwise(single).empty());
}

TEST(Explorer, LimitsLeaveOpenNodes) {
  ExploreLimits by_nodes;
  by_nodes.max_nodes = 20;
  const auto g = desk_graph("readWriteR-fixed", by_nodes);
  EXPECT_EQ(g.size(), 20u);
  EXPECT_GT(coverage_report(g).open, 0u);

  ExploreLimits by_depth;
  by_depth.max_depth = 2;
  const auto h = desk_graph("readWriteR-fixed", by_depth);
  for (std::size_t i = 0; i < h.size(); ++i) {
    EXPECT_LE(h.depth[i], 2u);
    if (h.depth[i] == 2)
      EXPECT_EQ(h.classes[i], NodeClass::Open);
  }
}

TEST(Explorer, LiveNodesReplayExactly) {
  const auto g = desk_graph("readWriteR-buggy");
  const auto &sys = g.system();
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (g.classes[n] != NodeClass::Live)
      continue;
    std::vector<std::pair<int, Binding>> expected;
    for (std::size_t e = 0; e < sys.events.size(); ++e)
      for (const auto &b : enabled_bindings(g.model, sys.events[e], g.states[n]))
        expected.emplace_back(static_cast<int>(e), b);
    ASSERT_EQ(expected.size(), g.outgoing[n].size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
      const auto &t = g.transitions[g.outgoing[n][k]];
      EXPECT_EQ(t.event, expected[k].first);
      EXPECT_EQ(t.binding, expected[k].second);
      EXPECT_EQ(g.states[t.dst], apply_event(g.model, sys.events[t.event], t.binding, g.states[n]));
    }
  }
}

TEST(Explorer, DumpIsDeterministic) {
  const auto a = dump_graph(desk_graph("readWriteR-buggy"));
  const auto b = dump_graph(desk_graph("readWriteR-buggy"));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("live\treaders={}; waitingReaders={}", 0), 0u) << a.substr(0, 80);
  EXPECT_NE(a.find("\tnewReader\trr=READER1\t"), std::string::npos);
  const auto dot = graph_to_dot(desk_graph("readWrite"));
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
}

TEST(Explorer, IllDefinedActionIsAFinding) {
  const auto g = explore(parse_system("SYSTEM D VARIABLES x INVARIANT x : NAT INITIALISATION x := 0 "
                                      "EVENTS dec = SELECT true THEN x := x - 1 END END"),
                         {});
  ASSERT_EQ(g.findings.size(), 1u);
  EXPECT_EQ(g.findings[0].event, 0);
  EXPECT_EQ(g.classes[g.findings[0].node], NodeClass::Open);
  EXPECT_NE(g.findings[0].message.find("is negative"), std::string::npos) << g.findings[0].message;
}

TEST(Explorer, IllDefinedInvariantIsAFinding) {
  const auto g = explore(parse_system("SYSTEM D VARIABLES x INVARIANT x : NAT & x - 1 >= 0 INITIALISATION x := 0 "
                                      "EVENTS END"),
                         {});
  ASSERT_EQ(g.findings.size(), 1u);
  EXPECT_EQ(g.findings[0].event, -1);
  EXPECT_EQ(g.classes[0], NodeClass::InvariantViolated);
}

TEST(Explorer, ConstraintBasedCheck) {
  const Model rw(corpus().get("readWrite").system, make_scope(2, 1));
  const auto ok = constraint_based_check(rw, "reading");
  EXPECT_FALSE(ok.violation.has_value());
  EXPECT_EQ(ok.states_examined, typed_state_count(rw));
  EXPECT_GT(ok.firings, 0u);

  const auto bad = testing_support::load_data("bad_writer.mbs");
  Scope two;
  two.set_cards["WRITER"] = 2;
  const Model m2(bad, two);
  const auto found = constraint_based_check(m2, "badWrite");
  ASSERT_TRUE(found.violation.has_value());
  EXPECT_EQ(found.violation->conjunct, "card(activeWriter) <= 1");
  EXPECT_TRUE(eval_pred(m2, bad.invariant, found.violation->state));
  ASSERT_TRUE(found.violation->post.has_value());
  EXPECT_EQ(render_state(bad, *found.violation->post), "activeWriter={WRITER1,WRITER2}");

  Scope one;
  one.set_cards["WRITER"] = 1;
  EXPECT_FALSE(constraint_based_check(Model(bad, one), "badWrite").violation.has_value());

  const Model never(parse_system("SYSTEM V VARIABLES x INVARIANT x : NAT & x <= 3 INITIALISATION x := 0 "
                                 "EVENTS jump = SELECT x > 5 THEN x := 9 END END"),
                    {});
  const auto vacuous = constraint_based_check(never, "jump");
  EXPECT_FALSE(vacuous.violation.has_value());
  EXPECT_EQ(vacuous.firings, 0u);
}

TEST(Explorer, ConstraintBasedCheckCeiling) {
  const Model rw(corpus().get("readWrite").system, make_scope(2, 1));
  EXPECT_THROW(constraint_based_check(rw, "reading", 100), StateSpaceTooLarge);
}

TEST(Explorer, DeadlockClassImpliesInvariant) {
  for (const auto &e : corpus().entries) {
    const auto g = explore(e.system, corpus().scope);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g.classes[i] == NodeClass::Deadlocked || g.classes[i] == NodeClass::InvariantViolated)
        EXPECT_TRUE(g.outgoing[i].empty()) << e.id;
      if (g.classes[i] == NodeClass::Deadlocked)
        EXPECT_TRUE(eval_pred(g.model, g.system().invariant, g.states[i])) << e.id;
    }
  }
}
