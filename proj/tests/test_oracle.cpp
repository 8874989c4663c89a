#include "oracle/generic.hpp"
#include "oracle/readers_writers.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace minibee;
using testing_support::class_set;
using testing_support::corpus;
using testing_support::make_scope;
using testing_support::node_set;

namespace {

struct Case {
  std::string id;
  int readers, writers, max;
};

std::vector<Case> cases() {
  std::vector<Case> out;
  for (const auto &e : corpus().entries)
    for (int r = 1; r <= 3; ++r)
      for (int w = 1; w <= 2; ++w)
        for (int k = 1; k <= 3; ++k) {
          const bool uses_max = e.system.constant_index("maxConsecutiveR") >= 0;
          if (!uses_max && k > 1)
            continue;
          const Model m(e.system, uses_max ? make_scope(r, w, k) : make_scope(r, w));
          if (typed_state_count(m) <= 10000)
            out.push_back({e.id, r, w, k});
        }
  return out;
}

} // namespace

TEST(Oracle, ExplorerMatchesHandWrittenModel) {
  const auto all = cases();
  EXPECT_GE(all.size(), 20u);
  for (const auto &c : all) {
    const auto &sys = corpus().get(c.id).system;
    const bool uses_max = sys.constant_index("maxConsecutiveR") >= 0;
    const auto g = explore(sys, uses_max ? make_scope(c.readers, c.writers, c.max) : make_scope(c.readers, c.writers));
    const auto x = oracle::explore(oracle::variant_for(c.id), {c.readers, c.writers, c.max});
    const std::string label = c.id + " R=" + std::to_string(c.readers) + " W=" + std::to_string(c.writers) +
                              " max=" + std::to_string(c.max);
    EXPECT_EQ(node_set(g), x.states) << label;
    EXPECT_EQ(class_set(g, NodeClass::Deadlocked), x.deadlocked) << label;
    EXPECT_EQ(class_set(g, NodeClass::InvariantViolated), x.violated) << label;
    EXPECT_EQ(class_set(g, NodeClass::Open).size(), 0u) << label;
    std::map<std::string, std::size_t> firings;
    for (const auto &t : g.transitions)
      ++firings[sys.events[t.event].name];
    EXPECT_EQ(firings, x.firings) << label;
  }
}

TEST(Oracle, GenericModelAgreesOnSyntheticSystems) {
  const std::vector<std::pair<std::string, Scope>> systems{
      {testing_support::read_text(testing_support::data_path("toggle.mbs")), {}},
      {"SYSTEM Count VARIABLES x INVARIANT x : NAT & x <= 2 INITIALISATION x := 0 "
       "EVENTS up = SELECT true THEN x := x + 1 END; down = SELECT x >= 1 THEN x := x - 1 END END",
       {}},
      {"SYSTEM Pick SETS T VARIABLES a, b INVARIANT a <: T & b <: T & card(a) + card(b) <= 3 "
       "INITIALISATION a := {} || b := {} "
       "EVENTS take = ANY t WHERE t : T & t /: a THEN a := a \\/ {t} END; "
       "move = ANY t WHERE t : a THEN a := a - {t} || b := b \\/ {t} END END",
       [] {
         Scope s;
         s.set_cards["T"] = 3;
         return s;
       }()},
  };
  for (const auto &[text, scope] : systems) {
    const Model m(parse_system(text), scope);
    const auto g = explore(m);
    const auto x = oracle::generic_explore(m);
    EXPECT_EQ(node_set(g), x.states) << m.system().name;
    EXPECT_EQ(class_set(g, NodeClass::Deadlocked), x.deadlocked) << m.system().name;
    EXPECT_EQ(class_set(g, NodeClass::InvariantViolated), x.violated) << m.system().name;
  }
}

TEST(Oracle, TypedCountFormula) {
  // POW(READER) has 2^R values, POW(WRITER) 2^W, each natural nat_max + 1.
  for (int r = 1; r <= 3; ++r)
    for (int w = 1; w <= 2; ++w) {
      const Model m(corpus().get("readWrite").system, make_scope(r, w));
      const std::uint64_t pr = 1u << r, pw = 1u << w;
      EXPECT_EQ(typed_state_count(m), pr * pr * pr * pw * pw * pw);
    }
}
