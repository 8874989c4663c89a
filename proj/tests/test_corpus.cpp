#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace minibee;
using testing_support::corpus;

namespace {

std::string worst_status(const std::vector<PoOutcome> &all, PoKind kind) {
  std::string out = "pass";
  for (const auto &o : all) {
    if (o.po.kind != kind)
      continue;
    const std::string s = to_string(o.result.status);
    if (s != "pass" && s != "vacuous-pass")
      out = s;
  }
  return out;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("minibee_corpus_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  void write(const std::string &name, const std::string &text) const {
    std::ofstream(path / name, std::ios::binary) << text;
  }
};

} // namespace

TEST(Corpus, LoadsEveryEntry) {
  const auto &c = corpus();
  EXPECT_GE(c.entries.size(), 8u);
  EXPECT_EQ(c.get("readWrite").system.events.size(), 8u);
  EXPECT_EQ(c.get("readWriteR-fixed").system.events.size(), 10u);
  EXPECT_EQ(c.scope.set_cards.at("READER"), 2);
  EXPECT_EQ(c.scope.set_cards.at("WRITER"), 1);
  EXPECT_GE(c.negative.size(), 15u);
  EXPECT_THROW(c.get("nope"), CorpusCorrupt);
}

TEST(Corpus, ExpectationsHold) {
  for (const auto &e : corpus().entries) {
    const Model m(e.system, corpus().scope);
    const auto g = explore(m);
    EXPECT_EQ(!find_deadlocks(g).empty(), e.expected.at("deadlock").get<bool>()) << e.id;
    EXPECT_EQ(!check_invariant_pointwise(g).empty(), e.expected.at("invariant_violation").get<bool>()) << e.id;
    if (e.expected.contains("po")) {
      const auto all = discharge_all(m);
      for (const auto kind : {PoKind::Initialisation, PoKind::Preservation, PoKind::DeadlockFreeness})
        EXPECT_EQ(worst_status(all, kind), e.expected["po"].at(to_string(kind)).get<std::string>())
            << e.id << ' ' << to_string(kind);
    }
    if (e.expected.contains("refines")) {
      const auto &r = e.expected["refines"];
      const auto report = check_refinement(corpus().get(r.at("abstract")).system, e.system, corpus().scope);
      EXPECT_EQ(to_string(report.verdict), r.at("verdict").get<std::string>()) << e.id;
    }
  }
}

TEST(Corpus, ComponentsComposeToEntry) {
  for (const auto &e : corpus().entries) {
    if (e.components.empty())
      continue;
    std::vector<AbstractSystem> parts;
    for (const auto &c : e.components)
      parts.push_back(corpus().get(c).system);
    const auto composed = compose_all(parts);
    EXPECT_EQ(testing_support::node_set(explore(composed, corpus().scope)),
              testing_support::node_set(explore(e.system, corpus().scope)))
        << e.id;
  }
}

TEST(Corpus, StoredDeadlockPathIsReplayable) {
  const Model m(corpus().get("readWriteR-buggy").system, corpus().scope);
  Session s(m);
  for (const auto &step : corpus().get("readWriteR-buggy").expected.at("deadlock_path"))
    s.fire(s.choice_from_names(step.at("event"), step.at("binding").get<std::map<std::string, std::string>>()));
  EXPECT_TRUE(s.step_options().empty());
  const auto g = explore(m);
  EXPECT_TRUE(testing_support::class_set(g, NodeClass::Deadlocked).count(render_state(m.system(), s.current())));
}

TEST(Corpus, BuggyAndFixedDifferInOneGuardConjunct) {
  const auto &b = corpus().get("readWriteR-buggy").system;
  const auto &f = corpus().get("readWriteR-fixed").system;
  ASSERT_EQ(b.events.size(), f.events.size());
  std::vector<std::string> differing;
  for (std::size_t i = 0; i < b.events.size(); ++i)
    if (!same_event(b.events[i], f.events[i]))
      differing.push_back(b.events[i].name);
  ASSERT_EQ(differing, std::vector<std::string>{"endReading"});
  const auto &be = b.events[b.event_index("endReading")];
  const auto &fe = f.events[f.event_index("endReading")];
  const auto bc = conjuncts(be.guard), fc = conjuncts(fe.guard);
  ASSERT_EQ(bc.size(), fc.size());
  std::size_t changed = 0;
  for (std::size_t i = 0; i < bc.size(); ++i)
    changed += to_string(bc[i]) != to_string(fc[i]);
  EXPECT_EQ(changed, 1u);
  EXPECT_EQ(to_string(be.action), to_string(fe.action));
}

TEST(Corpus, MissingDirectoryIsCorrupt) {
  EXPECT_THROW(load_corpus("/nonexistent/minibee"), CorpusCorrupt);
}

TEST(Corpus, BrokenManifestIsCorrupt) {
  TempDir d;
  d.write("manifest.json", "{ not json");
  EXPECT_THROW(load_corpus(d.path), CorpusCorrupt);
}

TEST(Corpus, UnparsableEntryIsCorrupt) {
  TempDir d;
  d.write("s.scope", R"({"sets": {}})");
  d.write("bad.mbs", "SYSTEM");
  d.write("manifest.json", R"({"scope": "s.scope", "entries": [{"id": "b", "file": "bad.mbs", "role": "abstract",
                               "expected": {"deadlock": false, "invariant_violation": false}}]})");
  EXPECT_THROW(load_corpus(d.path), CorpusCorrupt);
}
