#pragma once

// Hand-written model of the Readers/Writers corpus, independent of the parser
// and evaluator: states are plain bitmasks and counters, events are loops
// over element indices. Used to cross-check exploration, classification and
// traces.

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

struct RwVariant {
  bool reader_side = true;
  bool writer_side = true;
  bool refined = false;
  bool strict_end_reading = false;     // endReading demands nbActiveReaders > 1
  bool writing_checks_readers = true;  // writing demands activeReaders = {}
  std::vector<std::string> vars;
};

inline RwVariant variant_for(const std::string &id) {
  RwVariant v;
  if (id == "Readers") {
    v.writer_side = false;
    v.vars = {"readers", "waitingReaders", "activeReaders", "activeWriter"};
  } else if (id == "Writers") {
    v.reader_side = false;
    v.vars = {"writers", "waitingWriters", "activeWriter", "activeReaders"};
  } else if (id == "readWrite") {
    v.vars = {"readers", "waitingReaders", "activeReaders", "activeWriter", "writers", "waitingWriters"};
  } else if (id == "ReadersR") {
    v.writer_side = false;
    v.refined = true;
    v.vars = {"readers", "waitingReaders", "activeReaders", "activeWriter", "nbActiveReaders", "nbConsecutiveR"};
  } else if (id == "WritersR") {
    v.reader_side = false;
    v.refined = true;
    v.vars = {"writers", "waitingWriters", "activeWriter", "activeReaders", "nbConsecutiveR"};
  } else {
    v.refined = true;
    v.strict_end_reading = id == "readWriteR-buggy";
    v.writing_checks_readers = id != "readWriteR-mutant";
    v.vars = {"readers",         "waitingReaders", "activeReaders", "activeWriter",
              "nbActiveReaders", "nbConsecutiveR", "writers",       "waitingWriters"};
  }
  return v;
}

struct RwState {
  unsigned r = 0, wr = 0, ar = 0, aw = 0, w = 0, ww = 0;
  int nba = 0, nbc = 0;

  auto key() const { return std::tie(r, wr, ar, aw, w, ww, nba, nbc); }
  bool operator<(const RwState &o) const { return key() < o.key(); }
  bool operator==(const RwState &o) const { return key() == o.key(); }
};

inline unsigned bit(int i) { return 1u << (i - 1); }

inline int popcount(unsigned x) {
  int n = 0;
  for (; x; x &= x - 1)
    ++n;
  return n;
}

struct Params {
  int readers = 2;
  int writers = 1;
  int max_consecutive = 2;
};

using Step = std::pair<std::string, RwState>;

inline std::vector<Step> successors(const RwVariant &v, const Params &p, const RwState &s) {
  std::vector<Step> out;
  if (v.reader_side) {
    for (int i = 1; i <= p.readers; ++i) {
      const unsigned b = bit(i);
      if ((s.r & b) && !(s.wr & b) && !(s.ar & b)) {
        RwState t = s;
        t.r &= ~b;
        t.wr |= b;
        out.push_back({"want2read", t});
      }
    }
    for (int i = 1; i <= p.readers; ++i) {
      const unsigned b = bit(i);
      if ((s.wr & b) && s.aw == 0 && (!v.refined || s.nbc < p.max_consecutive)) {
        RwState t = s;
        t.ar |= b;
        t.wr &= ~b;
        if (v.refined) {
          ++t.nba;
          ++t.nbc;
        }
        out.push_back({"reading", t});
      }
    }
    for (int i = 1; i <= p.readers; ++i) {
      const unsigned b = bit(i);
      const bool counter_ok = !v.refined || (v.strict_end_reading ? s.nba > 1 : s.nba >= 1);
      if ((s.ar & b) && counter_ok) {
        RwState t = s;
        t.ar &= ~b;
        t.r |= b;
        if (v.refined)
          --t.nba;
        out.push_back({"endReading", t});
      }
    }
    for (int i = 1; i <= p.readers; ++i) {
      const unsigned b = bit(i);
      if (!(s.wr & b) && !(s.ar & b) && (!v.refined || !(s.r & b))) {
        RwState t = s;
        t.r |= b;
        out.push_back({"newReader", t});
      }
    }
    if (v.refined) {
      for (int i = 1; i <= p.readers; ++i) {
        const unsigned b = bit(i);
        if (s.r & b) {
          RwState t = s;
          t.r &= ~b;
          out.push_back({"leaveReader", t});
        }
      }
    }
  }
  if (v.writer_side) {
    for (int j = 1; j <= p.writers; ++j) {
      const unsigned b = bit(j);
      if ((s.w & b) && !(s.ww & b) && !(s.aw & b)) {
        RwState t = s;
        t.ww |= b;
        t.w &= ~b;
        out.push_back({"want2write", t});
      }
    }
    for (int j = 1; j <= p.writers; ++j) {
      const unsigned b = bit(j);
      if ((s.ww & b) && (!v.writing_checks_readers || s.ar == 0)) {
        RwState t = s;
        t.aw = b;
        t.ww &= ~b;
        if (v.refined)
          t.nbc = 0;
        out.push_back({"writing", t});
      }
    }
    for (int j = 1; j <= p.writers; ++j) {
      const unsigned b = bit(j);
      if (s.aw & b) {
        RwState t = s;
        t.aw &= ~b;
        t.w |= b;
        out.push_back({"endWriting", t});
      }
    }
    for (int j = 1; j <= p.writers; ++j) {
      const unsigned b = bit(j);
      if (!(s.ww & b) && !(s.aw & b) && (!v.refined || !(s.w & b))) {
        RwState t = s;
        t.w |= b;
        out.push_back({"newWriter", t});
      }
    }
    if (v.refined) {
      for (int j = 1; j <= p.writers; ++j) {
        const unsigned b = bit(j);
        if (s.w & b) {
          RwState t = s;
          t.w &= ~b;
          out.push_back({"leaveWriters", t});
        }
      }
    }
  }
  return out;
}

inline bool exclusion_holds(const RwState &s) { return !(popcount(s.aw) == 1 && popcount(s.ar) >= 1); }

inline bool invariant_holds(const RwVariant &v, const Params &p, const RwState &s) {
  if ((s.r & s.wr) || (s.ar & s.wr) || (s.ar & s.r))
    return false;
  if ((s.w & s.ww) || (s.aw & s.ww) || (s.aw & s.w))
    return false;
  if (popcount(s.aw) > 1 || !exclusion_holds(s))
    return false;
  if (v.refined && v.reader_side && (s.nba != popcount(s.ar) || s.nbc > p.max_consecutive))
    return false;
  return true;
}

inline std::string render_set(const std::string &carrier, unsigned mask) {
  std::string out = "{";
  bool first = true;
  for (int i = 1; i <= 32; ++i) {
    if (mask & bit(i)) {
      out += (first ? "" : ",") + carrier + std::to_string(i);
      first = false;
    }
  }
  return out + "}";
}

inline std::string render(const RwVariant &v, const RwState &s) {
  const std::map<std::string, std::string> values{
      {"readers", render_set("READER", s.r)},
      {"waitingReaders", render_set("READER", s.wr)},
      {"activeReaders", render_set("READER", s.ar)},
      {"activeWriter", render_set("WRITER", s.aw)},
      {"writers", render_set("WRITER", s.w)},
      {"waitingWriters", render_set("WRITER", s.ww)},
      {"nbActiveReaders", std::to_string(s.nba)},
      {"nbConsecutiveR", std::to_string(s.nbc)},
  };
  std::string out;
  for (const auto &name : v.vars)
    out += (out.empty() ? "" : "; ") + name + "=" + values.at(name);
  return out;
}

struct Exploration {
  std::set<std::string> states;
  std::set<std::string> deadlocked;
  std::set<std::string> violated;
  std::map<std::string, std::size_t> firings;
};

namespace detail {

inline void dfs(const RwVariant &v, const Params &p, const RwState &s, std::set<RwState> &seen, Exploration &x) {
  if (!seen.insert(s).second)
    return;
  const std::string text = render(v, s);
  x.states.insert(text);
  if (!invariant_holds(v, p, s)) {
    x.violated.insert(text);
    return;
  }
  const auto next = successors(v, p, s);
  if (next.empty())
    x.deadlocked.insert(text);
  for (const auto &[name, t] : next) {
    ++x.firings[name];
    dfs(v, p, t, seen, x);
  }
}

} // namespace detail

/// Naive recursive enumeration from the all-empty initial state.
inline Exploration explore(const RwVariant &v, const Params &p) {
  Exploration x;
  std::set<RwState> seen;
  detail::dfs(v, p, RwState{}, seen, x);
  return x;
}

/// Projected traces of length <= depth; `hidden` events are internal steps.
inline std::set<std::vector<std::string>> traces(const RwVariant &v, const Params &p,
                                                 const std::set<std::string> &hidden, std::size_t depth) {
  auto close = [&](std::set<RwState> s) {
    std::vector<RwState> work(s.begin(), s.end());
    while (!work.empty()) {
      const RwState cur = work.back();
      work.pop_back();
      if (!invariant_holds(v, p, cur))
        continue;
      for (const auto &[name, t] : successors(v, p, cur))
        if (hidden.count(name) && s.insert(t).second)
          work.push_back(t);
    }
    return s;
  };
  std::set<std::vector<std::string>> result{{}};
  std::map<std::vector<std::string>, std::set<RwState>> frontier{{{}, close({RwState{}})}};
  for (std::size_t d = 0; d < depth; ++d) {
    std::map<std::vector<std::string>, std::set<RwState>> next;
    for (const auto &[trace, states] : frontier) {
      for (const auto &s : states) {
        if (!invariant_holds(v, p, s))
          continue;
        for (const auto &[name, t] : successors(v, p, s)) {
          if (hidden.count(name))
            continue;
          auto longer = trace;
          longer.push_back(name);
          next[longer].insert(t);
        }
      }
    }
    frontier.clear();
    for (auto &[trace, states] : next) {
      result.insert(trace);
      frontier.emplace(trace, close(states));
    }
  }
  return result;
}

} // namespace oracle
