#pragma once

#include "minibee/minibee.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace testing_support {

inline std::string read_text(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path data_path(const std::string &name) {
#ifdef MINIBEE_TEST_DATA
  return std::filesystem::path(MINIBEE_TEST_DATA) / name;
#else
  return std::filesystem::path(MINIBEE_CORPUS_DIR) / ".." / "tests" / "data" / name;
#endif
}

inline minibee::AbstractSystem load_data(const std::string &name) {
  return minibee::parse_system(read_text(data_path(name)));
}

inline const minibee::Corpus &corpus() {
  static const minibee::Corpus c = minibee::load_corpus();
  return c;
}

inline minibee::Scope make_scope(int readers, int writers, std::optional<int> max_consecutive = std::nullopt) {
  minibee::Scope s;
  s.set_cards["READER"] = readers;
  s.set_cards["WRITER"] = writers;
  if (max_consecutive)
    s.constant_values["maxConsecutiveR"] = static_cast<std::uint64_t>(*max_consecutive);
  return s;
}

/// `var=value` pairs sorted by variable name, so systems that declare the same
/// variables in different orders render equal states identically.
inline std::string name_sorted(const minibee::AbstractSystem &sys, const minibee::SysState &s) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < sys.variables.size(); ++i)
    parts.push_back(sys.variables[i] + "=" + minibee::render_value(sys, s.values[i]));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto &p : parts)
    out += (out.empty() ? "" : "; ") + p;
  return out;
}

inline std::set<std::string> node_set(const minibee::StateGraph &g, bool sorted_names = false) {
  std::set<std::string> out;
  for (const auto &s : g.states)
    out.insert(sorted_names ? name_sorted(g.system(), s) : minibee::render_state(g.system(), s));
  return out;
}

inline std::set<std::string> class_set(const minibee::StateGraph &g, minibee::NodeClass c) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.classes[i] == c)
      out.insert(minibee::render_state(g.system(), g.states[i]));
  return out;
}

} // namespace testing_support
