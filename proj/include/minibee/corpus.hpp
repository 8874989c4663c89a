#pragma once

#include "minibee/errors.hpp"
#include "minibee/scope.hpp"
#include "minibee/validate.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace minibee {

struct CorpusEntry {
  std::string id;
  std::filesystem::path file;
  std::string role; // abstract | refined | buggy | mutant
  std::vector<std::string> components;
  nlohmann::json expected;
  std::string source;
  AbstractSystem system;
};

struct NegativeCase {
  std::filesystem::path file;
  std::string expected_class;
  std::string source;
};

struct Corpus {
  std::filesystem::path dir;
  Scope scope;
  std::vector<CorpusEntry> entries;
  std::vector<NegativeCase> negative;

  const CorpusEntry &get(const std::string &id) const {
    for (const auto &e : entries)
      if (e.id == id)
        return e;
    throw CorpusCorrupt("no corpus entry " + id);
  }
};

inline std::filesystem::path default_corpus_dir() {
#ifdef MINIBEE_CORPUS_DIR
  return MINIBEE_CORPUS_DIR;
#else
  return "corpus";
#endif
}

namespace detail {

inline std::string read_corpus_file(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    throw CorpusCorrupt("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace detail

/// Loads manifest.json from `dir`: every entry is parsed and validated, the
/// shared scope file and the labelled negative cases are read.
inline Corpus load_corpus(const std::filesystem::path &dir = default_corpus_dir()) {
  Corpus c;
  c.dir = dir;
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(detail::read_corpus_file(dir / "manifest.json"));
    c.scope = parse_scope(detail::read_corpus_file(dir / manifest.at("scope").get<std::string>()));
  } catch (const nlohmann::json::exception &e) {
    throw CorpusCorrupt(std::string("manifest: ") + e.what());
  } catch (const ScopeFileError &e) {
    throw CorpusCorrupt(std::string("scope: ") + e.what());
  }

  for (const auto &j : manifest.at("entries")) {
    CorpusEntry e;
    try {
      e.id = j.at("id").get<std::string>();
      e.file = dir / j.at("file").get<std::string>();
      e.role = j.at("role").get<std::string>();
      if (j.contains("components"))
        e.components = j.at("components").get<std::vector<std::string>>();
      e.expected = j.value("expected", nlohmann::json::object());
    } catch (const nlohmann::json::exception &ex) {
      throw CorpusCorrupt(std::string("manifest entry: ") + ex.what());
    }
    e.source = detail::read_corpus_file(e.file);
    try {
      e.system = parse_system(e.source);
    } catch (const Error &ex) {
      throw CorpusCorrupt(e.id + ": " + ex.error_class() + ": " + ex.what());
    }
    c.entries.push_back(std::move(e));
  }

  if (manifest.contains("negative")) {
    const auto labels_path = dir / manifest.at("negative").get<std::string>();
    nlohmann::json labels;
    try {
      labels = nlohmann::json::parse(detail::read_corpus_file(labels_path));
    } catch (const nlohmann::json::exception &e) {
      throw CorpusCorrupt(std::string("negative labels: ") + e.what());
    }
    for (const auto &[file, cls] : labels.items()) {
      NegativeCase n;
      n.file = labels_path.parent_path() / file;
      n.expected_class = cls.get<std::string>();
      n.source = detail::read_corpus_file(n.file);
      c.negative.push_back(std::move(n));
    }
  }
  return c;
}

} // namespace minibee
