#pragma once

#include "minibee/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace minibee {

/// A constant value as written in a scope file: a natural, a boolean, an
/// element name such as "READER2", or a list of element names.
using ScopeValue = std::variant<std::uint64_t, bool, std::string, std::vector<std::string>>;

/// Finite instantiation of a system: carrier cardinalities and constant values.
/// `nat_max` bounds naturals when enumerating every well-typed state.
struct Scope {
  std::map<std::string, int> set_cards;
  std::map<std::string, ScopeValue> constant_values;
  std::optional<std::uint64_t> nat_max;
};

inline Scope scope_from_json(const nlohmann::json &j) {
  if (!j.is_object())
    throw ScopeFileError("scope must be a JSON object");
  Scope s;
  for (const auto &[key, val] : j.items()) {
    if (key == "sets") {
      if (!val.is_object())
        throw ScopeFileError("\"sets\" must map carrier names to cardinalities");
      for (const auto &[name, card] : val.items()) {
        if (!card.is_number_integer() || card.get<long long>() < 1 || card.get<long long>() > 64)
          throw ScopeFileError("cardinality of " + name + " must be an integer in 1..64");
        s.set_cards[name] = card.get<int>();
      }
    } else if (key == "constants") {
      if (!val.is_object())
        throw ScopeFileError("\"constants\" must be an object");
      for (const auto &[name, v] : val.items()) {
        if (v.is_boolean())
          s.constant_values[name] = v.get<bool>();
        else if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0))
          s.constant_values[name] = v.get<std::uint64_t>();
        else if (v.is_string())
          s.constant_values[name] = v.get<std::string>();
        else if (v.is_array()) {
          std::vector<std::string> elems;
          for (const auto &e : v) {
            if (!e.is_string())
              throw ScopeFileError("set constant " + name + " must list element names");
            elems.push_back(e.get<std::string>());
          }
          s.constant_values[name] = std::move(elems);
        } else {
          throw ScopeFileError("unsupported value for constant " + name);
        }
      }
    } else if (key == "nat_max") {
      if (!val.is_number_integer() || val.get<long long>() < 0)
        throw ScopeFileError("\"nat_max\" must be a non-negative integer");
      s.nat_max = val.get<std::uint64_t>();
    } else {
      throw ScopeFileError("unknown scope key \"" + key + "\"");
    }
  }
  return s;
}

inline Scope parse_scope(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ScopeFileError(std::string("malformed scope JSON: ") + e.what());
  }
  return scope_from_json(j);
}

inline Scope load_scope(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ScopeFileError("cannot open scope file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scope(ss.str());
}

inline nlohmann::json scope_to_json(const Scope &s) {
  nlohmann::json j;
  j["sets"] = nlohmann::json::object();
  for (const auto &[k, v] : s.set_cards)
    j["sets"][k] = v;
  j["constants"] = nlohmann::json::object();
  for (const auto &[k, v] : s.constant_values)
    std::visit([&](const auto &x) { j["constants"][k] = x; }, v);
  if (s.nat_max)
    j["nat_max"] = *s.nat_max;
  return j;
}

} // namespace minibee
