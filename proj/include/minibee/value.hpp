#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace minibee {

enum class ValueKind : std::uint8_t { Bool, Nat, Elem, Set };

/// A finite value. Carrier elements are numbered from 1; a set is a bitmask
/// over its carrier (bit i-1 stands for element i), so carriers hold at most
/// 64 elements.
struct Value {
  ValueKind kind = ValueKind::Nat;
  std::int32_t carrier = -1;
  std::uint64_t bits = 0;

  static Value boolean(bool b) { return {ValueKind::Bool, -1, b ? 1u : 0u}; }
  static Value natural(std::uint64_t n) { return {ValueKind::Nat, -1, n}; }
  static Value element(int carrier, std::uint64_t index) { return {ValueKind::Elem, carrier, index}; }
  static Value set(int carrier, std::uint64_t mask) { return {ValueKind::Set, carrier, mask}; }

  bool as_bool() const { return bits != 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits)); }
  bool contains(std::uint64_t index) const { return index >= 1 && index <= 64 && (bits >> (index - 1)) & 1u; }

  // Typing fixes the carrier, so the payload alone decides equality. This also
  // lets a not-yet-pinned `{}` compare equal to any empty set.
  bool operator==(const Value &o) const { return kind == o.kind && bits == o.bits; }
};

inline std::uint64_t element_bit(std::uint64_t index) { return std::uint64_t{1} << (index - 1); }

inline std::uint64_t full_mask(int card) {
  return card >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << card) - 1;
}

inline std::size_t hash_values(const std::vector<Value> &vs) {
  std::size_t h = 0xcbf29ce484222325ull;
  for (const auto &v : vs) {
    h ^= static_cast<std::size_t>(v.bits) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= static_cast<std::size_t>(v.kind);
  }
  return h;
}

/// Total assignment of values to the system's variables, in declaration order.
struct SysState {
  std::vector<Value> values;

  bool operator==(const SysState &) const = default;
};

/// Values for an event's parameters, in declaration order.
struct Binding {
  std::vector<Value> values;

  bool operator==(const Binding &) const = default;
  bool empty() const { return values.empty(); }
};

struct SysStateHash {
  std::size_t operator()(const SysState &s) const { return hash_values(s.values); }
};

} // namespace minibee
