#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace minibee {

/// Base of every diagnostic raised by the library. `error_class()` is the
/// stable name used by the negative corpus and by the CLI diagnostics.
class Error : public std::runtime_error {
public:
  Error(std::string cls, const std::string &what)
      : std::runtime_error(what), class_(std::move(cls)) {}

  const std::string &error_class() const noexcept { return class_; }

private:
  std::string class_;
};

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

class SyntaxError : public Error {
public:
  SyntaxError(SourcePos pos, std::vector<std::string> expected, const std::string &found)
      : Error("SyntaxError", format(pos, expected, found)), pos_(pos),
        expected_(std::move(expected)) {}

  SourcePos position() const noexcept { return pos_; }
  const std::vector<std::string> &expected() const noexcept { return expected_; }

private:
  static std::string format(SourcePos pos, const std::vector<std::string> &expected,
                            const std::string &found) {
    std::string msg = std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                      ": syntax error: found '" + found + "'";
    if (!expected.empty()) {
      msg += ", expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0)
          msg += i + 1 == expected.size() ? " or " : ", ";
        msg += expected[i];
      }
    }
    return msg;
  }

  SourcePos pos_;
  std::vector<std::string> expected_;
};

#define MINIBEE_DEFINE_ERROR(Name)                                                       \
  class Name : public Error {                                                            \
  public:                                                                                \
    explicit Name(const std::string &what) : Error(#Name, what) {}                       \
  };

// Validation of a parsed system.
MINIBEE_DEFINE_ERROR(ScopeError)
MINIBEE_DEFINE_ERROR(TypeError)
MINIBEE_DEFINE_ERROR(DuplicateError)
MINIBEE_DEFINE_ERROR(InitError)

// Finite-scope evaluation.
MINIBEE_DEFINE_ERROR(WellDefinednessError)
MINIBEE_DEFINE_ERROR(UnresolvedConstant)
MINIBEE_DEFINE_ERROR(ScopeFileError)
MINIBEE_DEFINE_ERROR(PropertiesViolated)
MINIBEE_DEFINE_ERROR(StateSpaceTooLarge)

// Composition.
MINIBEE_DEFINE_ERROR(EventClash)
MINIBEE_DEFINE_ERROR(SharedInitConflict)
MINIBEE_DEFINE_ERROR(TypeClash)

// Animation sessions.
MINIBEE_DEFINE_ERROR(IllegalChoice)
MINIBEE_DEFINE_ERROR(EmptyHistory)

MINIBEE_DEFINE_ERROR(AlphabetError)
MINIBEE_DEFINE_ERROR(CorpusCorrupt)

#undef MINIBEE_DEFINE_ERROR

} // namespace minibee
