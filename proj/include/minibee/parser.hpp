#pragma once

#include "minibee/ast.hpp"
#include "minibee/errors.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace minibee {

enum class TokenKind : std::uint8_t { Ident, Number, Symbol, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourcePos pos;
};

/// Splits `.mbs` source into tokens. Keywords come out as identifiers and are
/// told apart by the parser.
inline std::vector<Token> tokenize(std::string_view src) {
  static const char *const symbols[] = {
      // longest first
      "<:", "/:", "\\/", "/\\", "=>", "/=", "<=", ">=", "||", ":=", ":", "=", "<", ">",
      "&",  "-",  "+",   "(",   ")",  "{",  "}",  ",",  ";",
  };
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };

  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      const SourcePos start = pos;
      const auto close = src.find("*/", i + 2);
      if (close == std::string_view::npos)
        throw SyntaxError(start, {"'*/'"}, "end of input inside comment");
      advance(close + 2 - i);
      continue;
    }
    Token tok;
    tok.pos = pos;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      tok.kind = TokenKind::Ident;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      tok.kind = TokenKind::Number;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      bool matched = false;
      for (const char *sym : symbols) {
        const std::string_view s(sym);
        if (src.substr(i, s.size()) == s) {
          tok.kind = TokenKind::Symbol;
          tok.text = std::string(s);
          advance(s.size());
          matched = true;
          break;
        }
      }
      if (!matched)
        throw SyntaxError(pos, {}, std::string(1, c));
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.pos = pos;
  out.push_back(end);
  return out;
}

inline bool is_keyword(const std::string &s) {
  static const std::set<std::string> kw = {
      "SYSTEM", "SETS",   "CONSTANTS", "PROPERTIES", "VARIABLES", "INVARIANT",
      "INITIALISATION",   "EVENTS",    "END",        "ANY",       "WHERE",
      "SELECT", "THEN",   "skip",      "or",         "not",       "card",
      "NAT",    "BOOL",   "POW",       "TRUE",       "FALSE",     "true",
      "false",
  };
  return kw.count(s) > 0;
}

namespace detail {

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  AbstractSystem system() {
    AbstractSystem sys;
    expect_kw("SYSTEM");
    sys.name = identifier();
    if (accept_kw("SETS")) {
      sys.sets.push_back(identifier());
      while (accept(";") || accept(","))
        sys.sets.push_back(identifier());
    }
    if (accept_kw("CONSTANTS"))
      sys.constants = identifier_list();
    sys.properties = accept_kw("PROPERTIES") ? predicate() : make_true();
    if (accept_kw("VARIABLES"))
      sys.variables = identifier_list();
    sys.invariant = accept_kw("INVARIANT") ? predicate() : make_true();
    if (accept_kw("INITIALISATION"))
      sys.init = substitution();
    expect_kw("EVENTS");
    if (!peek_kw("END")) {
      sys.events.push_back(event());
      while (accept(";"))
        sys.events.push_back(event());
    }
    expect_kw("END");
    if (peek().kind != TokenKind::End)
      fail({"end of input"});
    return sys;
  }

private:
  const Token &peek() const { return toks_[pos_]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token &t = peek();
    throw SyntaxError(t.pos, std::move(expected),
                      t.kind == TokenKind::End ? "end of input" : t.text);
  }

  bool peek_sym(std::string_view s) const {
    return peek().kind == TokenKind::Symbol && peek().text == s;
  }
  bool peek_kw(std::string_view s) const {
    return peek().kind == TokenKind::Ident && peek().text == s;
  }
  bool accept(std::string_view s) {
    if (!peek_sym(s))
      return false;
    ++pos_;
    return true;
  }
  bool accept_kw(std::string_view s) {
    if (!peek_kw(s))
      return false;
    ++pos_;
    return true;
  }
  void expect(std::string_view s) {
    if (!accept(s))
      fail({"'" + std::string(s) + "'"});
  }
  void expect_kw(std::string_view s) {
    if (!accept_kw(s))
      fail({std::string(s)});
  }

  std::string identifier() {
    if (peek().kind != TokenKind::Ident || is_keyword(peek().text))
      fail({"identifier"});
    return toks_[pos_++].text;
  }

  std::vector<std::string> identifier_list() {
    std::vector<std::string> out{identifier()};
    while (accept(","))
      out.push_back(identifier());
    return out;
  }

  EventDef event() {
    EventDef ev;
    ev.name = identifier();
    expect("=");
    if (accept_kw("ANY")) {
      for (auto &n : identifier_list())
        ev.params.push_back(Param{n, nullptr});
      expect_kw("WHERE");
    } else if (!accept_kw("SELECT")) {
      fail({"ANY", "SELECT"});
    }
    ev.guard = predicate();
    expect_kw("THEN");
    ev.action = substitution();
    expect_kw("END");
    return ev;
  }

  Subst substitution() {
    Subst s;
    if (accept_kw("skip"))
      return s;
    do {
      Assignment a;
      a.var = identifier();
      expect(":=");
      a.value = expression();
      s.assignments.push_back(std::move(a));
    } while (accept("||"));
    return s;
  }

  // pred := disj ('=>' disj)*
  PredPtr predicate() {
    PredPtr lhs = disjunction();
    while (accept("=>"))
      lhs = make_pred(PredKind::Implies, {lhs, disjunction()});
    return lhs;
  }

  PredPtr disjunction() {
    PredPtr lhs = conjunction();
    while (accept_kw("or"))
      lhs = make_pred(PredKind::Or, {lhs, conjunction()});
    return lhs;
  }

  PredPtr conjunction() {
    PredPtr lhs = unary_predicate();
    while (accept("&"))
      lhs = make_pred(PredKind::And, {lhs, unary_predicate()});
    return lhs;
  }

  PredPtr unary_predicate() {
    if (accept_kw("not")) {
      expect("(");
      PredPtr inner = predicate();
      expect(")");
      return make_pred(PredKind::Not, {inner});
    }
    if (accept_kw("true"))
      return make_pred(PredKind::True);
    if (accept_kw("false"))
      return make_pred(PredKind::False);
    if (peek_sym("(")) {
      // Either a parenthesized expression starting a comparison or a
      // parenthesized predicate; try the comparison first.
      const std::size_t save = pos_;
      try {
        return comparison();
      } catch (const SyntaxError &first) {
        pos_ = save;
        try {
          expect("(");
          PredPtr inner = predicate();
          expect(")");
          return inner;
        } catch (const SyntaxError &second) {
          const auto a = first.position(), b = second.position();
          if (a.line > b.line || (a.line == b.line && a.column > b.column))
            throw first;
          throw;
        }
      }
    }
    return comparison();
  }

  PredPtr comparison() {
    ExprPtr lhs = expression();
    static const std::pair<const char *, PredKind> ops[] = {
        {":", PredKind::In},   {"/:", PredKind::NotIn}, {"<:", PredKind::Subset},
        {"=", PredKind::Eq},   {"/=", PredKind::Neq},   {"<", PredKind::Lt},
        {"<=", PredKind::Le},  {">", PredKind::Gt},     {">=", PredKind::Ge},
    };
    for (const auto &[sym, kind] : ops) {
      if (accept(sym))
        return make_pred(kind, {}, {lhs, expression()});
    }
    fail({"':'", "'/:'", "'<:'", "'='", "'/='", "'<'", "'<='", "'>'", "'>='"});
  }

  // expr := term (('\/' | '/\') term)*
  ExprPtr expression() {
    ExprPtr lhs = term();
    for (;;) {
      if (accept("\\/"))
        lhs = make_expr(ExprKind::Union, {lhs, term()});
      else if (accept("/\\"))
        lhs = make_expr(ExprKind::Inter, {lhs, term()});
      else
        return lhs;
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      if (accept("+"))
        lhs = make_expr(ExprKind::Plus, {lhs, factor()});
      else if (accept("-"))
        lhs = make_expr(ExprKind::Minus, {lhs, factor()});
      else
        return lhs;
    }
  }

  ExprPtr factor() {
    const Token &t = peek();
    if (t.kind == TokenKind::Number) {
      std::uint64_t n = 0;
      const auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
      if (ec != std::errc())
        fail({"natural literal"});
      ++pos_;
      return make_nat(n);
    }
    if (accept("(")) {
      ExprPtr inner = expression();
      expect(")");
      return inner;
    }
    if (accept("{")) {
      if (accept("}"))
        return make_expr(ExprKind::EmptySet);
      std::vector<ExprPtr> elems{expression()};
      while (accept(","))
        elems.push_back(expression());
      expect("}");
      return make_expr(ExprKind::SetLit, std::move(elems));
    }
    if (accept_kw("card")) {
      expect("(");
      ExprPtr inner = expression();
      expect(")");
      return make_expr(ExprKind::Card, {inner});
    }
    if (accept_kw("TRUE"))
      return make_expr(ExprKind::BoolLit, {}, {}, 1);
    if (accept_kw("FALSE"))
      return make_expr(ExprKind::BoolLit, {}, {}, 0);
    if (accept_kw("NAT"))
      return make_expr(ExprKind::NatSet);
    if (accept_kw("BOOL"))
      return make_expr(ExprKind::BoolSet);
    if (accept_kw("POW")) {
      expect("(");
      std::string carrier = identifier();
      expect(")");
      return make_expr(ExprKind::PowSet, {}, std::move(carrier));
    }
    if (t.kind == TokenKind::Ident && !is_keyword(t.text))
      return make_ident(toks_[pos_++].text);
    fail({"expression"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

} // namespace detail

/// Syntax only: no names are resolved and no annotations are filled in.
inline AbstractSystem parse_unchecked(std::string_view text) {
  detail::Parser p(tokenize(text));
  return p.system();
}

} // namespace minibee
