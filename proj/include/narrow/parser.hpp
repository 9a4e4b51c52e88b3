#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "narrow/error.hpp"
#include "narrow/formula.hpp"

namespace narrow {

// Recursive-descent parser for the formula grammar
//
//   iff  ::= imp ("<->" imp)*      left associative, lowest precedence
//   imp  ::= or ("->" imp)?        right associative
//   or   ::= and ("|" and)*
//   and  ::= not ("&" not)*
//   not  ::= "!" not | atom
//   atom ::= identifier | "true" | "false" | "(" iff ")"
class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text, std::size_t first_line = 1, std::size_t first_column = 1)
      : text_(text), line_(first_line), col_(first_column) {
    advance();
  }

  Formula parse() {
    auto f = parse_iff();
    if (tok_.kind != Kind::End) fail("unexpected token");
    return f;
  }

 private:
  enum class Kind { Ident, True, False, Not, And, Or, Implies, Iff, LParen, RParen, End };
  struct Token {
    Kind kind = Kind::End;
    std::string text;
    std::size_t line = 0;
    std::size_t col = 0;
  };

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(tok_.line, tok_.col, tok_.text, what); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void advance() {
    skip_space();
    tok_ = Token{Kind::End, "", line_, col_};
    if (pos_ >= text_.size()) return;
    auto take = [&](Kind k, std::size_t n) {
      tok_.kind = k;
      tok_.text = std::string(text_.substr(pos_, n));
      pos_ += n;
      col_ += n;
    };
    char c = text_[pos_];
    auto rest = text_.substr(pos_);
    if (rest.starts_with("<->")) return take(Kind::Iff, 3);
    if (rest.starts_with("->")) return take(Kind::Implies, 2);
    switch (c) {
      case '!': return take(Kind::Not, 1);
      case '&': return take(Kind::And, 1);
      case '|': return take(Kind::Or, 1);
      case '(': return take(Kind::LParen, 1);
      case ')': return take(Kind::RParen, 1);
      default: break;
    }
    auto word = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; };
    if (word(c)) {
      std::size_t n = 0;
      while (pos_ + n < text_.size() && word(text_[pos_ + n])) ++n;
      take(Kind::Ident, n);
      if (tok_.text == "true") tok_.kind = Kind::True;
      else if (tok_.text == "false") tok_.kind = Kind::False;
      else if (!is_identifier(tok_.text)) fail("invalid identifier");
      return;
    }
    take(Kind::End, 1);
    fail("unexpected character");
  }

  Formula parse_iff() {
    auto f = parse_imp();
    while (tok_.kind == Kind::Iff) {
      advance();
      f = iff(f, parse_imp());
    }
    return f;
  }

  Formula parse_imp() {
    auto f = parse_or();
    if (tok_.kind == Kind::Implies) {
      advance();
      return implies(f, parse_imp());
    }
    return f;
  }

  Formula parse_or() {
    auto f = parse_and();
    while (tok_.kind == Kind::Or) {
      advance();
      f = lor(f, parse_and());
    }
    return f;
  }

  Formula parse_and() {
    auto f = parse_not();
    while (tok_.kind == Kind::And) {
      advance();
      f = land(f, parse_not());
    }
    return f;
  }

  Formula parse_not() {
    if (tok_.kind == Kind::Not) {
      advance();
      return lnot(parse_not());
    }
    return parse_atom();
  }

  Formula parse_atom() {
    switch (tok_.kind) {
      case Kind::Ident: {
        auto f = Formula::variable(tok_.text);
        advance();
        return f;
      }
      case Kind::True: advance(); return lit(true);
      case Kind::False: advance(); return lit(false);
      case Kind::LParen: {
        advance();
        auto f = parse_iff();
        if (tok_.kind != Kind::RParen) fail("expected ')'");
        advance();
        return f;
      }
      default: fail(tok_.kind == Kind::End ? "expected a formula" : "unexpected token");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t col_;
  Token tok_;
};

inline Formula parse(std::string_view text) { return FormulaParser(text).parse(); }

}  // namespace narrow
