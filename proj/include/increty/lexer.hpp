// Copyright 2026 The increty Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "increty/error.hpp"
#include "increty/symbol.hpp"

namespace increty::detail {

enum class TokenKind { Ident, Int, TypeVar, Punct, End };

struct Token {
  TokenKind kind;
  std::string text;
  Span span;
};

/// Tokenizer shared by the FUN and WHILE front ends. Punctuation is matched
/// longest-first; `(* ... *)` comments nest.
inline std::vector<Token> tokenize(std::string_view src) {
  static constexpr std::string_view puncts[] = {":=", "->", "<=", ">=", "(", ")", ":",
                                                ";",  "=",  "+",  "-",  "*", ",", "/",
                                                "[",  "]",  "{",  "}"};
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "(*") {
      const Span start{line, col};
      int depth = 0;
      do {
        if (i >= src.size()) throw ParseError(start, "unterminated comment");
        if (src.substr(i, 2) == "(*") {
          ++depth;
          advance(2);
        } else if (src.substr(i, 2) == "*)") {
          --depth;
          advance(2);
        } else {
          advance(1);
        }
      } while (depth > 0);
      continue;
    }
    const Span at{line, col};
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({TokenKind::Int, std::string(src.substr(i, j - i)), at});
      advance(j - i);
      continue;
    }
    auto ident_char = [&](std::size_t j) {
      return j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_');
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (ident_char(j) || (j > i && j < src.size() && src[j] == '\'')) ++j;
      out.push_back({TokenKind::Ident, std::string(src.substr(i, j - i)), at});
      advance(j - i);
      continue;
    }
    if (c == '\'') {
      std::size_t j = i + 1;
      while (ident_char(j)) ++j;
      if (j == i + 1) throw ParseError(at, "expected type variable name after '");
      out.push_back({TokenKind::TypeVar, std::string(src.substr(i, j - i)), at});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (std::string_view p : puncts) {
      if (src.substr(i, p.size()) == p) {
        out.push_back({TokenKind::Punct, std::string(p), at});
        advance(p.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(at, std::string("unexpected character '") + c + "'");
  }
  out.push_back({TokenKind::End, "", Span{line, col}});
  return out;
}

/// Cursor over a token vector with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == TokenKind::End; }
  bool is(std::string_view text) const {
    const Token& t = peek();
    return (t.kind == TokenKind::Punct || t.kind == TokenKind::Ident) && t.text == text;
  }
  bool accept(std::string_view text) {
    if (!is(text)) return false;
    ++pos_;
    return true;
  }
  const Token& expect(std::string_view text) {
    if (!is(text)) fail("expected '" + std::string(text) + "'");
    return toks_[pos_++];
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw ParseError(t.span, what + (t.kind == TokenKind::End ? " at end of input" : ", found '" + t.text + "'"));
  }
  std::size_t position() const { return pos_; }
  void rewind(std::size_t p) { pos_ = p; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace increty::detail
