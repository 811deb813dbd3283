#pragma once

#include <aplift/error.hpp>

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aplift::detail {

struct Token {
  std::string_view text;
  std::size_t line = 1;
  std::size_t column = 1;
};

// Whitespace-delimited tokenizer over the plain-text file formats, with
// line/column tracking for error messages.
class Scanner {
 public:
  explicit Scanner(std::string_view src) : src_(src) {}

  bool at_end() {
    skip_ws();
    return pos_ >= src_.size();
  }

  std::optional<Token> peek() {
    auto save = state();
    auto t = next();
    restore(save);
    return t;
  }

  std::optional<Token> next() {
    skip_ws();
    if (pos_ >= src_.size()) return std::nullopt;
    Token t{{}, line_, col_};
    std::size_t start = pos_;
    while (pos_ < src_.size() && !is_ws(src_[pos_])) advance();
    t.text = src_.substr(start, pos_ - start);
    return t;
  }

  Token expect_any(std::string_view what) {
    auto t = next();
    if (!t) throw ParseError("unexpected end of input, expected " + std::string(what), line_, col_);
    return *t;
  }

  void expect_word(std::string_view word) {
    auto t = expect_any("'" + std::string(word) + "'");
    if (t.text != word)
      throw ParseError("expected '" + std::string(word) + "', found '" + std::string(t.text) + "'",
                       t.line, t.column);
  }

  std::int64_t read_int(std::string_view what) {
    auto t = expect_any(what);
    return to_int(t, what);
  }

  std::int64_t read_positive(std::string_view what) {
    auto t = expect_any(what);
    auto v = to_int(t, what);
    if (v < 1) throw ParseError(std::string(what) + " must be a positive integer", t.line, t.column);
    return v;
  }

  // Collects exactly n characters from {0,1}, ignoring whitespace.
  std::vector<bool> read_bits(std::size_t n) {
    std::vector<bool> bits;
    bits.reserve(n);
    while (bits.size() < n) {
      skip_ws();
      if (pos_ >= src_.size())
        throw ParseError("expected " + std::to_string(n) + " bits, found " + std::to_string(bits.size()),
                         line_, col_);
      char c = src_[pos_];
      if (c != '0' && c != '1')
        throw ParseError(std::string("expected '0' or '1', found '") + c + "'", line_, col_);
      bits.push_back(c == '1');
      advance();
    }
    return bits;
  }

  // Tokens remaining on the current line (possibly none).
  std::vector<Token> rest_of_line() {
    std::vector<Token> out;
    while (true) {
      while (pos_ < src_.size() && is_ws(src_[pos_]) && src_[pos_] != '\n') advance();
      if (pos_ >= src_.size()) break;
      if (src_[pos_] == '\n') {
        advance();
        break;
      }
      out.push_back(*next());
    }
    return out;
  }

  static std::int64_t to_int(const Token& t, std::string_view what) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || p != t.text.data() + t.text.size())
      throw ParseError("expected " + std::string(what) + ", found '" + std::string(t.text) + "'", t.line,
                       t.column);
    return v;
  }

  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

 private:
  struct State {
    std::size_t pos, line, col;
  };
  State state() const { return {pos_, line_, col_}; }
  void restore(State s) { pos_ = s.pos, line_ = s.line, col_ = s.col; }

  static bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

  void skip_ws() {
    while (pos_ < src_.size() && is_ws(src_[pos_])) advance();
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace aplift::detail
