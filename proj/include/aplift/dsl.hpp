#pragma once

// Set-description language.
//
//   expr  := ap(a, d) | interval(x, y) | multiples(k) | ipset(g, ...)
//          | thick(lo:hi, ...) | bernoulli(p, seed) | shift(expr, c)
//          | union(expr, ...) | intersect(expr, ...) | complement(expr)
//
// Whitespace is insignificant. Errors report 1-based line and column.

#include <aplift/set_expr.hpp>

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace aplift {

struct DslProgram {
  std::string source;
  ExprPtr expr;
};

namespace detail {

class DslParser {
 public:
  explicit DslParser(std::string_view src) : src_(src) {}

  ExprPtr parse_program() {
    ExprPtr e = parse_expr();
    skip_ws();
    if (pos_ < src_.size()) fail("unexpected trailing input '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  struct Pos {
    std::size_t line, column;
  };
  struct Number {
    std::string_view text;
    Pos at;
  };
  struct Range {
    Number lo, hi;
  };
  struct Arg {
    std::variant<ExprPtr, Number, Range> value;
    Pos at;
  };

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }
  [[noreturn]] static void fail_at(const std::string& msg, Pos p) { throw ParseError(msg, p.line, p.column); }

  Pos here() const { return {line_, col_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= src_.size()) fail(std::string("expected '") + c + "', found end of input");
    if (src_[pos_] != c) fail(std::string("expected '") + c + "', found '" + src_[pos_] + "'");
    advance();
  }

  std::string_view identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) advance();
    return src_.substr(start, pos_ - start);
  }

  Number number() {
    skip_ws();
    Pos at = here();
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    }
    if (pos_ == start) {
      if (pos_ >= src_.size()) fail("expected a number or expression, found end of input");
      fail(std::string("unexpected character '") + src_[pos_] + "'");
    }
    return {src_.substr(start, pos_ - start), at};
  }

  Arg argument() {
    skip_ws();
    Pos at = here();
    if (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) return {parse_expr(), at};
    Number n = number();
    if (peek_is(':')) {
      advance();
      return {Range{n, number()}, at};
    }
    return {n, at};
  }

  static Nat to_nat(const Number& n) {
    Nat v = 0;
    auto [p, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), v);
    if (ec != std::errc{} || p != n.text.data() + n.text.size())
      fail_at("expected an integer, found '" + std::string(n.text) + "'", n.at);
    return v;
  }

  static std::uint64_t to_seed(const Number& n) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), v);
    if (ec != std::errc{} || p != n.text.data() + n.text.size())
      fail_at("expected an unsigned integer seed, found '" + std::string(n.text) + "'", n.at);
    return v;
  }

  static const Number& as_number(const Arg& a, std::string_view fn) {
    if (auto* n = std::get_if<Number>(&a.value)) return *n;
    fail_at(std::string(fn) + " expects a number here", a.at);
  }
  static const ExprPtr& as_expr(const Arg& a, std::string_view fn) {
    if (auto* e = std::get_if<ExprPtr>(&a.value)) return *e;
    fail_at(std::string(fn) + " expects an expression here", a.at);
  }
  static const Range& as_range(const Arg& a, std::string_view fn) {
    if (auto* r = std::get_if<Range>(&a.value)) return *r;
    fail_at(std::string(fn) + " expects a range lo:hi here", a.at);
  }

  ExprPtr parse_expr() {
    skip_ws();
    const Pos at = here();
    if (pos_ >= src_.size()) fail("expected an expression, found end of input");
    std::string_view name = identifier();
    if (name.empty()) fail(std::string("expected an expression, found '") + src_[pos_] + "'");
    expect('(');
    std::vector<Arg> args;
    if (!peek_is(')')) {
      args.push_back(argument());
      while (peek_is(',')) {
        advance();
        args.push_back(argument());
      }
    }
    expect(')');

    auto arity = [&](std::size_t want) {
      if (args.size() != want)
        fail_at(std::string(name) + " expects " + std::to_string(want) + " argument" + (want == 1 ? "" : "s") +
                    ", got " + std::to_string(args.size()),
                at);
    };
    auto at_least = [&](std::size_t want) {
      if (args.size() < want)
        fail_at(std::string(name) + " expects at least " + std::to_string(want) + " argument" +
                    (want == 1 ? "" : "s") + ", got " + std::to_string(args.size()),
                at);
    };
    // Range violations surface as parse errors at the offending argument.
    auto guarded = [&](Pos p, auto&& make) -> ExprPtr {
      try {
        return make();
      } catch (const InvalidArgument& e) {
        fail_at(e.what(), p);
      }
    };

    if (name == "ap" || name == "interval") {
      arity(2);
      Nat x = to_nat(as_number(args[0], name)), y = to_nat(as_number(args[1], name));
      Pos p = (x < 1) ? args[0].at : args[1].at;
      return guarded(p, [&] { return name == "ap" ? expr::ap(x, y) : expr::interval(x, y); });
    }
    if (name == "multiples") {
      arity(1);
      Nat k = to_nat(as_number(args[0], name));
      return guarded(args[0].at, [&] { return expr::multiples(k); });
    }
    if (name == "ipset") {
      at_least(1);
      std::vector<Nat> gens;
      for (const auto& a : args) {
        gens.push_back(to_nat(as_number(a, name)));
        if (gens.back() < 1) fail_at("ipset generator must be a positive integer", a.at);
      }
      return guarded(at, [&] { return expr::ipset(gens); });
    }
    if (name == "thick") {
      at_least(1);
      std::vector<std::pair<Nat, Nat>> blocks;
      for (const auto& a : args) {
        const Range& r = as_range(a, name);
        blocks.emplace_back(to_nat(r.lo), to_nat(r.hi));
        guarded(a.at, [&] { return expr::thick({blocks.back()}); });
      }
      return expr::thick(std::move(blocks));
    }
    if (name == "bernoulli") {
      arity(2);
      const Number& p = as_number(args[0], name);
      std::uint64_t seed = to_seed(as_number(args[1], name));
      return guarded(p.at, [&] { return expr::bernoulli(p.text, seed); });
    }
    if (name == "shift") {
      arity(2);
      ExprPtr inner = as_expr(args[0], name);
      Nat c = to_nat(as_number(args[1], name));
      return guarded(args[1].at, [&] { return expr::shift(inner, c); });
    }
    if (name == "union" || name == "intersect") {
      at_least(1);
      std::vector<ExprPtr> cs;
      for (const auto& a : args) cs.push_back(as_expr(a, name));
      return name == "union" ? expr::set_union(std::move(cs)) : expr::intersect(std::move(cs));
    }
    if (name == "complement") {
      arity(1);
      return expr::complement(as_expr(args[0], name));
    }
    fail_at("unknown generator '" + std::string(name) + "'", at);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

struct Printer {
  std::string& out;

  void list(const std::vector<ExprPtr>& cs) {
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (i) out += ", ";
      std::visit(*this, cs[i]->node);
    }
  }

  void operator()(const node::Ap& n) { out += "ap(" + std::to_string(n.a) + ", " + std::to_string(n.d) + ")"; }
  void operator()(const node::Interval& n) {
    out += "interval(" + std::to_string(n.x) + ", " + std::to_string(n.y) + ")";
  }
  void operator()(const node::Multiples& n) { out += "multiples(" + std::to_string(n.k) + ")"; }
  void operator()(const node::IpSet& n) {
    out += "ipset(";
    for (std::size_t i = 0; i < n.generators.size(); ++i) out += (i ? ", " : "") + std::to_string(n.generators[i]);
    out += ")";
  }
  void operator()(const node::Thick& n) {
    out += "thick(";
    for (std::size_t i = 0; i < n.blocks.size(); ++i)
      out += (i ? ", " : "") + std::to_string(n.blocks[i].first) + ":" + std::to_string(n.blocks[i].second);
    out += ")";
  }
  void operator()(const node::Bernoulli& n) {
    out += "bernoulli(" + n.p.to_string() + ", " + std::to_string(n.seed) + ")";
  }
  void operator()(const node::Union& n) {
    out += "union(";
    list(n.children);
    out += ")";
  }
  void operator()(const node::Intersect& n) {
    out += "intersect(";
    list(n.children);
    out += ")";
  }
  void operator()(const node::Complement& n) {
    out += "complement(";
    std::visit(*this, n.child->node);
    out += ")";
  }
  void operator()(const node::Shift& n) {
    out += "shift(";
    std::visit(*this, n.child->node);
    out += ", " + std::to_string(n.c) + ")";
  }
};

}  // namespace detail

inline DslProgram parse_dsl(std::string_view text) {
  return DslProgram{std::string(text), detail::DslParser(text).parse_program()};
}

inline ExprPtr parse_set_expr(std::string_view text) { return parse_dsl(text).expr; }

// Canonical text of an expression; parse_dsl(to_dsl(e)) reproduces e.
inline std::string to_dsl(const SetExpr& e) {
  std::string out;
  std::visit(detail::Printer{out}, e.node);
  return out;
}
inline std::string to_dsl(const ExprPtr& e) { return to_dsl(*e); }

}  // namespace aplift
