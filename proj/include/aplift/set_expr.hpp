#pragma once

// Set expressions: an immutable tree of generators and set operations that
// evaluates deterministically against any window. Every expression denotes a
// fixed subset of N; evaluation clips it to the window.

#include <aplift/core_sets.hpp>

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace aplift {

// A probability written as an exact decimal N / 10^digits in [0, 1].
class Probability {
 public:
  static constexpr int kMaxDigits = 18;

  static Probability parse(std::string_view text) {
    auto bad = [&] { return InvalidArgument("probability '" + std::string(text) + "' must be a decimal in [0, 1]"); };
    if (text.empty()) throw bad();
    auto dot = text.find('.');
    std::string_view ip = text.substr(0, dot);
    std::string_view fp = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (ip.empty() || (dot != std::string_view::npos && fp.empty())) throw bad();
    for (char c : ip) if (c < '0' || c > '9') throw bad();
    for (char c : fp) if (c < '0' || c > '9') throw bad();
    while (!fp.empty() && fp.back() == '0') fp.remove_suffix(1);
    while (ip.size() > 1 && ip.front() == '0') ip.remove_prefix(1);
    if (fp.size() > kMaxDigits) throw InvalidArgument("probability has more than 18 decimal digits");
    if (ip != "0" && !(ip == "1" && fp.empty())) throw bad();
    Probability p;
    p.digits_ = static_cast<int>(fp.size());
    p.numerator_ = ip == "1" ? 1 : 0;
    for (char c : fp) p.numerator_ = p.numerator_ * 10 + static_cast<std::uint64_t>(c - '0');
    return p;
  }

  std::uint64_t numerator() const noexcept { return numerator_; }
  int digits() const noexcept { return digits_; }

  // Canonical decimal text: no trailing zeros, "0" and "1" for the endpoints.
  std::string to_string() const {
    if (digits_ == 0) return std::to_string(numerator_);
    std::string frac = std::to_string(numerator_);
    frac.insert(0, static_cast<std::size_t>(digits_) - frac.size(), '0');
    return "0." + frac;
  }

  // u / 2^53 < p, evaluated exactly.
  bool exceeds_unit(std::uint64_t u53) const noexcept {
    unsigned __int128 lhs = u53;
    for (int i = 0; i < digits_; ++i) lhs *= 10;
    unsigned __int128 rhs = static_cast<unsigned __int128>(numerator_) << 53;
    return lhs < rhs;
  }

  friend bool operator==(const Probability&, const Probability&) = default;

 private:
  std::uint64_t numerator_ = 0;
  int digits_ = 0;
};

struct SetExpr;
using ExprPtr = std::shared_ptr<const SetExpr>;

namespace node {
// {a, a + d, a + 2d, ...}
struct Ap { Nat a, d; };
// [x, y]
struct Interval { Nat x, y; };
// k N
struct Multiples { Nat k; };
// all nonempty finite sums of the generators
struct IpSet { std::vector<Nat> generators; };
// explicit union of solid blocks lo:hi
struct Thick { std::vector<std::pair<Nat, Nat>> blocks; };
// x is a member iff the x-th SplitMix64 output of `seed` falls below p
struct Bernoulli { Probability p; std::uint64_t seed; };
struct Union { std::vector<ExprPtr> children; };
struct Intersect { std::vector<ExprPtr> children; };
struct Complement { ExprPtr child; };
// c + E = { y : y - c in E }
struct Shift { ExprPtr child; Nat c; };
}  // namespace node

struct SetExpr {
  std::variant<node::Ap, node::Interval, node::Multiples, node::IpSet, node::Thick, node::Bernoulli,
               node::Union, node::Intersect, node::Complement, node::Shift>
      node;
};

bool operator==(const SetExpr& a, const SetExpr& b);

namespace detail {
inline bool deep_equal(const ExprPtr& a, const ExprPtr& b) { return a && b ? *a == *b : a == b; }
inline bool deep_equal(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!deep_equal(a[i], b[i])) return false;
  return true;
}

struct NodeEqual {
  bool operator()(const node::Ap& x, const node::Ap& y) const { return x.a == y.a && x.d == y.d; }
  bool operator()(const node::Interval& x, const node::Interval& y) const { return x.x == y.x && x.y == y.y; }
  bool operator()(const node::Multiples& x, const node::Multiples& y) const { return x.k == y.k; }
  bool operator()(const node::IpSet& x, const node::IpSet& y) const { return x.generators == y.generators; }
  bool operator()(const node::Thick& x, const node::Thick& y) const { return x.blocks == y.blocks; }
  bool operator()(const node::Bernoulli& x, const node::Bernoulli& y) const {
    return x.p == y.p && x.seed == y.seed;
  }
  bool operator()(const node::Union& x, const node::Union& y) const { return deep_equal(x.children, y.children); }
  bool operator()(const node::Intersect& x, const node::Intersect& y) const {
    return deep_equal(x.children, y.children);
  }
  bool operator()(const node::Complement& x, const node::Complement& y) const {
    return deep_equal(x.child, y.child);
  }
  bool operator()(const node::Shift& x, const node::Shift& y) const {
    return x.c == y.c && deep_equal(x.child, y.child);
  }
  template <class A, class B>
  bool operator()(const A&, const B&) const {
    return false;
  }
};
}  // namespace detail

inline bool operator==(const SetExpr& a, const SetExpr& b) { return std::visit(detail::NodeEqual{}, a.node, b.node); }

// Constructors. Each validates its parameters and throws InvalidArgument.
namespace expr {

namespace detail {
inline void positive(Nat v, const char* what) {
  if (v < 1) throw InvalidArgument(std::string(what) + " must be a positive integer, got " + std::to_string(v));
}
inline void children_present(const std::vector<ExprPtr>& cs, const char* what) {
  if (cs.empty()) throw InvalidArgument(std::string(what) + " needs at least one operand");
  for (const auto& c : cs)
    if (!c) throw InvalidArgument(std::string(what) + " has a null operand");
}
}  // namespace detail

inline ExprPtr ap(Nat a, Nat d) {
  detail::positive(a, "ap start");
  detail::positive(d, "ap step");
  return std::make_shared<const SetExpr>(SetExpr{node::Ap{a, d}});
}
inline ExprPtr interval(Nat x, Nat y) {
  detail::positive(x, "interval start");
  detail::positive(y, "interval end");
  if (y < x) throw InvalidArgument("interval end must be >= start");
  return std::make_shared<const SetExpr>(SetExpr{node::Interval{x, y}});
}
inline ExprPtr multiples(Nat k) {
  detail::positive(k, "multiples modulus");
  return std::make_shared<const SetExpr>(SetExpr{node::Multiples{k}});
}
inline ExprPtr ipset(std::vector<Nat> gens) {
  if (gens.empty()) throw InvalidArgument("ipset needs at least one generator");
  for (Nat g : gens) detail::positive(g, "ipset generator");
  return std::make_shared<const SetExpr>(SetExpr{node::IpSet{std::move(gens)}});
}
inline ExprPtr thick(std::vector<std::pair<Nat, Nat>> blocks) {
  if (blocks.empty()) throw InvalidArgument("thick needs at least one block");
  for (auto [lo, hi] : blocks) {
    detail::positive(lo, "thick block start");
    if (hi < lo) throw InvalidArgument("thick block end must be >= start");
  }
  return std::make_shared<const SetExpr>(SetExpr{node::Thick{std::move(blocks)}});
}
inline ExprPtr bernoulli(Probability p, std::uint64_t seed) {
  return std::make_shared<const SetExpr>(SetExpr{node::Bernoulli{p, seed}});
}
inline ExprPtr bernoulli(std::string_view p, std::uint64_t seed) { return bernoulli(Probability::parse(p), seed); }
inline ExprPtr set_union(std::vector<ExprPtr> cs) {
  detail::children_present(cs, "union");
  return std::make_shared<const SetExpr>(SetExpr{node::Union{std::move(cs)}});
}
inline ExprPtr intersect(std::vector<ExprPtr> cs) {
  detail::children_present(cs, "intersect");
  return std::make_shared<const SetExpr>(SetExpr{node::Intersect{std::move(cs)}});
}
inline ExprPtr complement(ExprPtr c) {
  detail::children_present({c}, "complement");
  return std::make_shared<const SetExpr>(SetExpr{node::Complement{std::move(c)}});
}
inline ExprPtr shift(ExprPtr c, Nat by) {
  detail::children_present({c}, "shift");
  detail::positive(by, "shift amount");
  return std::make_shared<const SetExpr>(SetExpr{node::Shift{std::move(c), by}});
}

}  // namespace expr

// SplitMix64 output number `index` (1-based) of the stream seeded with `seed`.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + index * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline bool bernoulli_member(const Probability& p, std::uint64_t seed, Nat x) noexcept {
  return p.exceeds_unit(splitmix64_at(seed, static_cast<std::uint64_t>(x)) >> 11);
}

IntSet evaluate(const SetExpr& e, Window w);
inline IntSet evaluate(const ExprPtr& e, Window w) {
  if (!e) throw InvalidArgument("null expression");
  return evaluate(*e, w);
}

// All nonempty finite sums of the generators, clipped to w. Subset sums are
// accumulated in a bitmap indexed by value, so the cost is O(k * hi / 64)
// rather than 2^k.
inline IntSet ip_set(std::span<const Nat> generators, Window w) {
  if (generators.empty()) throw InvalidArgument("ipset needs at least one generator");
  const auto n = static_cast<std::size_t>(w.hi()) + 1;
  Bitmap reach(n);
  for (Nat g : generators) {
    if (g < 1) throw InvalidArgument("ipset generator must be a positive integer");
    if (g >= static_cast<Nat>(n)) continue;
    Bitmap prev = reach;
    reach.or_shifted_up(prev, static_cast<std::size_t>(g));
    reach.set(static_cast<std::size_t>(g));
  }
  return IntSet(w, reach.slice(static_cast<std::size_t>(w.lo()), static_cast<std::size_t>(w.width())));
}

namespace detail {

struct Evaluator {
  Window w;

  IntSet operator()(const node::Ap& n) const {
    expr::ap(n.a, n.d);
    Bitmap b(static_cast<std::size_t>(w.width()));
    Nat x = n.a;
    if (x < w.lo()) x += ((w.lo() - x + n.d - 1) / n.d) * n.d;
    for (; x <= w.hi(); x += n.d) b.set(static_cast<std::size_t>(x - w.lo()));
    return IntSet(w, std::move(b));
  }
  IntSet operator()(const node::Interval& n) const {
    expr::interval(n.x, n.y);
    Bitmap b(static_cast<std::size_t>(w.width()));
    for (Nat x = std::max(n.x, w.lo()); x <= std::min(n.y, w.hi()); ++x) b.set(static_cast<std::size_t>(x - w.lo()));
    return IntSet(w, std::move(b));
  }
  IntSet operator()(const node::Multiples& n) const { return (*this)(node::Ap{n.k, n.k}); }
  IntSet operator()(const node::IpSet& n) const { return ip_set(n.generators, w); }
  IntSet operator()(const node::Thick& n) const {
    expr::thick(n.blocks);
    Bitmap b(static_cast<std::size_t>(w.width()));
    for (auto [lo, hi] : n.blocks)
      for (Nat x = std::max(lo, w.lo()); x <= std::min(hi, w.hi()); ++x) b.set(static_cast<std::size_t>(x - w.lo()));
    return IntSet(w, std::move(b));
  }
  IntSet operator()(const node::Bernoulli& n) const {
    return IntSet::from_predicate(w, [&](Nat x) { return bernoulli_member(n.p, n.seed, x); });
  }
  IntSet operator()(const node::Union& n) const {
    expr::detail::children_present(n.children, "union");
    Bitmap b(static_cast<std::size_t>(w.width()));
    for (const auto& c : n.children) b |= evaluate(*c, w).bits();
    return IntSet(w, std::move(b));
  }
  IntSet operator()(const node::Intersect& n) const {
    expr::detail::children_present(n.children, "intersect");
    Bitmap b = evaluate(*n.children.front(), w).bits();
    for (std::size_t i = 1; i < n.children.size(); ++i) b &= evaluate(*n.children[i], w).bits();
    return IntSet(w, std::move(b));
  }
  IntSet operator()(const node::Complement& n) const {
    expr::detail::children_present({n.child}, "complement");
    return aplift::complement(evaluate(*n.child, w));
  }
  IntSet operator()(const node::Shift& n) const {
    expr::shift(n.child, n.c);
    Bitmap b(static_cast<std::size_t>(w.width()));
    if (w.hi() - n.c >= 1) {
      // y in result <=> y - c in child, with y - c ranging over [max(1, lo - c), hi - c].
      Window src(std::max<Nat>(1, w.lo() - n.c), w.hi() - n.c);
      IntSet inner = evaluate(*n.child, src);
      for (Nat v : inner.elements()) b.set(static_cast<std::size_t>(v + n.c - w.lo()));
    }
    return IntSet(w, std::move(b));
  }
};

}  // namespace detail

inline IntSet evaluate(const SetExpr& e, Window w) { return std::visit(detail::Evaluator{w}, e.node); }

}  // namespace aplift
