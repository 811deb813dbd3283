#pragma once

// Arithmetic progressions inside windowed sets and the lift
//
//   A  |->  { (a, d) : a, a + d, ..., a + l d in A }  subset of N x N,
//
// together with 2D block-syndeticity detectors for the lifted sets.

#include <aplift/core_sets.hpp>
#include <aplift/largeness.hpp>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace aplift {

// The progression a, a + d, ..., a + l d (l + 1 terms).
struct APWitness {
  Nat a = 1;
  Nat d = 1;
  Nat l = 1;
  friend bool operator==(const APWitness&, const APWitness&) = default;
};

// [a_lo, a_hi] x [d_lo, d_hi]; the first axis is the progression start, the
// second its common difference.
class Box2D {
 public:
  Box2D(Nat a_lo, Nat a_hi, Nat d_lo, Nat d_hi) : a_(a_lo, a_hi), d_(d_lo, d_hi) {}
  Box2D(Window a, Window d) : a_(a), d_(d) {}

  const Window& a_range() const noexcept { return a_; }
  const Window& d_range() const noexcept { return d_; }
  Nat width() const noexcept { return a_.width(); }
  Nat height() const noexcept { return d_.width(); }
  Nat area() const noexcept { return width() * height(); }
  bool contains(Nat a, Nat d) const noexcept { return a_.contains(a) && d_.contains(d); }
  bool contains(const Box2D& o) const noexcept { return a_.contains(o.a_) && d_.contains(o.d_); }

  friend bool operator==(const Box2D&, const Box2D&) = default;

 private:
  Window a_;
  Window d_;
};

// Membership bitmap over a box, row-major with one row per d.
class Set2D {
 public:
  explicit Set2D(Box2D box) : box_(box), bits_(static_cast<std::size_t>(box.area())) {}
  Set2D(Box2D box, Bitmap bits) : box_(box), bits_(std::move(bits)) {
    if (bits_.size() != static_cast<std::size_t>(box_.area()))
      throw InvalidArgument("bitmap length does not match box area");
  }

  template <class Pred>
  static Set2D from_predicate(Box2D box, Pred&& member) {
    Bitmap b(static_cast<std::size_t>(box.area()));
    for (Nat d = box.d_range().lo(); d <= box.d_range().hi(); ++d)
      for (Nat a = box.a_range().lo(); a <= box.a_range().hi(); ++a)
        if (member(a, d)) b.set(index(box, a, d));
    return Set2D(box, std::move(b));
  }

  const Box2D& box() const noexcept { return box_; }
  const Bitmap& bits() const noexcept { return bits_; }
  bool contains(Nat a, Nat d) const noexcept { return box_.contains(a, d) && bits_.test(index(box_, a, d)); }
  std::size_t size() const noexcept { return bits_.count(); }
  bool empty() const noexcept { return bits_.none(); }

  static std::size_t index(const Box2D& box, Nat a, Nat d) noexcept {
    return static_cast<std::size_t>((d - box.d_range().lo()) * box.width() + (a - box.a_range().lo()));
  }

  friend bool operator==(const Set2D&, const Set2D&) = default;

 private:
  Box2D box_;
  Bitmap bits_;
};

inline bool is_subset(const Set2D& x, const Set2D& y) {
  if (x.box() != y.box()) throw InvalidArgument("subset test on different boxes");
  return x.bits().subset_of(y.bits());
}

namespace detail {

// Bit j set iff lo + j + i d in A for every i = 0..l.
inline Bitmap progression_starts(const IntSet& a, Nat d, Nat l) {
  Bitmap acc = a.bits();
  for (Nat i = 1; i <= l && !acc.none(); ++i) acc.and_shifted_down(a.bits(), static_cast<std::size_t>(i * d));
  return acc;
}

}  // namespace detail

inline bool verify_ap(const IntSet& a, const APWitness& w) {
  if (w.a < 1 || w.d < 1 || w.l < 1 || !a.has_window()) return false;
  // Reject before overflow: the last term must fit in the window anyway.
  if (w.d > (a.window().hi() - w.a) / w.l + 1) return false;
  for (Nat i = 0; i <= w.l; ++i)
    if (!a.contains(w.a + i * w.d)) return false;
  return true;
}

// Least (d, a) in lexicographic order, found by shift-and-intersect over the
// membership bitmap for increasing d.
inline std::optional<APWitness> ap_search(const IntSet& a, Nat l) {
  if (l < 1) throw InvalidArgument("progression length l must be >= 1");
  if (!a.has_window() || a.empty()) return std::nullopt;
  const Window& w = a.window();
  for (Nat d = 1; d * l <= w.hi() - w.lo(); ++d) {
    auto first = detail::progression_starts(a, d, l).find_first();
    if (first != Bitmap::npos) return APWitness{w.lo() + static_cast<Nat>(first), d, l};
  }
  return std::nullopt;
}

// Pairs whose last term a + l d passes the window's upper end are clipped out.
inline Set2D lift(const IntSet& a, Nat l, const Box2D& box) {
  if (l < 1) throw InvalidArgument("progression length l must be >= 1");
  Bitmap out(static_cast<std::size_t>(box.area()));
  if (!a.has_window()) return Set2D(box, std::move(out));
  const Window& w = a.window();
  const Nat a_from = std::max(box.a_range().lo(), w.lo());
  const Nat a_to = std::min(box.a_range().hi(), w.hi());
  if (a_from > a_to) return Set2D(box, std::move(out));
  for (Nat d = box.d_range().lo(); d <= box.d_range().hi(); ++d) {
    if (d * l > w.hi() - w.lo()) break;
    Bitmap starts = detail::progression_starts(a, d, l);
    for (auto j = starts.find_next(static_cast<std::size_t>(a_from - w.lo()));
         j != Bitmap::npos && w.lo() + static_cast<Nat>(j) <= a_to; j = starts.find_next(j + 1))
      out.set(Set2D::index(box, w.lo() + static_cast<Nat>(j), d));
  }
  return Set2D(box, std::move(out));
}

// Largest box of starts and differences whose progressions of length l never
// leave the window: a in [lo, lo + (hi - lo) / 2], d in [1, (hi - lo) / (2 l)].
inline Box2D induced_box(const Window& w, Nat l) {
  if (l < 1) throw InvalidArgument("progression length l must be >= 1");
  const Nat half = (w.hi() - w.lo()) / 2;
  return Box2D(w.lo(), w.lo() + half, 1, std::max<Nat>(1, (w.hi() - w.lo()) / (2 * l)));
}

// ---------------------------------------------------------------------------
// 2D block syndeticity: every r1 x r2 block (r1 along a, r2 along d) lying in
// the sub-box meets B. Blocks are clamped to the sub-box like the 1D case.
// ---------------------------------------------------------------------------

namespace detail {

// Inclusive 2D prefix sums of membership over a sub-box, (w + 1) x (h + 1).
class PrefixGrid {
 public:
  PrefixGrid(const Set2D& b, const Box2D& sub)
      : w_(static_cast<std::size_t>(sub.width())), h_(static_cast<std::size_t>(sub.height())),
        sum_((w_ + 1) * (h_ + 1), 0) {
    for (std::size_t j = 0; j < h_; ++j)
      for (std::size_t i = 0; i < w_; ++i) {
        const Nat a = sub.a_range().lo() + static_cast<Nat>(i);
        const Nat d = sub.d_range().lo() + static_cast<Nat>(j);
        at(i + 1, j + 1) = (b.contains(a, d) ? 1 : 0) + at(i, j + 1) + at(i + 1, j) - at(i, j);
      }
  }
  template <class F>
  PrefixGrid(std::size_t w, std::size_t h, F&& cell) : w_(w), h_(h), sum_((w + 1) * (h + 1), 0) {
    for (std::size_t j = 0; j < h_; ++j)
      for (std::size_t i = 0; i < w_; ++i) at(i + 1, j + 1) = (cell(i, j) ? 1 : 0) + at(i, j + 1) + at(i + 1, j) - at(i, j);
  }

  // Count over cells [i0, i0 + bw) x [j0, j0 + bh).
  std::int64_t count(std::size_t i0, std::size_t j0, std::size_t bw, std::size_t bh) const {
    return at(i0 + bw, j0 + bh) - at(i0, j0 + bh) - at(i0 + bw, j0) + at(i0, j0);
  }

 private:
  std::int64_t& at(std::size_t i, std::size_t j) { return sum_[j * (w_ + 1) + i]; }
  std::int64_t at(std::size_t i, std::size_t j) const { return sum_[j * (w_ + 1) + i]; }

  std::size_t w_, h_;
  std::vector<std::int64_t> sum_;
};

}  // namespace detail

inline bool is_syndetic_2d(const Set2D& b, const Box2D& sub, Nat r1, Nat r2) {
  if (r1 < 1 || r2 < 1) throw InvalidArgument("block sizes must be >= 1");
  if (!b.box().contains(sub)) throw OutOfWindow("sub-box is not inside the set's box");
  const auto w = static_cast<std::size_t>(sub.width());
  const auto h = static_cast<std::size_t>(sub.height());
  const auto bw = static_cast<std::size_t>(std::min(r1, sub.width()));
  const auto bh = static_cast<std::size_t>(std::min(r2, sub.height()));
  detail::PrefixGrid grid(b, sub);
  for (std::size_t j = 0; j + bh <= h; ++j)
    for (std::size_t i = 0; i + bw <= w; ++i)
      if (grid.count(i, j, bw, bh) == 0) return false;
  return true;
}

// First L1 x L2 sub-box (least d origin, then least a origin) on which B is
// (r1, r2)-syndetic.
inline std::optional<Box2D> find_pws_witness_2d(const Set2D& b, Nat r1, Nat r2, Nat len1, Nat len2) {
  if (r1 < 1 || r2 < 1 || len1 < 1 || len2 < 1) throw InvalidArgument("block and sub-box sizes must be >= 1");
  const Box2D& box = b.box();
  if (len1 > box.width() || len2 > box.height()) throw InvalidArgument("sub-box dimensions exceed the box");
  const auto w = static_cast<std::size_t>(box.width());
  const auto h = static_cast<std::size_t>(box.height());
  const auto bw = static_cast<std::size_t>(std::min(r1, len1));
  const auto bh = static_cast<std::size_t>(std::min(r2, len2));
  const auto L1 = static_cast<std::size_t>(len1);
  const auto L2 = static_cast<std::size_t>(len2);

  detail::PrefixGrid members(b, box);
  // Empty blocks indexed by their corner; a sub-box is good iff no empty block
  // has its corner in [s1, s1 + L1 - bw] x [s2, s2 + L2 - bh].
  detail::PrefixGrid empty_blocks(w, h, [&](std::size_t i, std::size_t j) {
    return i + bw <= w && j + bh <= h && members.count(i, j, bw, bh) == 0;
  });
  for (std::size_t s2 = 0; s2 + L2 <= h; ++s2)
    for (std::size_t s1 = 0; s1 + L1 <= w; ++s1)
      if (empty_blocks.count(s1, s2, L1 - bw + 1, L2 - bh + 1) == 0) {
        const Nat a0 = box.a_range().lo() + static_cast<Nat>(s1);
        const Nat d0 = box.d_range().lo() + static_cast<Nat>(s2);
        return Box2D(a0, a0 + len1 - 1, d0, d0 + len2 - 1);
      }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Set2D file format: "box lo1 hi1 lo2 hi2" then one 0/1 row per d, a = column.
// ---------------------------------------------------------------------------

inline std::string format_set2d(const Set2D& s) {
  const Box2D& b = s.box();
  std::ostringstream os;
  os << "box " << b.a_range().lo() << ' ' << b.a_range().hi() << ' ' << b.d_range().lo() << ' '
     << b.d_range().hi() << '\n';
  for (Nat d = b.d_range().lo(); d <= b.d_range().hi(); ++d) {
    std::string row(static_cast<std::size_t>(b.width()), '0');
    for (Nat a = b.a_range().lo(); a <= b.a_range().hi(); ++a)
      if (s.contains(a, d)) row[static_cast<std::size_t>(a - b.a_range().lo())] = '1';
    os << row << '\n';
  }
  return os.str();
}

inline Set2D parse_set2d(std::string_view text) {
  detail::Scanner sc(text);
  sc.expect_word("box");
  auto t = sc.peek();
  Nat v[4];
  for (auto& x : v) x = sc.read_positive("box bound");
  if (v[1] < v[0] || v[3] < v[2]) throw ParseError("box bounds must satisfy lo <= hi", t->line, t->column);
  Box2D box(v[0], v[1], v[2], v[3]);
  Bitmap bits(static_cast<std::size_t>(box.area()));
  const auto w = static_cast<std::size_t>(box.width());
  for (std::size_t row = 0; row < static_cast<std::size_t>(box.height()); ++row) {
    auto tok = sc.expect_any("0/1 row");
    if (tok.text.size() != w)
      throw ParseError("row has " + std::to_string(tok.text.size()) + " cells, expected " + std::to_string(w),
                       tok.line, tok.column);
    for (std::size_t i = 0; i < w; ++i) {
      char c = tok.text[i];
      if (c != '0' && c != '1') throw ParseError("expected '0' or '1'", tok.line, tok.column + i);
      if (c == '1') bits.set(row * w + i);
    }
  }
  if (!sc.at_end()) {
    auto extra = *sc.next();
    throw ParseError("trailing input '" + std::string(extra.text) + "'", extra.line, extra.column);
  }
  return Set2D(box, std::move(bits));
}

}  // namespace aplift
