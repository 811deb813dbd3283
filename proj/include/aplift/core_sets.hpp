#pragma once

// Windowed subsets of N = {1, 2, 3, ...}.

#include <aplift/bitmap.hpp>
#include <aplift/error.hpp>
#include <aplift/text_scanner.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace aplift {

using Nat = std::int64_t;

// Inclusive range [lo, hi] of positive integers, never empty.
class Window {
 public:
  Window(Nat lo, Nat hi) : lo_(lo), hi_(hi) {
    if (lo < 1 || hi < lo)
      throw InvalidArgument("window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                            "] must satisfy 1 <= lo <= hi");
  }

  Nat lo() const noexcept { return lo_; }
  Nat hi() const noexcept { return hi_; }
  Nat width() const noexcept { return hi_ - lo_ + 1; }
  bool contains(Nat x) const noexcept { return lo_ <= x && x <= hi_; }
  bool contains(const Window& o) const noexcept { return lo_ <= o.lo_ && o.hi_ <= hi_; }

  friend bool operator==(const Window&, const Window&) = default;

 private:
  Nat lo_;
  Nat hi_;
};

// Intervals inside a window share the representation.
using Interval = Window;

// Immutable membership bitmap over a window. A default-constructed IntSet has
// no window at all; it is what truncating translates produce once nothing of
// the window survives.
class IntSet {
 public:
  IntSet() = default;
  explicit IntSet(Window w) : window_(w), bits_(static_cast<std::size_t>(w.width())) {}
  IntSet(Window w, Bitmap bits) : window_(w), bits_(std::move(bits)) {
    if (bits_.size() != static_cast<std::size_t>(w.width()))
      throw InvalidArgument("bitmap length does not match window width");
  }

  static IntSet full(Window w) {
    Bitmap b(static_cast<std::size_t>(w.width()));
    b.set_all();
    return IntSet(w, std::move(b));
  }

  static IntSet from_elements(Window w, std::span<const Nat> xs) {
    Bitmap b(static_cast<std::size_t>(w.width()));
    for (Nat x : xs) {
      if (!w.contains(x)) throw OutOfWindow("element " + std::to_string(x) + " outside window");
      b.set(static_cast<std::size_t>(x - w.lo()));
    }
    return IntSet(w, std::move(b));
  }

  template <class Pred>
  static IntSet from_predicate(Window w, Pred&& member) {
    Bitmap b(static_cast<std::size_t>(w.width()));
    for (Nat x = w.lo(); x <= w.hi(); ++x)
      if (member(x)) b.set(static_cast<std::size_t>(x - w.lo()));
    return IntSet(w, std::move(b));
  }

  bool has_window() const noexcept { return window_.has_value(); }
  const Window& window() const {
    if (!window_) throw OutOfWindow("set has an empty window");
    return *window_;
  }

  bool contains(Nat x) const noexcept {
    return window_ && window_->contains(x) && bits_.test(static_cast<std::size_t>(x - window_->lo()));
  }

  std::size_t size() const noexcept { return bits_.count(); }
  bool empty() const noexcept { return bits_.none(); }

  // Bit i <-> element window().lo() + i.
  const Bitmap& bits() const noexcept { return bits_; }

  std::vector<Nat> elements() const {
    std::vector<Nat> out;
    if (!window_) return out;
    for (auto i = bits_.find_first(); i != Bitmap::npos; i = bits_.find_next(i + 1))
      out.push_back(window_->lo() + static_cast<Nat>(i));
    return out;
  }

  // Least member >= x, if any.
  std::optional<Nat> next_member(Nat x) const noexcept {
    if (!window_ || x > window_->hi()) return std::nullopt;
    x = std::max(x, window_->lo());
    auto i = bits_.find_next(static_cast<std::size_t>(x - window_->lo()));
    if (i == Bitmap::npos) return std::nullopt;
    return window_->lo() + static_cast<Nat>(i);
  }

  friend bool operator==(const IntSet&, const IntSet&) = default;

 private:
  std::optional<Window> window_;
  Bitmap bits_;
};

namespace detail {
inline void require_same_window(const IntSet& a, const IntSet& b) {
  if (a.window() != b.window()) throw InvalidArgument("set operation on different windows");
}
}  // namespace detail

inline IntSet set_union(const IntSet& a, const IntSet& b) {
  detail::require_same_window(a, b);
  Bitmap r = a.bits();
  r |= b.bits();
  return IntSet(a.window(), std::move(r));
}

inline IntSet set_intersection(const IntSet& a, const IntSet& b) {
  detail::require_same_window(a, b);
  Bitmap r = a.bits();
  r &= b.bits();
  return IntSet(a.window(), std::move(r));
}

// Window-relative complement.
inline IntSet complement(const IntSet& a) {
  Bitmap r = a.bits();
  r.flip();
  return IntSet(a.window(), std::move(r));
}

inline bool is_subset(const IntSet& a, const IntSet& b) {
  detail::require_same_window(a, b);
  return a.bits().subset_of(b.bits());
}

// The translate -x + A = { y >= 1 : x + y in A } on the truncated window
// [max(1, lo - x), hi - x]. Returns a windowless empty set when x >= hi.
inline IntSet shift_set(const IntSet& a, Nat x) {
  if (x < 1) throw InvalidArgument("shift amount must be >= 1");
  if (!a.has_window()) return {};
  const Window& w = a.window();
  if (x >= w.hi()) return {};
  Window out(std::max<Nat>(1, w.lo() - x), w.hi() - x);
  // Element y of the result is bit (y + x - lo) of the source.
  const Nat first_src = out.lo() + x - w.lo();
  return IntSet(out, a.bits().slice(static_cast<std::size_t>(first_src), static_cast<std::size_t>(out.width())));
}

// ---------------------------------------------------------------------------
// Set-file format
//
//   list form:    whitespace-separated positive integers; window = [min, max]
//   bitmap form:  "window lo hi" followed by hi - lo + 1 characters of 0/1
// ---------------------------------------------------------------------------

enum class SetFileStyle { bitmap, list };

namespace detail {

inline IntSet set_from_list(const std::vector<Nat>& xs) {
  if (xs.empty()) return {};
  auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  return IntSet::from_elements(Window(*mn, *mx), xs);
}

inline IntSet read_bitmap_block(Scanner& sc) {
  auto lo_tok = sc.expect_any("window lo");
  Nat lo = Scanner::to_int(lo_tok, "window lo");
  Nat hi = sc.read_int("window hi");
  if (lo < 1 || hi < lo) throw ParseError("invalid window bounds", lo_tok.line, lo_tok.column);
  Window w(lo, hi);
  auto bits = sc.read_bits(static_cast<std::size_t>(w.width()));
  Bitmap b(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) b.set(i);
  return IntSet(w, std::move(b));
}

// One set block inside a multi-block file: the bitmap form, or a list form
// occupying exactly one line.
inline IntSet read_set_block(Scanner& sc) {
  auto head = sc.peek();
  if (!head) throw ParseError("unexpected end of input, expected a set", sc.line(), sc.column());
  if (head->text == "window") {
    sc.next();
    return read_bitmap_block(sc);
  }
  std::vector<Nat> xs;
  sc.at_end();  // skips to the first token of the line
  for (auto& t : sc.rest_of_line()) {
    Nat v = Scanner::to_int(t, "positive integer");
    if (v < 1) throw ParseError("set elements must be positive", t.line, t.column);
    xs.push_back(v);
  }
  return set_from_list(xs);
}

}  // namespace detail

inline IntSet parse_set_file(std::string_view text) {
  detail::Scanner sc(text);
  auto head = sc.peek();
  if (head && head->text == "window") {
    sc.next();
    IntSet s = detail::read_bitmap_block(sc);
    if (!sc.at_end()) {
      auto t = *sc.next();
      throw ParseError("trailing input '" + std::string(t.text) + "'", t.line, t.column);
    }
    return s;
  }
  std::vector<Nat> xs;
  while (auto t = sc.next()) {
    Nat v = detail::Scanner::to_int(*t, "positive integer");
    if (v < 1) throw ParseError("set elements must be positive", t->line, t->column);
    xs.push_back(v);
  }
  return detail::set_from_list(xs);
}

inline std::string format_set_file(const IntSet& s, SetFileStyle style = SetFileStyle::bitmap) {
  std::ostringstream os;
  if (style == SetFileStyle::list || !s.has_window()) {
    bool first = true;
    for (Nat x : s.elements()) {
      os << (first ? "" : " ") << x;
      first = false;
    }
    os << '\n';
    return os.str();
  }
  const Window& w = s.window();
  os << "window " << w.lo() << ' ' << w.hi() << '\n';
  std::string bits(static_cast<std::size_t>(w.width()), '0');
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (s.bits().test(i)) bits[i] = '1';
  os << bits << '\n';
  return os.str();
}

}  // namespace aplift
