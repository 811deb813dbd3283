#pragma once

// Finitary syndetic / thick / piecewise syndetic detectors on windows.
//
// A set A is r-syndetic on an interval I when every run of r consecutive
// integers inside I meets A; blocks longer than I are clamped to I, so an
// interval missing A is never syndetic. A is thick at scale L when it contains
// a solid interval of length L, and (r, L)-piecewise syndetic when some
// length-L interval of the window is r-syndetic.

#include <aplift/core_sets.hpp>

#include <algorithm>
#include <optional>
#include <vector>

namespace aplift {

struct PwsWitness {
  Nat r = 1;
  Nat start = 1;
  Nat length = 1;

  Interval interval() const { return Interval(start, start + length - 1); }
  friend bool operator==(const PwsWitness&, const PwsWitness&) = default;
};

// Gap bookkeeping of A inside I. `internal` holds the differences between
// consecutive members, sorted ascending. With no member in I, leading = |I|.
// Identity: |I| = members + sum(g - 1 for g in internal) + leading + trailing.
struct GapProfile {
  Nat length = 0;
  Nat members = 0;
  Nat leading = 0;
  Nat trailing = 0;
  std::vector<Nat> internal;

  // Longest run of consecutive non-members inside I.
  Nat longest_miss_run() const {
    Nat run = std::max(leading, trailing);
    if (!internal.empty()) run = std::max(run, internal.back() - 1);
    return run;
  }
};

namespace detail {
inline void require_interval_inside(const IntSet& a, const Interval& i) {
  if (!a.has_window() || !a.window().contains(i))
    throw OutOfWindow("interval [" + std::to_string(i.lo()) + ", " + std::to_string(i.hi()) +
                      "] is not inside the set's window");
}

inline Nat longest_one_run(const Bitmap& b) {
  Nat best = 0, cur = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    cur = b.test(i) ? cur + 1 : 0;
    best = std::max(best, cur);
  }
  return best;
}
}  // namespace detail

inline GapProfile gap_profile(const IntSet& a, const Interval& in) {
  detail::require_interval_inside(a, in);
  GapProfile g;
  g.length = in.width();
  std::optional<Nat> prev;
  for (auto x = a.next_member(in.lo()); x && *x <= in.hi(); x = a.next_member(*x + 1)) {
    if (prev)
      g.internal.push_back(*x - *prev);
    else
      g.leading = *x - in.lo();
    prev = x;
    ++g.members;
  }
  if (prev)
    g.trailing = in.hi() - *prev;
  else
    g.leading = in.width();
  std::sort(g.internal.begin(), g.internal.end());
  return g;
}

inline bool is_syndetic_on(const IntSet& a, const Interval& in, Nat r) {
  if (r < 1) throw InvalidArgument("gap bound r must be >= 1");
  return gap_profile(a, in).longest_miss_run() < std::min(r, in.width());
}

inline Nat longest_member_run(const IntSet& a) { return a.has_window() ? detail::longest_one_run(a.bits()) : 0; }

inline bool is_thick_on(const IntSet& a, Nat len) {
  if (len < 1) throw InvalidArgument("interval length L must be >= 1");
  if (!a.has_window() || len > a.window().width())
    throw InvalidArgument("interval length L exceeds the window width");
  return longest_member_run(a) >= len;
}

// Least-start length-L interval on which A is r-syndetic.
//
// A block of r non-members starting at offset p kills every candidate interval
// whose start s satisfies s <= p <= s + L - r; a prefix count of block starts
// answers each candidate in O(1).
inline std::optional<PwsWitness> find_pws_witness(const IntSet& a, Nat r, Nat len) {
  if (r < 1 || len < 1) throw InvalidArgument("r and L must be >= 1");
  if (!a.has_window() || len > a.window().width())
    throw InvalidArgument("interval length L exceeds the window width");
  const Window& w = a.window();
  const Nat block = std::min(r, len);

  const auto n = static_cast<std::size_t>(w.width());
  // bad_prefix[i] = number of empty r-blocks starting at offsets < i.
  std::vector<std::size_t> bad_prefix(n + 1, 0);
  std::vector<char> bad_start(n, 0);
  Nat zeros = 0;
  for (std::size_t q = 0; q < n; ++q) {
    zeros = a.bits().test(q) ? 0 : zeros + 1;
    if (zeros >= block) bad_start[q + 1 - static_cast<std::size_t>(block)] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) bad_prefix[i + 1] = bad_prefix[i] + static_cast<std::size_t>(bad_start[i]);

  const auto L = static_cast<std::size_t>(len);
  const auto R = static_cast<std::size_t>(block);
  for (std::size_t s = 0; s + L <= n; ++s) {
    if (bad_prefix[s + L - R + 1] - bad_prefix[s] == 0) return PwsWitness{r, w.lo() + static_cast<Nat>(s), len};
  }
  return std::nullopt;
}

inline bool verify_pws_witness(const IntSet& a, const PwsWitness& w) {
  if (w.r < 1 || w.length < 1 || w.start < 1) return false;
  if (!a.has_window() || !a.window().contains(w.interval())) return false;
  return is_syndetic_on(a, w.interval(), w.r);
}

// Least r in [1, L] admitting an (r, L) witness; witnesses are monotone in r,
// so the search bisects.
inline std::optional<Nat> min_r_for_L(const IntSet& a, Nat len) {
  if (!find_pws_witness(a, len, len)) return std::nullopt;
  Nat lo = 1, hi = len;
  while (lo < hi) {
    Nat mid = lo + (hi - lo) / 2;
    if (find_pws_witness(a, mid, len))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace aplift
