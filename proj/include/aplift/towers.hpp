#pragma once

// Finite decreasing chains C_1 >= C_2 >= ... >= C_k and the evidence behind
// quasi-central and C-set characterizations: the translate property
//
//   for each n and x in C_n there is m with C_m subset of -x + C_n,
//
// checked on truncated windows, plus per-level largeness (piecewise syndetic
// or J-set witnesses). Lifting a chain levelwise gives B_1 >= B_2 >= ... in
// N x N, and the translate property transfers through the inclusion
//
//   C_N subset of intersection_{i=0..l} ( -(a + i b) + C_n ).

#include <aplift/ap_lift.hpp>
#include <aplift/jset.hpp>
#include <aplift/largeness.hpp>

#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace aplift {

enum class ChainKind { quasi_central, c_set };

inline const char* to_string(ChainKind k) { return k == ChainKind::quasi_central ? "quasi-central" : "c-set"; }

inline ChainKind parse_chain_kind(std::string_view s) {
  if (s == "quasi-central") return ChainKind::quasi_central;
  if (s == "c-set") return ChainKind::c_set;
  throw InvalidArgument("unknown chain kind '" + std::string(s) + "' (expected quasi-central or c-set)");
}

// Levels are indexed from 1 in every public function.
class Chain {
 public:
  Chain(std::vector<IntSet> levels, ChainKind kind) : levels_(std::move(levels)), kind_(kind) {
    if (levels_.empty()) throw InvalidArgument("chain needs at least one level");
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      if (!levels_[i].has_window() || levels_[i].empty())
        throw InvalidArgument("chain level " + std::to_string(i + 1) + " is empty");
      if (levels_[i].window() != levels_[0].window())
        throw InvalidArgument("chain level " + std::to_string(i + 1) + " has a different window");
      if (i > 0 && !is_subset(levels_[i], levels_[i - 1]))
        throw InvalidArgument("chain is not decreasing at level " + std::to_string(i + 1));
    }
  }

  std::size_t depth() const noexcept { return levels_.size(); }
  ChainKind kind() const noexcept { return kind_; }
  const Window& window() const { return levels_.front().window(); }
  const IntSet& level(std::size_t n) const {
    if (n < 1 || n > levels_.size()) throw InvalidArgument("chain level " + std::to_string(n) + " out of range");
    return levels_[n - 1];
  }
  const std::vector<IntSet>& levels() const noexcept { return levels_; }

 private:
  std::vector<IntSet> levels_;
  ChainKind kind_;
};

struct TranslateProbe {
  std::size_t level = 1;
  Nat x = 1;
  // Least m in [level, k] with C_m subset of -x + C_level on [1, hi - x];
  // absent means the chain is too shallow, not a refutation.
  std::optional<std::size_t> m;
  friend bool operator==(const TranslateProbe&, const TranslateProbe&) = default;
};

struct ChainReport {
  ChainKind kind = ChainKind::quasi_central;
  Nat x_max = 1;
  std::vector<TranslateProbe> probes;

  // Quasi-central evidence: one (r, L) witness slot per level.
  std::optional<Nat> r, L;
  std::vector<std::optional<PwsWitness>> pws;

  // C-set evidence: jsets[level - 1][family index].
  std::optional<Nat> a_max;
  std::vector<std::vector<std::optional<JWitness>>> jsets;

  std::vector<std::string> notes;

  bool translate_ok() const {
    for (const auto& p : probes)
      if (!p.m) return false;
    return true;
  }
  bool largeness_ok() const {
    for (const auto& w : pws)
      if (!w) return false;
    for (const auto& lvl : jsets)
      for (const auto& w : lvl)
        if (!w) return false;
    return true;
  }
  bool passed() const { return translate_ok() && largeness_ok(); }
};

// True iff every y in inner with y + max(shifts) <= hi has y + s in outer
// for every shift s. Both sets share a window.
inline bool inclusion_under_shifts(const IntSet& inner, const IntSet& outer, std::span<const Nat> shifts) {
  detail::require_same_window(inner, outer);
  const Window& w = inner.window();
  Nat top = 0;
  for (Nat s : shifts) {
    if (s < 1) throw InvalidArgument("translate amounts must be positive");
    top = std::max(top, s);
  }
  const Nat span_len = w.hi() - top - w.lo() + 1;
  if (span_len <= 0) return true;
  Bitmap target(static_cast<std::size_t>(w.width()));
  target.set_all();
  for (Nat s : shifts) target.and_shifted_down(outer.bits(), static_cast<std::size_t>(s));
  const auto n = static_cast<std::size_t>(span_len);
  return inner.bits().slice(0, n).subset_of(target.slice(0, n));
}

inline bool translate_inclusion_holds(const Chain& chain, std::size_t n, std::size_t m, Nat x) {
  const Nat shifts[] = {x};
  return inclusion_under_shifts(chain.level(m), chain.level(n), shifts);
}

namespace detail {
inline std::string truncation_note(Nat x_max, Nat hi) {
  return "translate inclusions C_m subset of -x + C_n checked on [1, " + std::to_string(hi) +
         " - x]; probes capped at x <= " + std::to_string(x_max);
}
}  // namespace detail

inline ChainReport check_translate_property(const Chain& chain, Nat x_max) {
  if (x_max < 1 || x_max > chain.window().hi()) throw InvalidArgument("x_max must lie in [1, window.hi]");
  ChainReport rep;
  rep.kind = chain.kind();
  rep.x_max = x_max;
  for (std::size_t n = 1; n <= chain.depth(); ++n) {
    for (auto x = chain.level(n).next_member(1); x && *x <= x_max; x = chain.level(n).next_member(*x + 1)) {
      TranslateProbe p{n, *x, std::nullopt};
      for (std::size_t m = n; m <= chain.depth() && !p.m; ++m)
        if (translate_inclusion_holds(chain, n, m, *x)) p.m = m;
      rep.probes.push_back(p);
    }
  }
  rep.notes.push_back(detail::truncation_note(x_max, chain.window().hi()));
  if (!rep.translate_ok()) rep.notes.push_back("some probes found no level m: chain depth insufficient");
  return rep;
}

inline ChainReport check_quasicentral(const Chain& chain, Nat r, Nat L, Nat x_max) {
  if (chain.kind() != ChainKind::quasi_central) throw InvalidArgument("chain is not a quasi-central candidate");
  ChainReport rep = check_translate_property(chain, x_max);
  rep.r = r;
  rep.L = L;
  for (const auto& lvl : chain.levels()) rep.pws.push_back(find_pws_witness(lvl, r, L));
  return rep;
}

inline ChainReport check_cset(const Chain& chain, const std::vector<FuncFamily>& families, Nat a_max, Nat x_max,
                              SearchBudget budget = SearchBudget::from_env()) {
  if (chain.kind() != ChainKind::c_set) throw InvalidArgument("chain is not a c-set candidate");
  ChainReport rep = check_translate_property(chain, x_max);
  rep.a_max = a_max;
  for (const auto& lvl : chain.levels()) {
    std::vector<std::optional<JWitness>> row;
    for (const auto& F : families) row.push_back(jset_witness(lvl, F, a_max, budget));
    rep.jsets.push_back(std::move(row));
  }
  return rep;
}

// Re-verifies every certificate in a report from the chain alone: each
// recorded m satisfies its inclusion, the probe list is exactly the members
// up to x_max, and every largeness witness checks out.
inline bool recheck_chain_report(const Chain& chain, const ChainReport& rep,
                                 const std::vector<FuncFamily>& families = {}) {
  if (rep.kind != chain.kind() || rep.x_max < 1 || rep.x_max > chain.window().hi()) return false;
  std::size_t idx = 0;
  for (std::size_t n = 1; n <= chain.depth(); ++n) {
    for (auto x = chain.level(n).next_member(1); x && *x <= rep.x_max; x = chain.level(n).next_member(*x + 1)) {
      if (idx >= rep.probes.size()) return false;
      const auto& p = rep.probes[idx++];
      if (p.level != n || p.x != *x) return false;
      if (p.m && (*p.m < n || *p.m > chain.depth() || !translate_inclusion_holds(chain, n, *p.m, *x))) return false;
    }
  }
  if (idx != rep.probes.size()) return false;

  if (!rep.pws.empty()) {
    if (rep.pws.size() != chain.depth() || !rep.r || !rep.L) return false;
    for (std::size_t n = 1; n <= chain.depth(); ++n) {
      const auto& w = rep.pws[n - 1];
      if (w && (w->r != *rep.r || w->length != *rep.L || !verify_pws_witness(chain.level(n), *w))) return false;
    }
  }
  if (!rep.jsets.empty()) {
    if (rep.jsets.size() != chain.depth() || !rep.a_max) return false;
    for (std::size_t n = 1; n <= chain.depth(); ++n) {
      if (rep.jsets[n - 1].size() != families.size()) return false;
      for (std::size_t f = 0; f < families.size(); ++f) {
        const auto& w = rep.jsets[n - 1][f];
        if (!w) continue;
        try {
          if (w->a > *rep.a_max || !verify_jwitness(chain.level(n), families[f], *w)) return false;
        } catch (const MalformedWitness&) {
          return false;
        }
      }
    }
  }
  return true;
}

// Levelwise lift B_n = lift(C_n, l, box); `window` is the source chain's
// window, whose upper end clips every level.
struct Chain2D {
  std::vector<Set2D> levels;
  Nat l = 1;
  Window window{1, 1};

  const Set2D& level(std::size_t n) const {
    if (n < 1 || n > levels.size()) throw InvalidArgument("lifted chain level " + std::to_string(n) + " out of range");
    return levels[n - 1];
  }
};

inline Chain2D lift_chain(const Chain& chain, Nat l, const Box2D& box) {
  Chain2D out{{}, l, chain.window()};
  for (const auto& lvl : chain.levels()) out.levels.push_back(lift(lvl, l, box));
  for (std::size_t n = 1; n < out.levels.size(); ++n)
    if (!is_subset(out.levels[n], out.levels[n - 1]))
      throw InternalFault("lifted chain is not decreasing at level " + std::to_string(n + 1));
  return out;
}

// Least N in [n, k] with C_N subset of the intersection of -(a + i b) + C_n
// over i = 0..l, on [1, hi - (a + l b)]. Requires {a, a + b, ..., a + l b}
// inside C_n.
inline std::optional<std::size_t> eq1_inclusion_search(const Chain& chain, std::size_t n, Nat a, Nat b, Nat l) {
  if (a < 1 || b < 1 || l < 1) throw InvalidArgument("a, b and l must be >= 1");
  const IntSet& cn = chain.level(n);
  std::vector<Nat> shifts;
  for (Nat i = 0; i <= l; ++i) {
    const Nat term = a + i * b;
    if (!cn.contains(term))
      throw InvalidArgument("progression term a + " + std::to_string(i) + "b = " + std::to_string(term) +
                            " is not in C_" + std::to_string(n));
    shifts.push_back(term);
  }
  for (std::size_t N = n; N <= chain.depth(); ++N)
    if (inclusion_under_shifts(chain.level(N), cn, shifts)) return N;
  return std::nullopt;
}

// Checks B_N subset of -(a, b) + B_n: every (a1, b1) in B_N whose translate
// (a1 + a, b1 + b) lies in the box, and whose progression still fits under
// the window's upper end, must land in B_n.
inline bool verify_lifted_translate(const Chain2D& chain2d, std::size_t n, std::size_t N, Nat a, Nat b) {
  if (N < n) throw InvalidArgument("N must be >= n");
  const Set2D& bn = chain2d.level(n);
  const Set2D& bN = chain2d.level(N);
  const Box2D& box = bN.box();
  const Nat hi = chain2d.window.hi();
  const auto& bits = bN.bits();
  for (auto i = bits.find_first(); i != Bitmap::npos; i = bits.find_next(i + 1)) {
    const Nat a1 = box.a_range().lo() + static_cast<Nat>(i % static_cast<std::size_t>(box.width()));
    const Nat b1 = box.d_range().lo() + static_cast<Nat>(i / static_cast<std::size_t>(box.width()));
    const Nat ta = a1 + a, tb = b1 + b;
    if (!bn.box().contains(ta, tb) || ta + chain2d.l * tb > hi) continue;
    if (!bn.contains(ta, tb)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Chain files: "chain k kind" followed by k set-file blocks (bitmap blocks, or
// list blocks of one line each).
// ---------------------------------------------------------------------------

inline Chain parse_chain_file(std::string_view text) {
  detail::Scanner sc(text);
  sc.expect_word("chain");
  Nat k = sc.read_positive("chain depth k");
  auto kind_tok = sc.expect_any("chain kind");
  ChainKind kind;
  try {
    kind = parse_chain_kind(kind_tok.text);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), kind_tok.line, kind_tok.column);
  }
  std::vector<IntSet> levels;
  std::vector<bool> listed;
  std::optional<Window> bitmap_window;
  Nat lo = 0, hi = 0;
  for (Nat i = 0; i < k; ++i) {
    auto head = sc.peek();
    listed.push_back(head && head->text != "window");
    levels.push_back(detail::read_set_block(sc));
    if (!levels.back().has_window()) continue;
    const Window& w = levels.back().window();
    if (!listed.back() && !bitmap_window) bitmap_window = w;
    lo = lo == 0 ? w.lo() : std::min(lo, w.lo());
    hi = std::max(hi, w.hi());
  }
  detail::expect_end(sc);
  // List blocks carry no window of their own: they join the bitmap levels'
  // window, or the hull of all listed elements when every level is a list.
  if (lo > 0) {
    const Window common = bitmap_window.value_or(Window(lo, hi));
    for (std::size_t i = 0; i < levels.size(); ++i)
      if (listed[i] && levels[i].has_window()) levels[i] = IntSet::from_elements(common, levels[i].elements());
  }
  return Chain(std::move(levels), kind);
}

inline std::string format_chain_file(const Chain& chain) {
  std::ostringstream os;
  os << "chain " << chain.depth() << ' ' << to_string(chain.kind()) << '\n';
  for (const auto& lvl : chain.levels()) os << format_set_file(lvl, SetFileStyle::bitmap);
  return os.str();
}

}  // namespace aplift
