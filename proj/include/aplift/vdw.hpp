#pragma once

// van der Waerden partition checks: does every c-coloring of [1, n] contain a
// monochromatic arithmetic progression with k terms?

#include <aplift/error.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aplift {

// Node budget for the searches that can blow up. APLIFT_SEARCH_BUDGET
// overrides the default.
struct SearchBudget {
  static constexpr std::uint64_t kDefaultNodes = 50'000'000;
  std::uint64_t max_nodes = kDefaultNodes;

  static SearchBudget from_env() {
    SearchBudget b;
    if (const char* v = std::getenv("APLIFT_SEARCH_BUDGET")) {
      char* end = nullptr;
      auto n = std::strtoull(v, &end, 10);
      if (end != v && *end == '\0' && n > 0) b.max_nodes = n;
    }
    return b;
  }
};

enum class VdwVerdict { holds, fails, unknown };
enum class VdwStrategy { automatic, exhaustive, backtracking };

// Colorings are 0-based color indices for positions 1..n.
using Coloring = std::vector<int>;

struct VdwResult {
  VdwVerdict verdict = VdwVerdict::unknown;
  VdwStrategy strategy = VdwStrategy::exhaustive;
  // Lexicographically least AP-free coloring when verdict == fails.
  std::optional<Coloring> counterexample;
  std::uint64_t nodes = 0;
};

inline const char* to_string(VdwStrategy s) {
  switch (s) {
    case VdwStrategy::exhaustive: return "exhaustive";
    case VdwStrategy::backtracking: return "backtracking";
    default: return "automatic";
  }
}

// Above this many colorings the automatic strategy switches to backtracking.
inline constexpr std::uint64_t kExhaustiveLimit = std::uint64_t{1} << 20;

namespace detail {

inline void vdw_validate(int n, int colors, int k) {
  if (n < 1 || colors < 1 || k < 1) throw InvalidArgument("vdw parameters must all be >= 1");
}

// Saturating colors^n.
inline std::uint64_t coloring_count(int n, int colors) {
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(colors)) return UINT64_MAX;
    total *= static_cast<std::uint64_t>(colors);
  }
  return total;
}

// Monochromatic k-AP whose last term is position p (1-based) of a prefix.
inline std::optional<std::pair<int, int>> mono_ap_ending_at(const Coloring& col, int p, int k) {
  const int c = col[static_cast<std::size_t>(p - 1)];
  if (k == 1) return std::pair{p, 1};
  for (int d = 1; p - (k - 1) * d >= 1; ++d) {
    bool mono = true;
    for (int j = 1; j < k && mono; ++j) mono = col[static_cast<std::size_t>(p - j * d - 1)] == c;
    if (mono) return std::pair{p - (k - 1) * d, d};
  }
  return std::nullopt;
}

inline bool has_mono_ap(const Coloring& col, int k) {
  for (int p = 1; p <= static_cast<int>(col.size()); ++p)
    if (mono_ap_ending_at(col, p, k)) return true;
  return false;
}

struct Backtracker {
  int n, colors, k;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  bool exhausted = false;
  Coloring col;

  // Colors are introduced in order of first use, so each class of colorings
  // equivalent under renaming is visited once, through its lex-least member.
  bool extend(int used) {
    const int p = static_cast<int>(col.size()) + 1;
    if (p > n) return true;
    const int limit = std::min(used + 1, colors);
    for (int c = 0; c < limit; ++c) {
      if (++nodes > budget) {
        exhausted = true;
        return false;
      }
      col.push_back(c);
      if (!mono_ap_ending_at(col, p, k) && extend(std::max(used, c + 1))) return true;
      col.pop_back();
      if (exhausted) return false;
    }
    return false;
  }
};

}  // namespace detail

inline VdwResult vdw_check(int n, int colors, int k, SearchBudget budget = SearchBudget::from_env(),
                           VdwStrategy strategy = VdwStrategy::automatic) {
  detail::vdw_validate(n, colors, k);
  const std::uint64_t total = detail::coloring_count(n, colors);
  if (strategy == VdwStrategy::automatic)
    strategy = total <= kExhaustiveLimit ? VdwStrategy::exhaustive : VdwStrategy::backtracking;

  VdwResult res;
  res.strategy = strategy;
  if (strategy == VdwStrategy::exhaustive) {
    if (total > budget.max_nodes || total == UINT64_MAX) return res;
    Coloring col(static_cast<std::size_t>(n), 0);
    for (std::uint64_t it = 0; it < total; ++it) {
      ++res.nodes;
      if (!detail::has_mono_ap(col, k)) {
        res.verdict = VdwVerdict::fails;
        res.counterexample = col;
        return res;
      }
      // Odometer increment, position n least significant.
      for (int i = n - 1; i >= 0; --i) {
        if (++col[static_cast<std::size_t>(i)] < colors) break;
        col[static_cast<std::size_t>(i)] = 0;
      }
    }
    res.verdict = VdwVerdict::holds;
    return res;
  }

  detail::Backtracker bt{n, colors, k, budget.max_nodes, 0, false, {}};
  bool found = bt.extend(0);
  res.nodes = bt.nodes;
  if (bt.exhausted) return res;
  if (found) {
    res.verdict = VdwVerdict::fails;
    res.counterexample = bt.col;
  } else {
    res.verdict = VdwVerdict::holds;
  }
  return res;
}

inline bool verify_vdw_coloring(int n, int colors, int k, const Coloring& col) {
  if (static_cast<int>(col.size()) != n) return false;
  for (int c : col)
    if (c < 0 || c >= colors) return false;
  return !detail::has_mono_ap(col, k);
}

// Certificate that every coloring has a monochromatic k-AP: the leaves of the
// pruned search tree over colorings in first-use canonical form, each paired
// with the progression (a, d) that closed it.
struct RefutationLeaf {
  Coloring prefix;
  int a = 1;
  int d = 1;
  friend bool operator==(const RefutationLeaf&, const RefutationLeaf&) = default;
};

inline std::optional<std::vector<RefutationLeaf>> vdw_refutation(int n, int colors, int k,
                                                                 SearchBudget budget = SearchBudget::from_env()) {
  detail::vdw_validate(n, colors, k);
  std::vector<RefutationLeaf> leaves;
  Coloring col;
  std::uint64_t nodes = 0;
  bool ok = true;
  auto rec = [&](auto&& self, int used) -> void {
    const int p = static_cast<int>(col.size()) + 1;
    if (p > n) {
      ok = false;
      return;
    }
    for (int c = 0; c < std::min(used + 1, colors) && ok; ++c) {
      if (++nodes > budget.max_nodes) {
        ok = false;
        return;
      }
      col.push_back(c);
      if (auto ap = detail::mono_ap_ending_at(col, p, k))
        leaves.push_back({col, ap->first, ap->second});
      else
        self(self, std::max(used, c + 1));
      col.pop_back();
    }
  };
  rec(rec, 0);
  if (!ok) return std::nullopt;
  return leaves;
}

// Walks every canonical prefix; each must either be a leaf whose progression
// is monochromatic within it or have all its canonical children covered.
inline bool verify_vdw_refutation(int n, int colors, int k, const std::vector<RefutationLeaf>& leaves) {
  if (n < 1 || colors < 1 || k < 1) return false;
  std::map<Coloring, std::pair<int, int>> by_prefix;
  for (const auto& l : leaves) by_prefix.emplace(l.prefix, std::pair{l.a, l.d});
  Coloring col;
  std::uint64_t visited = 0;
  const std::uint64_t cap = 4 * (leaves.size() + 1) * static_cast<std::uint64_t>(n) + 16;
  auto rec = [&](auto&& self, int used) -> bool {
    if (++visited > cap) return false;
    if (auto it = by_prefix.find(col); it != by_prefix.end()) {
      auto [a, d] = it->second;
      const int last = a + (k - 1) * d;
      if (a < 1 || d < 1 || last > static_cast<int>(col.size())) return false;
      for (int j = 1; j < k; ++j)
        if (col[static_cast<std::size_t>(a + j * d - 1)] != col[static_cast<std::size_t>(a - 1)]) return false;
      return true;
    }
    if (static_cast<int>(col.size()) == n) return false;
    for (int c = 0; c < std::min(used + 1, colors); ++c) {
      col.push_back(c);
      bool ok = self(self, std::max(used, c + 1));
      col.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  return rec(rec, 0);
}

}  // namespace aplift
