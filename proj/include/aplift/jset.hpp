#pragma once

// Bounded J-set witness search and the transfer of a witness found against
// the family G (built from a 2D family) into a witness for the progression
// set C = { (a, d) : a, a + d, ..., a + l d in A }.

#include <aplift/ap_lift.hpp>
#include <aplift/core_sets.hpp>
#include <aplift/vdw.hpp>

#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace aplift {

using Table = std::vector<Nat>;

// Finite sequences f_1..f_m sharing the horizon T; f(t) is defined for t in [1, T].
class FuncFamily {
 public:
  explicit FuncFamily(std::vector<Table> tables) : tables_(std::move(tables)) {
    if (tables_.empty()) throw InvalidArgument("function family needs at least one function");
    const auto T = tables_.front().size();
    if (T == 0) throw InvalidArgument("function family horizon must be >= 1");
    for (const auto& f : tables_) {
      if (f.size() != T) throw InvalidArgument("all functions in a family must share the horizon");
      for (Nat v : f)
        if (v < 1) throw InvalidArgument("function values must be positive integers");
    }
  }

  std::size_t size() const noexcept { return tables_.size(); }
  Nat horizon() const noexcept { return static_cast<Nat>(tables_.front().size()); }
  const Table& operator[](std::size_t i) const { return tables_[i]; }
  const std::vector<Table>& tables() const noexcept { return tables_; }

  friend bool operator==(const FuncFamily&, const FuncFamily&) = default;

 private:
  std::vector<Table> tables_;
};

// Pairs f_i = (g_{2i-1}, g_{2i}) of sequences over [1, T].
class FuncFamily2D {
 public:
  explicit FuncFamily2D(std::vector<std::pair<Table, Table>> pairs) : pairs_(std::move(pairs)) {
    std::vector<Table> flat;
    for (auto& [x, y] : pairs_) {
      flat.push_back(x);
      flat.push_back(y);
    }
    FuncFamily check(std::move(flat));
    horizon_ = check.horizon();
  }

  std::size_t size() const noexcept { return pairs_.size(); }
  Nat horizon() const noexcept { return horizon_; }
  const std::pair<Table, Table>& operator[](std::size_t i) const { return pairs_[i]; }
  const std::vector<std::pair<Table, Table>>& pairs() const noexcept { return pairs_; }

  friend bool operator==(const FuncFamily2D&, const FuncFamily2D&) = default;

 private:
  std::vector<std::pair<Table, Table>> pairs_;
  Nat horizon_ = 0;
};

// a + sum_{t in H} f(t) in A for every f of the family. H is kept sorted.
struct JWitness {
  Nat a = 1;
  std::vector<Nat> H;
  friend bool operator==(const JWitness&, const JWitness&) = default;
};

// (a1, a2) + sum_{t in H} f_i(t) in C for every pair f_i.
struct JWitness2D {
  Nat a1 = 1;
  Nat a2 = 1;
  std::vector<Nat> H;
  friend bool operator==(const JWitness2D&, const JWitness2D&) = default;
};

namespace detail {

inline void require_valid_H(const std::vector<Nat>& H, Nat horizon) {
  if (H.empty()) throw MalformedWitness("witness index set H is empty");
  for (std::size_t i = 0; i < H.size(); ++i) {
    if (H[i] < 1 || H[i] > horizon)
      throw MalformedWitness("index " + std::to_string(H[i]) + " of H lies outside [1, " + std::to_string(horizon) + "]");
    if (i > 0 && H[i] <= H[i - 1]) throw MalformedWitness("H must be strictly increasing");
  }
}

inline Nat sum_over(const Table& f, const std::vector<Nat>& H) {
  Nat s = 0;
  for (Nat t : H) s += f[static_cast<std::size_t>(t - 1)];
  return s;
}

// Bit j set iff A contains from + j, for j in [0, n).
inline Bitmap membership_slice(const IntSet& a, Nat from, std::size_t n) {
  Bitmap out(n);
  if (!a.has_window()) return out;
  const Window& w = a.window();
  const Nat to = from + static_cast<Nat>(n) - 1;
  const Nat s = std::max(from, w.lo());
  const Nat e = std::min(to, w.hi());
  if (s > e) return out;
  Bitmap part = a.bits().slice(static_cast<std::size_t>(s - w.lo()), static_cast<std::size_t>(e - s + 1));
  out.or_shifted_up(part, static_cast<std::size_t>(s - from));
  return out;
}

// Advances H to the next subset of [1, T] of the same size in lex order.
inline bool next_combination(std::vector<Nat>& H, Nat T) {
  const auto k = H.size();
  for (std::size_t i = k; i-- > 0;) {
    if (H[i] < T - static_cast<Nat>(k - 1 - i)) {
      ++H[i];
      for (std::size_t j = i + 1; j < k; ++j) H[j] = H[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

inline bool verify_jwitness(const IntSet& a, const FuncFamily& F, const JWitness& w) {
  detail::require_valid_H(w.H, F.horizon());
  if (w.a < 1) throw MalformedWitness("witness shift a must be positive");
  for (const auto& f : F.tables())
    if (!a.contains(w.a + detail::sum_over(f, w.H))) return false;
  return true;
}

// First witness in the order (|H| ascending, H lexicographic, a ascending)
// with a in [1, a_max]. Absence means "none at this scale", never "not a J-set".
inline std::optional<JWitness> jset_witness(const IntSet& a, const FuncFamily& F, Nat a_max,
                                            SearchBudget budget = SearchBudget::from_env()) {
  if (a_max < 1) throw InvalidArgument("a_max must be >= 1");
  const Nat T = F.horizon();
  if (T > 62 || ((std::uint64_t{1} << T) - 1) * F.size() > budget.max_nodes)
    throw BudgetExceeded("J-set search over 2^" + std::to_string(T) + " index sets exceeds the search budget");
  if (!a.has_window() || a.empty()) return std::nullopt;
  const auto n = static_cast<std::size_t>(a_max);
  for (Nat k = 1; k <= T; ++k) {
    std::vector<Nat> H(static_cast<std::size_t>(k));
    std::iota(H.begin(), H.end(), Nat{1});
    do {
      Bitmap cand(n);
      cand.set_all();
      for (const auto& f : F.tables()) {
        cand &= detail::membership_slice(a, 1 + detail::sum_over(f, H), n);
        if (cand.none()) break;
      }
      if (auto j = cand.find_first(); j != Bitmap::npos) return JWitness{static_cast<Nat>(j) + 1, H};
    } while (detail::next_combination(H, T));
  }
  return std::nullopt;
}

// G = { t -> g_{2i-1}(t) + j (b + g_{2i}(t)) : i = 1..m, j = 0..l }, i outer.
inline FuncFamily build_transfer_family(const FuncFamily2D& F2D, Nat b, Nat l) {
  if (b < 1) throw InvalidArgument("b must be >= 1");
  if (l < 1) throw InvalidArgument("progression length l must be >= 1");
  std::vector<Table> G;
  G.reserve(F2D.size() * static_cast<std::size_t>(l + 1));
  for (const auto& [g_odd, g_even] : F2D.pairs())
    for (Nat j = 0; j <= l; ++j) {
      Table h(g_odd.size());
      for (std::size_t t = 0; t < h.size(); ++t) h[t] = g_odd[t] + j * (b + g_even[t]);
      G.push_back(std::move(h));
    }
  return FuncFamily(std::move(G));
}

// Checks, for every pair i, that (a1 + sum g_{2i-1}, a2 + sum g_{2i}) starts a
// progression of l + 1 terms inside A.
inline bool verify_jwitness2d(const IntSet& a, const FuncFamily2D& F2D, Nat l, const JWitness2D& w) {
  detail::require_valid_H(w.H, F2D.horizon());
  if (w.a1 < 1 || w.a2 < 1) throw MalformedWitness("witness pair must lie in N x N");
  for (const auto& [g_odd, g_even] : F2D.pairs()) {
    APWitness ap{w.a1 + detail::sum_over(g_odd, w.H), w.a2 + detail::sum_over(g_even, w.H), l};
    if (!verify_ap(a, ap)) return false;
  }
  return true;
}

// Searches G for (a, H) and returns ((a, b|H|), H). The result is re-verified
// against C; a failure there is an implementation bug.
inline std::optional<JWitness2D> transfer_witness(const IntSet& a, const FuncFamily2D& F2D, Nat b, Nat l, Nat a_max,
                                                  SearchBudget budget = SearchBudget::from_env()) {
  FuncFamily G = build_transfer_family(F2D, b, l);
  auto jw = jset_witness(a, G, a_max, budget);
  if (!jw) return std::nullopt;
  JWitness2D out{jw->a, b * static_cast<Nat>(jw->H.size()), jw->H};
  if (!verify_jwitness2d(a, F2D, l, out))
    throw InternalFault("transferred witness failed verification against the progression set");
  return out;
}

// ---------------------------------------------------------------------------
// Family files: "family m T" + m rows of T positive integers, or
// "family2d m T" + 2m rows alternating g_{2i-1}, g_{2i}.
// ---------------------------------------------------------------------------

namespace detail {
inline std::vector<Table> read_family_rows(Scanner& sc, Nat rows, Nat T) {
  std::vector<Table> out(static_cast<std::size_t>(rows), Table(static_cast<std::size_t>(T)));
  for (auto& row : out)
    for (auto& v : row) v = sc.read_positive("function value");
  return out;
}

inline void write_rows(std::ostringstream& os, const Table& row) {
  for (std::size_t t = 0; t < row.size(); ++t) os << (t ? " " : "") << row[t];
  os << '\n';
}

inline void expect_end(Scanner& sc) {
  if (!sc.at_end()) {
    auto t = *sc.next();
    throw ParseError("trailing input '" + std::string(t.text) + "'", t.line, t.column);
  }
}
}  // namespace detail

inline FuncFamily parse_family(std::string_view text) {
  detail::Scanner sc(text);
  sc.expect_word("family");
  Nat m = sc.read_positive("family size m");
  Nat T = sc.read_positive("horizon T");
  auto rows = detail::read_family_rows(sc, m, T);
  detail::expect_end(sc);
  return FuncFamily(std::move(rows));
}

inline FuncFamily2D parse_family2d(std::string_view text) {
  detail::Scanner sc(text);
  sc.expect_word("family2d");
  Nat m = sc.read_positive("family size m");
  Nat T = sc.read_positive("horizon T");
  auto rows = detail::read_family_rows(sc, 2 * m, T);
  detail::expect_end(sc);
  std::vector<std::pair<Table, Table>> pairs;
  for (std::size_t i = 0; i < rows.size(); i += 2) pairs.emplace_back(std::move(rows[i]), std::move(rows[i + 1]));
  return FuncFamily2D(std::move(pairs));
}

inline std::string format_family(const FuncFamily& F) {
  std::ostringstream os;
  os << "family " << F.size() << ' ' << F.horizon() << '\n';
  for (const auto& f : F.tables()) detail::write_rows(os, f);
  return os.str();
}

inline std::string format_family2d(const FuncFamily2D& F) {
  std::ostringstream os;
  os << "family2d " << F.size() << ' ' << F.horizon() << '\n';
  for (const auto& [x, y] : F.pairs()) {
    detail::write_rows(os, x);
    detail::write_rows(os, y);
  }
  return os.str();
}

}  // namespace aplift
