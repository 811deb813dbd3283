#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace aplift;

namespace {

IntSet on(const char* text, Nat lo, Nat hi) { return evaluate(parse_set_expr(text), Window(lo, hi)); }

}  // namespace

TEST(Syndetic, Multiples) {
  auto a = on("multiples(2)", 1, 100);
  EXPECT_TRUE(is_syndetic_on(a, Interval(1, 100), 2));
  EXPECT_FALSE(is_syndetic_on(a, Interval(1, 100), 1));
}

TEST(Syndetic, IpSetThresholdMatchesOracle) {
  auto a = on("ipset(3,9,27)", 1, 40);
  auto p = oracle::plain(a);
  // Members 3 9 12 27 30 36 39: the run 13..26 of non-members has length 14.
  EXPECT_EQ(gap_profile(a, Interval(1, 40)).longest_miss_run(), 14);
  for (Nat r = 1; r <= 40; ++r) EXPECT_EQ(is_syndetic_on(a, Interval(1, 40), r), oracle::syndetic(p, 1, 40, r)) << r;
  EXPECT_TRUE(is_syndetic_on(a, Interval(1, 40), 15));
  EXPECT_FALSE(is_syndetic_on(a, Interval(1, 40), 14));
}

TEST(Syndetic, EmptyIntervalIntersectionNeverPasses) {
  auto a = on("interval(50,60)", 1, 100);
  EXPECT_FALSE(is_syndetic_on(a, Interval(1, 10), 100));
  EXPECT_TRUE(is_syndetic_on(a, Interval(45, 55), 100));
}

TEST(Syndetic, RandomAgreesWithBlockScan) {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 300; ++it) {
    Window w(1 + static_cast<Nat>(rng() % 20), 30 + static_cast<Nat>(rng() % 120));
    auto a = oracle::random_set(rng, w, 0.15 + 0.1 * static_cast<double>(rng() % 6));
    auto p = oracle::plain(a);
    const Nat lo = w.lo() + static_cast<Nat>(rng() % 10), hi = w.hi() - static_cast<Nat>(rng() % 10);
    const Nat r = 1 + static_cast<Nat>(rng() % 15);
    EXPECT_EQ(is_syndetic_on(a, Interval(lo, hi), r), oracle::syndetic(p, lo, hi, r));
  }
}

TEST(Syndetic, IntervalMustLieInWindow) {
  auto a = on("multiples(2)", 10, 20);
  EXPECT_THROW(is_syndetic_on(a, Interval(5, 15), 2), OutOfWindow);
}

TEST(GapProfile, ExactIdentity) {
  std::mt19937_64 rng(22);
  for (int it = 0; it < 300; ++it) {
    Window w(1, 20 + static_cast<Nat>(rng() % 200));
    auto a = oracle::random_set(rng, w, 0.05 * static_cast<double>(1 + rng() % 19));
    const Nat lo = 1 + static_cast<Nat>(rng() % 10), hi = w.hi() - static_cast<Nat>(rng() % 10);
    auto g = gap_profile(a, Interval(lo, hi));
    Nat excess = 0;
    for (Nat d : g.internal) {
      EXPECT_GE(d, 1);
      excess += d - 1;
    }
    EXPECT_EQ(g.length, hi - lo + 1);
    EXPECT_EQ(g.length, g.members + excess + g.leading + g.trailing);
    EXPECT_TRUE(std::is_sorted(g.internal.begin(), g.internal.end()));
  }
}

TEST(Thick, Examples) {
  EXPECT_TRUE(is_thick_on(on("interval(10,30)", 1, 50), 21));
  EXPECT_FALSE(is_thick_on(on("interval(10,30)", 1, 50), 22));
  EXPECT_FALSE(is_thick_on(on("multiples(2)", 1, 500), 2));
}

TEST(Thick, SquareBlocks) {
  // Blocks [k^2, k^2 + k] for k = 1..9 have lengths k + 1; the last one is
  // [81, 90], so runs of 10 occur. Adjacent blocks never merge.
  std::vector<std::pair<Nat, Nat>> bl;
  for (Nat k = 1; k <= 9; ++k) bl.emplace_back(k * k, k * k + k);
  auto a = evaluate(expr::thick(bl), Window(1, 100));
  EXPECT_EQ(longest_member_run(a), oracle::longest_run(oracle::plain(a)));
  EXPECT_TRUE(is_thick_on(a, 9));
  EXPECT_TRUE(is_thick_on(a, 10));
  EXPECT_FALSE(is_thick_on(a, 11));
}

TEST(Pws, Examples) {
  auto w = find_pws_witness(on("multiples(2)", 1, 100), 2, 50);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->interval(), Interval(1, 50));

  auto v = find_pws_witness(on("union(interval(40,60), multiples(7))", 1, 100), 1, 21);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->interval(), Interval(40, 60));

  EXPECT_FALSE(find_pws_witness(IntSet(Window(1, 50)), 3, 10));
  EXPECT_THROW(find_pws_witness(on("multiples(2)", 1, 100), 2, 101), InvalidArgument);
}

TEST(Pws, BernoulliSeedFixesOutcome) {
  auto a = on("bernoulli(0.5, 17)", 1, 512);
  auto p = oracle::plain(a);
  auto w = find_pws_witness(a, 4, 64);
  auto s = oracle::pws_start(p, 4, 64);
  ASSERT_EQ(w.has_value(), s.has_value());
  if (w) {
    EXPECT_EQ(w->start, *s);
  }
  EXPECT_EQ(find_pws_witness(a, 4, 64), w);
}

TEST(Pws, RandomAgreesWithExhaustiveScan) {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 300; ++it) {
    Window w(1 + static_cast<Nat>(rng() % 20), 40 + static_cast<Nat>(rng() % 120));
    auto a = oracle::random_set(rng, w, 0.2 + 0.1 * static_cast<double>(rng() % 6));
    auto p = oracle::plain(a);
    const Nat r = 1 + static_cast<Nat>(rng() % 8);
    const Nat L = 1 + static_cast<Nat>(rng() % std::min<Nat>(60, w.width()));
    auto got = find_pws_witness(a, r, L);
    auto want = oracle::pws_start(p, r, L);
    ASSERT_EQ(got.has_value(), want.has_value());
    if (got) {
      EXPECT_EQ(got->start, *want);
      EXPECT_EQ(got->length, L);
      EXPECT_TRUE(verify_pws_witness(a, *got));
    }
  }
}

TEST(Pws, MonotoneInParametersAndSet) {
  std::mt19937_64 rng(24);
  for (int it = 0; it < 200; ++it) {
    Window w(1, 200);
    auto a = oracle::random_set(rng, w, 0.3);
    auto bigger = set_union(a, oracle::random_set(rng, w, 0.2));
    const Nat r = 1 + static_cast<Nat>(rng() % 6), L = 2 + static_cast<Nat>(rng() % 80);
    auto wit = find_pws_witness(a, r, L);
    if (!wit) continue;
    EXPECT_TRUE(find_pws_witness(a, r + 1, L));
    EXPECT_TRUE(find_pws_witness(a, r, L - 1));
    EXPECT_TRUE(is_syndetic_on(bigger, wit->interval(), r));
  }
}

TEST(Pws, ThickAndSyndeticGiveEveryLength) {
  std::mt19937_64 rng(25);
  for (int it = 0; it < 50; ++it) {
    Window w(1, 300);
    auto a = set_union(oracle::random_set(rng, w, 0.3), evaluate(expr::interval(100, 140), w));
    const Nat r = gap_profile(a, w).longest_miss_run() + 1;
    ASSERT_TRUE(is_thick_on(a, 41));
    ASSERT_TRUE(is_syndetic_on(a, w, r));
    for (Nat L = 1; L <= w.width(); L += 7) EXPECT_TRUE(find_pws_witness(a, r, L)) << L;
  }
}

TEST(Pws, VerifierRejectsBadWitness) {
  auto a = on("multiples(5)", 1, 100);
  EXPECT_TRUE(verify_pws_witness(a, PwsWitness{5, 1, 100}));
  EXPECT_FALSE(verify_pws_witness(a, PwsWitness{4, 1, 100}));
}

TEST(MinR, Examples) {
  EXPECT_EQ(min_r_for_L(on("multiples(3)", 1, 99), 99), 3);
  EXPECT_EQ(min_r_for_L(on("interval(1,100)", 1, 100), 100), 1);
  EXPECT_FALSE(min_r_for_L(IntSet(Window(1, 10)), 5));
}

TEST(MinR, IpSetAgreesWithBruteForce) {
  auto a = on("ipset(2,5,11)", 1, 20);
  auto p = oracle::plain(a);
  Nat want = 0;
  for (Nat r = 1; r <= 20 && !want; ++r)
    if (oracle::pws_start(p, r, 20)) want = r;
  EXPECT_EQ(min_r_for_L(a, 20), want);
  EXPECT_EQ(want, 4);
}

TEST(MinR, RandomAgreesWithBruteForce) {
  std::mt19937_64 rng(26);
  for (int it = 0; it < 100; ++it) {
    Window w(1, 60 + static_cast<Nat>(rng() % 80));
    auto a = oracle::random_set(rng, w, 0.25);
    auto p = oracle::plain(a);
    const Nat L = 1 + static_cast<Nat>(rng() % 50);
    std::optional<Nat> want;
    for (Nat r = 1; r <= w.width() && !want; ++r)
      if (oracle::pws_start(p, r, L)) want = r;
    EXPECT_EQ(min_r_for_L(a, L), want);
  }
}
