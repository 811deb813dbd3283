#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace aplift;

namespace {

IntSet on(const char* text, Nat lo, Nat hi) { return evaluate(parse_set_expr(text), Window(lo, hi)); }

void expect_same_lift(const Set2D& got, const oracle::Grid& want) {
  const Box2D& b = got.box();
  for (Nat d = b.d_range().lo(); d <= b.d_range().hi(); ++d)
    for (Nat a = b.a_range().lo(); a <= b.a_range().hi(); ++a) ASSERT_EQ(got.contains(a, d), want.has(a, d)) << a << ',' << d;
}

Set2D even_even(Box2D box) {
  return Set2D::from_predicate(box, [](Nat a, Nat d) { return a % 2 == 0 && d % 2 == 0; });
}

}  // namespace

TEST(ApSearch, Examples) {
  auto full = ap_search(IntSet::full(Window(1, 100)), 4);
  ASSERT_TRUE(full);
  EXPECT_EQ(*full, (APWitness{1, 1, 4}));

  auto even = ap_search(on("multiples(2)", 1, 100), 3);
  ASSERT_TRUE(even);
  EXPECT_EQ(*even, (APWitness{2, 2, 3}));

  EXPECT_FALSE(ap_search(IntSet(Window(1, 10)), 1));
  EXPECT_FALSE(ap_search(IntSet(), 1));
}

TEST(ApSearch, IpSetAgreesWithOracle) {
  auto a = on("ipset(3,9,27)", 1, 40);
  auto got = ap_search(a, 2);
  auto want = oracle::ap_search(oracle::plain(a), 2);
  ASSERT_EQ(got.has_value(), want.has_value());
  // 3 9 12 27 30 36 39 holds no three-term progression.
  EXPECT_FALSE(want);
  auto two = ap_search(a, 1);
  ASSERT_TRUE(two);
  EXPECT_EQ(*two, (APWitness{9, 3, 1}));
}

TEST(ApSearch, RandomAgreesWithOracle) {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 400; ++it) {
    const Nat lo = 1 + static_cast<Nat>(rng() % 40);
    Window w(lo, lo + static_cast<Nat>(rng() % 200));
    auto a = oracle::random_set(rng, w, 0.05 + 0.1 * static_cast<double>(rng() % 9));
    const Nat l = 1 + static_cast<Nat>(rng() % 5);
    auto got = ap_search(a, l);
    auto want = oracle::ap_search(oracle::plain(a), l);
    ASSERT_EQ(got.has_value(), want.has_value());
    if (got) {
      EXPECT_EQ(got->d, want->first);
      EXPECT_EQ(got->a, want->second);
      EXPECT_TRUE(verify_ap(a, *got));
    }
  }
}

TEST(VerifyAp, Examples) {
  auto a = on("multiples(2)", 1, 100);
  EXPECT_TRUE(verify_ap(a, APWitness{2, 2, 3}));
  EXPECT_FALSE(verify_ap(a, APWitness{2, 3, 3}));
  EXPECT_FALSE(verify_ap(a, APWitness{96, 2, 3}));
  EXPECT_FALSE(verify_ap(a, APWitness{2, 0, 3}));
}

TEST(VerifyAp, RandomMatchesMembershipLoop) {
  std::mt19937_64 rng(32);
  for (int it = 0; it < 2000; ++it) {
    Window w(1, 120);
    auto a = oracle::random_set(rng, w, 0.7);
    APWitness ap{1 + static_cast<Nat>(rng() % 130), 1 + static_cast<Nat>(rng() % 40), 1 + static_cast<Nat>(rng() % 4)};
    EXPECT_EQ(verify_ap(a, ap), oracle::ap_in(oracle::plain(a), ap.a, ap.d, ap.l));
  }
}

TEST(Lift, EvenExample) {
  auto a = on("multiples(2)", 1, 40);
  Box2D box(1, 20, 1, 10);
  auto b = lift(a, 2, box);
  for (Nat d = 1; d <= 10; ++d)
    for (Nat x = 1; x <= 20; ++x) EXPECT_EQ(b.contains(x, d), x % 2 == 0 && d % 2 == 0 && x + 2 * d <= 40);
  expect_same_lift(b, oracle::lift(oracle::plain(a), 2, 1, 20, 1, 10));
}

TEST(Lift, EmptyAndFull) {
  EXPECT_TRUE(lift(IntSet(Window(1, 40)), 2, Box2D(1, 20, 1, 10)).empty());
  EXPECT_TRUE(lift(IntSet(), 2, Box2D(1, 20, 1, 10)).empty());
  auto full = lift(IntSet::full(Window(1, 40)), 1, Box2D(1, 10, 1, 10));
  EXPECT_EQ(full.size(), 100u);
}

TEST(Lift, RandomAgreesWithOracle) {
  std::mt19937_64 rng(33);
  for (int it = 0; it < 100; ++it) {
    Window w(1 + static_cast<Nat>(rng() % 20), 40 + static_cast<Nat>(rng() % 100));
    auto a = oracle::random_set(rng, w, 0.6);
    const Nat l = 1 + static_cast<Nat>(rng() % 3);
    const Nat alo = 1 + static_cast<Nat>(rng() % 30), dlo = 1 + static_cast<Nat>(rng() % 5);
    Box2D box(alo, alo + static_cast<Nat>(rng() % 150), dlo, dlo + static_cast<Nat>(rng() % 30));
    expect_same_lift(lift(a, l, box), oracle::lift(oracle::plain(a), l, box.a_range().lo(), box.a_range().hi(),
                                                   box.d_range().lo(), box.d_range().hi()));
  }
}

TEST(Lift, Properties) {
  std::mt19937_64 rng(34);
  for (int it = 0; it < 100; ++it) {
    Window w(1, 150);
    auto a = oracle::random_set(rng, w, 0.7);
    auto bigger = set_union(a, oracle::random_set(rng, w, 0.3));
    const Nat l = 1 + static_cast<Nat>(rng() % 3);
    Box2D box(1, 100, 1, 40);
    auto b = lift(a, l, box);
    EXPECT_TRUE(is_subset(lift(a, l + 1, box), b));
    EXPECT_TRUE(is_subset(b, lift(bigger, l, box)));
    for (Nat d = 1; d <= 40; ++d)
      for (Nat x = 1; x <= 100; ++x) ASSERT_EQ(b.contains(x, d), verify_ap(a, APWitness{x, d, l}));

    // Some progression exists iff a box covering every (a, d) is nonempty.
    Box2D all(1, 150, 1, 150);
    EXPECT_EQ(ap_search(a, l).has_value(), !lift(a, l, all).empty());

    // Translating A right by c translates the lift along a.
    const Nat c = 1 + static_cast<Nat>(rng() % 20);
    Window wide(1, 150 + c);
    auto moved = IntSet::from_predicate(wide, [&](Nat y) { return y > c && a.contains(y - c); });
    for (Nat d = 1; d <= 40; ++d)
      for (Nat x = 1; x <= 100; ++x)
        if (b.contains(x, d)) {
          ASSERT_TRUE(verify_ap(moved, APWitness{x + c, d, l}));
        }
  }
}

TEST(InducedBox, FitsInsideWindow) {
  for (Nat l = 1; l <= 4; ++l) {
    Window w(1, 1000);
    Box2D box = induced_box(w, l);
    EXPECT_EQ(box.a_range(), Window(1, 500));
    EXPECT_EQ(box.d_range(), Window(1, 999 / (2 * l)));
    EXPECT_LE(box.a_range().hi() + l * box.d_range().hi(), w.hi());
  }
}

TEST(Syndetic2D, Examples) {
  Box2D box(1, 40, 1, 20);
  auto b = even_even(box);
  EXPECT_TRUE(is_syndetic_2d(b, box, 2, 2));
  EXPECT_FALSE(is_syndetic_2d(b, box, 1, 1));
  EXPECT_FALSE(is_syndetic_2d(b, box, 2, 1));
  EXPECT_THROW(is_syndetic_2d(b, Box2D(1, 41, 1, 20), 2, 2), OutOfWindow);
}

TEST(Syndetic2D, LiftOfMultiplesOfThree) {
  auto a = on("multiples(3)", 1, 60);
  Box2D box(1, 30, 1, 10);
  auto b = lift(a, 2, box);
  auto g = oracle::lift(oracle::plain(a), 2, 1, 30, 1, 10);
  for (Nat r1 = 1; r1 <= 6; ++r1)
    for (Nat r2 = 1; r2 <= 6; ++r2)
      EXPECT_EQ(is_syndetic_2d(b, box, r1, r2), oracle::syndetic_2d(g, 1, 30, 1, 10, r1, r2)) << r1 << ',' << r2;
  EXPECT_TRUE(is_syndetic_2d(b, box, 3, 3));
  EXPECT_FALSE(is_syndetic_2d(b, box, 2, 3));
}

TEST(Pws2D, Examples) {
  Box2D box(1, 40, 1, 20);
  auto w = find_pws_witness_2d(even_even(box), 2, 2, 20, 10);
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, Box2D(1, 20, 1, 10));

  Set2D empty(box);
  EXPECT_FALSE(find_pws_witness_2d(empty, 1, 1, 1, 1));
  EXPECT_FALSE(find_pws_witness_2d(empty, 50, 50, 40, 20));
  EXPECT_THROW(find_pws_witness_2d(empty, 1, 1, 41, 1), InvalidArgument);
}

TEST(Pws2D, RandomAgreesWithOracle) {
  std::mt19937_64 rng(35);
  for (int it = 0; it < 150; ++it) {
    Box2D box(1 + static_cast<Nat>(rng() % 5), 10 + static_cast<Nat>(rng() % 20), 1 + static_cast<Nat>(rng() % 3),
              6 + static_cast<Nat>(rng() % 10));
    std::bernoulli_distribution coin(0.3 + 0.1 * static_cast<double>(rng() % 6));
    auto b = Set2D::from_predicate(box, [&](Nat, Nat) { return coin(rng); });
    oracle::Grid g{box.a_range().lo(), box.a_range().hi(), box.d_range().lo(), box.d_range().hi(), {}};
    for (Nat d = g.dlo; d <= g.dhi; ++d)
      for (Nat x = g.alo; x <= g.ahi; ++x)
        if (b.contains(x, d)) g.cells.insert({x, d});
    const Nat r1 = 1 + static_cast<Nat>(rng() % 4), r2 = 1 + static_cast<Nat>(rng() % 4);
    const Nat L1 = 1 + static_cast<Nat>(rng() % static_cast<std::uint64_t>(box.width()));
    const Nat L2 = 1 + static_cast<Nat>(rng() % static_cast<std::uint64_t>(box.height()));
    auto got = find_pws_witness_2d(b, r1, r2, L1, L2);
    auto want = oracle::pws_2d(g, r1, r2, L1, L2);
    ASSERT_EQ(got.has_value(), want.has_value());
    if (got) {
      EXPECT_EQ(got->a_range().lo(), want->first);
      EXPECT_EQ(got->d_range().lo(), want->second);
      EXPECT_EQ(got->width(), L1);
      EXPECT_EQ(got->height(), L2);
      EXPECT_TRUE(is_syndetic_2d(b, *got, r1, r2));
    }
  }
}

TEST(Set2DFile, RoundTrip) {
  std::mt19937_64 rng(36);
  for (int it = 0; it < 30; ++it) {
    Box2D box(1 + static_cast<Nat>(rng() % 9), 10 + static_cast<Nat>(rng() % 40), 1 + static_cast<Nat>(rng() % 3),
              4 + static_cast<Nat>(rng() % 9));
    std::bernoulli_distribution coin(0.4);
    auto b = Set2D::from_predicate(box, [&](Nat, Nat) { return coin(rng); });
    auto back = parse_set2d(format_set2d(b));
    EXPECT_EQ(back.box(), b.box());
    EXPECT_EQ(back.bits(), b.bits());
  }
}

TEST(Set2DFile, Layout) {
  auto b = Set2D::from_predicate(Box2D(2, 4, 1, 2), [](Nat a, Nat d) { return a == 3 || d == 2; });
  EXPECT_EQ(format_set2d(b), "box 2 4 1 2\n010\n111\n");
  EXPECT_THROW(parse_set2d("box 2 4 1 2\n010\n11\n"), ParseError);
  EXPECT_THROW(parse_set2d("box 2 4 1 2\n010\n111\n1"), ParseError);
}
