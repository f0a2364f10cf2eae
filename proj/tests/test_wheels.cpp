#include <gtest/gtest.h>

#include <numeric>
#include <vector>

#include "test_support.hpp"

using namespace eulersieve;
using V = std::vector<natural>;

TEST(WheelFromPrimes, W2) {
  EXPECT_EQ(wheel_from_primes({2, 3}, 5).deltas, (V{2, 4}));
  EXPECT_EQ(wheel_from_primes({2, 3}, 5).index, 2u);
}

TEST(WheelFromPrimes, W4Shape) {
  Wheel w = wheel_from_primes({2, 3, 5, 7}, 11);
  EXPECT_EQ(w.size(), 48u);
  EXPECT_EQ(w.circumference(), 210u);
  EXPECT_EQ(w.deltas.front(), 2u);
}

TEST(WheelFromPrimes, EmptyPrefixIsW0) {
  EXPECT_EQ(wheel_from_primes({}, 2), wheel0());
}

TEST(WheelFromPrimes, WindowOverflowFails) {
  std::vector<natural> ps = oracle::first_primes(16);
  EXPECT_THROW(wheel_from_primes(ps, 59), eulersieve::overflow_error);
}

TEST(NextWheel, W3FromW2) {
  Wheel w2{{2, 4}, 2};
  Wheel w3 = next_wheel(w2, 5, 7);
  EXPECT_EQ(w3.deltas, (V{4, 2, 4, 2, 4, 6, 2, 6}));
  EXPECT_EQ(w3.index, 3u);
}

TEST(NextWheel, EmptyGivesOne) { EXPECT_EQ(next_wheel(Wheel{}, 7, 11).deltas, V{1}); }

TEST(NextWheel, W1FromW0) { EXPECT_EQ(next_wheel(wheel0(), 2, 3).deltas, V{2}); }

TEST(NextWheel1, Examples) {
  EXPECT_EQ(next_wheel1(Wheel{{2, 4}, 2}, 5).deltas, (V{4, 2, 4, 2, 4, 6, 2, 6}));
  EXPECT_EQ(next_wheel1(Wheel{{2}, 1}, 3).deltas, (V{2, 4}));
  Wheel w4 = next_wheel1(wheel_chain(3), 7);
  EXPECT_EQ(w4, wheel_from_primes({2, 3, 5, 7}, 11));
}

TEST(NextWheel1, EmptyWheelFails) { EXPECT_THROW(next_wheel1(Wheel{}, 5), std::invalid_argument); }

TEST(WheelChain, IncrementalEqualsFromScratch) {
  std::vector<natural> ps = oracle::first_primes(9);
  for (std::size_t k = 0; k <= 7; ++k) {
    Wheel w = wheel_chain(k);
    std::span<const natural> prefix(ps.data(), k);
    EXPECT_EQ(w, wheel_from_primes(prefix, ps[k])) << "k = " << k;
    EXPECT_EQ(w.circumference(), oracle::primorial(k)) << "k = " << k;
    EXPECT_EQ(w.size(), oracle::totient(oracle::primorial(k))) << "k = " << k;
  }
}

TEST(WheelChain, DeltasAreEvenBeyondW0) {
  for (std::size_t k = 1; k <= 6; ++k)
    for (natural d : wheel_chain(k).deltas)
      ASSERT_EQ(d % 2, 0u) << "k = " << k;
}

TEST(WheelChain, RollingEnumeratesCoprimes) {
  std::vector<natural> ps = oracle::first_primes(8);
  for (std::size_t k = 0; k <= 6; ++k) {
    natural start = ps[k];
    V got = take_upto(roll(wheel_chain(k), start), 100000);
    V expected;
    for (natural n = start; n <= 100000; ++n) {
      bool coprime = true;
      for (std::size_t i = 0; i < k; ++i)
        coprime = coprime && n % ps[i] != 0;
      if (coprime)
        expected.push_back(n);
    }
    EXPECT_EQ(got, expected) << "k = " << k;
  }
}

TEST(W4, MountedStream) {
  EXPECT_EQ(w4().size(), 48u);
  EXPECT_EQ(w4().index, 4u);
  EXPECT_NEAR(w4().skipped_fraction(), 0.7714, 0.0001);
  EXPECT_EQ(take(s4(), 27), (V{11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
                               67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 121}));
  auto [w, s] = precomputed_w4();
  EXPECT_EQ(w, w4());
  EXPECT_EQ(s.next(), 11u);
}

TEST(RollAt, StartsMidWheel) {
  V all = take_upto(s4(), 5000);
  for (natural x : {11, 13, 121, 211, 221, 1111}) {
    auto it = std::find(all.begin(), all.end(), natural(x));
    ASSERT_NE(it, all.end());
    V tail(it, all.end());
    EXPECT_EQ(take_upto(roll_at(w4(), 11, x), 5000), tail) << "x = " << x;
  }
}

TEST(RollAt, OffWheelFails) {
  EXPECT_THROW(roll_at(w4(), 11, 15), std::invalid_argument);
  EXPECT_THROW(roll_at(w4(), 11, 7), std::invalid_argument);
  EXPECT_THROW(roll_at(Wheel{}, 11, 13), std::invalid_argument);
}

TEST(LazyWheel, MatchesEagerChain) {
  LazyWheel w = lazy_wheel(wheel0());
  natural p = 2;
  for (std::size_t k = 1; k <= 6; ++k) {
    natural np = p + w.reader().next();
    w = next_wheel1_lazy(w, p);
    EXPECT_EQ(take(w.reader().stream(), 100000), wheel_chain(k).deltas) << "k = " << k;
    p = np;
  }
}

TEST(LazyWheel, EmptyFailsOnFirstRead) {
  LazyWheel w = next_wheel1_lazy(lazy_wheel(Wheel{}), 5);
  EXPECT_THROW(w.reader().next(), std::invalid_argument);
}

TEST(ScanWheel, AgreesWithMaterializedWheel) {
  EXPECT_EQ(take(scan_wheel({2, 3, 5, 7}, 11), 500), take(s4(), 500));
  EXPECT_EQ(take(scan_wheel({}, 2), 5), (V{2, 3, 4, 5, 6}));
  // Far beyond any materializable wheel: the first values after p_20 = 71
  // coprime to the first 19 primes are 71, 73, 79, 83, 89, 97, 101.
  auto ps = oracle::first_primes(19);
  EXPECT_EQ(take(scan_wheel(ps, 71), 7), (V{71, 73, 79, 83, 89, 97, 101}));
}
