#include <gtest/gtest.h>

#include <algorithm>
#include <iterator>
#include <memory>
#include <random>
#include <vector>

#include "test_support.hpp"

using namespace eulersieve;
using testing_support::random_set;
using testing_support::strictly_increasing;
using V = std::vector<natural>;

namespace {

OrderedStream multiples_of(natural p) { return arithmetic(p, p); }

V set_union(const V& a, const V& b) {
  V out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

V set_difference(const V& a, const V& b) {
  V out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

// ---- elementary streams ---------------------------------------------------

TEST(Streams, EmptyStreamYieldsEndForever) {
  OrderedStream s;
  EXPECT_EQ(s.next(), stream_end);
  EXPECT_EQ(s.next(), stream_end);
  EXPECT_TRUE(s.done());
}

TEST(Streams, PeekDoesNotConsume) {
  OrderedStream s = from(5);
  EXPECT_EQ(s.peek(), 5u);
  EXPECT_EQ(s.peek(), 5u);
  EXPECT_EQ(s.next(), 5u);
  EXPECT_EQ(s.next(), 6u);
}

TEST(Streams, TakeUptoAndDrop) {
  EXPECT_EQ(take_upto(from(3), 7), (V{3, 4, 5, 6, 7}));
  EXPECT_EQ(take(drop(2, from_values({1, 2, 3, 4})), 10), (V{3, 4}));
  EXPECT_EQ(take(drop(9, from_values({1, 2})), 3), V{});
  EXPECT_EQ(take(prepend({1, 2}, from(10)), 4), (V{1, 2, 10, 11}));
}

TEST(Streams, ScaleOverflowFails) {
  OrderedStream s = scale(natural{1} << 40, from_values({1, natural{1} << 30}));
  EXPECT_EQ(s.next(), natural{1} << 40);
  EXPECT_THROW(s.next(), eulersieve::overflow_error);
}

TEST(Streams, ArithmeticOverflowFails) {
  OrderedStream s = arithmetic(stream_end - 2, 2);
  EXPECT_EQ(s.next(), stream_end - 2);
  EXPECT_THROW(s.next(), eulersieve::overflow_error);
}

TEST(Streams, DeferBuildsOnFirstPull) {
  int built = 0;
  OrderedStream s = defer([&] {
    ++built;
    return from(1);
  });
  EXPECT_EQ(built, 0);
  EXPECT_EQ(s.next(), 1u);
  EXPECT_EQ(s.next(), 2u);
  EXPECT_EQ(built, 1);
}

TEST(Streams, NestedDefersCollapseAndKeepValues) {
  // A chain of a thousand deferred levels, each contributing one value.
  std::function<OrderedStream(natural)> level = [&](natural i) -> OrderedStream {
    return defer([&level, i]() -> OrderedStream {
      if (i == 1000)
        return OrderedStream{};
      return cons(i, level(i + 1));
    });
  };
  V got = take(level(0), 2000);
  ASSERT_EQ(got.size(), 1000u);
  EXPECT_EQ(got.front(), 0u);
  EXPECT_EQ(got.back(), 999u);
}

// ---- union ------------------------------------------------------------------

TEST(Union, HandMergeOfTwoProgressions) {
  EXPECT_EQ(take(union_(multiples_of(2), multiples_of(3)), 8), (V{2, 3, 4, 6, 8, 9, 10, 12}));
}

TEST(Union, Idempotent) {
  V xs{1, 4, 9, 16, 25};
  EXPECT_EQ(take(union_(from_values(xs), from_values(xs)), 10), xs);
}

TEST(Union, ThreeWayMergeUpTo30EmitsSharedValuesOnce) {
  OrderedStream u = union_(union_(multiples_of(2), multiples_of(3)), multiples_of(5));
  V got = take_upto(u, 30);
  V expected;
  for (natural n = 2; n <= 30; ++n)
    if (n % 2 == 0 || n % 3 == 0 || n % 5 == 0)
      expected.push_back(n);
  EXPECT_EQ(got, expected);
  EXPECT_EQ(got.size(), 22u);
  EXPECT_EQ(std::count(got.begin(), got.end(), 30u), 1);
}

TEST(Union, CountsComparisonsWhenInstrumented) {
  Instrument inst;
  take(union_(from_values({1, 3}), from_values({2}), &inst), 5);
  EXPECT_GT(inst.comparisons, 0u);
}

// ---- dUnion -----------------------------------------------------------------

TEST(DUnion, DisjointMerge) {
  EXPECT_EQ(take(d_union(from_values({4, 8, 16}), from_values({9, 27})), 10),
            (V{4, 8, 9, 16, 27}));
}

TEST(DUnion, WithEmpty) {
  EXPECT_EQ(take(d_union(from_values({1, 2, 3}), empty_stream()), 10), (V{1, 2, 3}));
  EXPECT_EQ(take(d_union(empty_stream(), from_values({1, 2, 3})), 10), (V{1, 2, 3}));
}

TEST(DUnion, FirstTwoErasedSetsBelow50) {
  auto sets = oracle::euler_sets_brute_force(2, 50);
  V got = take_upto(d_union(from_values(sets.erased[0]), from_values(sets.erased[1])), 50);
  EXPECT_EQ(take(from_values(got), 9), (V{4, 6, 8, 9, 10, 12, 14, 15, 16}));
  EXPECT_EQ(got, set_union(sets.erased[0], sets.erased[1]));
}

TEST(DUnion, ReleaseBuildEmitsSecondCopyOnEqualHeads) {
  if constexpr (checked_build) {
    GTEST_SKIP() << "precondition checks are enabled in this build";
  } else {
    EXPECT_EQ(take(d_union(from_values({1, 5}), from_values({5, 7})), 10), (V{1, 5, 5, 7}));
  }
}

// ---- unionP / dUnionP -------------------------------------------------------

TEST(UnionP, EmitsHeadBeforePullingSecondArgument) {
  bool forced = false;
  OrderedStream ys = defer([&] {
    forced = true;
    return from_values({9, 10});
  });
  OrderedStream u = union_p(from_values({4, 6}), std::move(ys));
  EXPECT_EQ(u.next(), 4u);
  EXPECT_FALSE(forced);
  EXPECT_EQ(u.next(), 6u);
  EXPECT_TRUE(forced);
}

TEST(UnionP, DisjointFormOnSingleton) {
  EXPECT_EQ(take(d_union_p(from_values({3}), from_values({5, 8})), 5), (V{3, 5, 8}));
  EXPECT_EQ(take(d_union_p(empty_stream(), from_values({5, 8})), 5), (V{5, 8}));
}

TEST(FoldUnionP, ThreeStreams) {
  V got = take_upto(fold_union_p(
                        [i = 0]() mutable -> std::optional<OrderedStream> {
                          switch (i++) {
                            case 0: return arithmetic(4, 4);
                            case 1: return from_values({9, 27});
                            case 2: return arithmetic(25, 25);
                            default: return std::nullopt;
                          }
                        },
                        false),
                    30);
  V four{4, 8, 12, 16, 20, 24, 28};
  V expected = set_union(set_union(four, V{9, 27}), V{25});
  EXPECT_EQ(got, expected);
}

TEST(FoldUnionP, SingleStream) {
  V got = take(fold_union_p(
                   [i = 0]() mutable -> std::optional<OrderedStream> {
                     if (i++ == 0)
                       return from_values({2, 3, 5});
                     return std::nullopt;
                   },
                   true),
               10);
  EXPECT_EQ(got, (V{2, 3, 5}));
}

TEST(FoldUnionP, BirdCompositesBelow100AreTheComplementOfThePrimes) {
  auto ps = oracle::primes_up_to(100);
  std::size_t i = 0;
  OrderedStream composites = fold_union_p(
      [&]() -> std::optional<OrderedStream> {
        if (i == ps.size())
          return std::nullopt;
        natural p = ps[i++];
        return arithmetic(p * p, p);
      },
      false);
  EXPECT_EQ(take_upto(composites, 100), oracle::composites_up_to(100));
}

// Pulling the composites up to v forces at most pi(sqrt(v)) + 1 inner streams.
TEST(FoldUnionP, ForcesBoundedNumberOfStreams) {
  auto ps = oracle::primes_up_to(20000);
  Instrument inst;
  std::size_t i = 0;
  OrderedStream composites = fold_union_p(
      [&]() -> std::optional<OrderedStream> {
        natural p = ps[i++];
        return arithmetic(p * p, p);
      },
      false, &inst);
  for (int k = 0; k < 10000; ++k) {
    natural v = composites.next();
    ASSERT_LE(inst.forced_streams, oracle::prime_pi(oracle::isqrt(v)) + 1) << "at value " << v;
  }
}

// ---- minus / sMinus ---------------------------------------------------------

TEST(Minus, Examples) {
  EXPECT_EQ(take(minus(from_values({2, 3, 4, 5, 6, 7, 8, 9, 10}), from_values({3, 6, 9})), 20),
            (V{2, 4, 5, 7, 8, 10}));
  EXPECT_EQ(take(minus(from_values({1, 2}), empty_stream()), 5), (V{1, 2}));
}

TEST(Minus, FromThreeLeavesOddPrimes) {
  auto ps = oracle::primes_up_to(1000);
  std::size_t i = 0;
  OrderedStream composites = fold_union_p(
      [&]() -> std::optional<OrderedStream> {
        natural p = ps[i++];
        return arithmetic(p * p, p);
      },
      false);
  V got = take_upto(minus(from(3), std::move(composites)), 1000);
  EXPECT_EQ(got, V(ps.begin() + 1, ps.end()));
}

TEST(SMinus, Examples) {
  EXPECT_EQ(take(s_minus(from_values({2, 3, 4, 5, 6}), from_values({4, 6})), 10), (V{2, 3, 5}));
  EXPECT_EQ(take(s_minus(from_values({1, 2, 3, 4}), from_values({1, 2})), 10), (V{3, 4}));
}

TEST(SMinus, HammingCompositesLeaveOddPrimes) {
  OrderedStream composites = composites_of_primes(from_values(oracle::primes_up_to(1000)));
  V got = take_upto(s_minus(from(3), std::move(composites)), 1000);
  auto ps = oracle::primes_up_to(1000);
  EXPECT_EQ(got, V(ps.begin() + 1, ps.end()));
}

// ---- properties ---------------------------------------------------------------

TEST(StreamProperties, CombinatorsMatchSetOperations) {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t na = 1 + rng() % 10000, nb = 1 + rng() % 10000;
    V a = random_set(rng, na, 40000);
    V b = random_set(rng, nb, 40000);
    EXPECT_EQ(take(union_(from_values(a), from_values(b)), 30000), set_union(a, b));
    EXPECT_EQ(take(minus(from_values(a), from_values(b)), 30000), set_difference(a, b));
    EXPECT_EQ(take(union_p(from_values({0}), from_values(b)), 30000),
              set_union(V{0}, b));
  }
}

TEST(StreamProperties, FastPathsAgreeWhenPreconditionsHold) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    V all = random_set(rng, 1 + rng() % 10000, 50000);
    V a, b;
    for (natural x : all)
      (rng() & 1 ? a : b).push_back(x);
    // Disjoint a, b: dUnion agrees with union.
    EXPECT_EQ(take(d_union(from_values(a), from_values(b)), 20000),
              take(union_(from_values(a), from_values(b)), 20000));
    // b subset of all: sMinus agrees with minus.
    EXPECT_EQ(take(s_minus(from_values(all), from_values(b)), 20000),
              take(minus(from_values(all), from_values(b)), 20000));
  }
}

TEST(StreamProperties, OutputsStrictlyIncreasing) {
  std::mt19937_64 rng(99);
  V a = random_set(rng, 10000, 100000);
  V b = random_set(rng, 10000, 100000);
  EXPECT_TRUE(strictly_increasing(take(union_(from_values(a), from_values(b)), 20000)));
  EXPECT_TRUE(strictly_increasing(take(minus(from_values(a), from_values(b)), 20000)));
  EXPECT_TRUE(strictly_increasing(take(from(1), 10000)));
  EXPECT_TRUE(strictly_increasing(take(spin(circ(V{2, 4}), 5), 10000)));
}

// ---- circ / spin --------------------------------------------------------------

TEST(Circ, RepeatsDeltas) {
  EXPECT_EQ(take(circ(V{2, 4}), 5), (V{2, 4, 2, 4, 2}));
  EXPECT_EQ(take(circ(V{1}), 3), (V{1, 1, 1}));
}

TEST(Circ, EmptyWheelFails) { EXPECT_THROW(circ(V{}), std::invalid_argument); }

TEST(Circ, OnePeriodOfW3SumsTo30) {
  V period = take(circ(V{4, 2, 4, 2, 4, 6, 2, 6}), 8);
  natural sum = 0;
  for (natural d : period)
    sum += d;
  EXPECT_EQ(sum, 30u);
}

TEST(Circ, OverMemoizedDeltas) {
  SharedStream deltas = share(from_values({2, 4}));
  EXPECT_EQ(take(circ(deltas), 5), (V{2, 4, 2, 4, 2}));
  SharedStream none = share(empty_stream());
  OrderedStream c = circ(none);
  EXPECT_THROW(c.next(), std::invalid_argument);
}

TEST(Spin, W2From5) {
  EXPECT_EQ(take(spin(circ(V{2, 4}), 5), 6), (V{5, 7, 11, 13, 17, 19}));
}

TEST(Spin, W0GeneratesNaturals) { EXPECT_EQ(take(spin(circ(V{1}), 2), 4), (V{2, 3, 4, 5})); }

TEST(Spin, W3From7MatchesCoprimeScan) {
  V got = take(spin(circ(V{4, 2, 4, 2, 4, 6, 2, 6}), 7), 9);
  EXPECT_EQ(got, (V{7, 11, 13, 17, 19, 23, 29, 31, 37}));
  V scan;
  for (natural n = 7; scan.size() < 200; ++n)
    if (n % 2 && n % 3 && n % 5)
      scan.push_back(n);
  EXPECT_EQ(take(spin(circ(V{4, 2, 4, 2, 4, 6, 2, 6}), 7), 200), scan);
}

TEST(Spin, OverflowFails) {
  OrderedStream s = spin(circ(V{5}), stream_end - 3);
  s.next();
  EXPECT_THROW(s.next(), eulersieve::overflow_error);
}

// ---- shared buffers and fixpoints ------------------------------------------

TEST(Share, ReadersReplayTheSameValues) {
  SharedStream s = share(from(1));
  SharedReader a = s.reader();
  SharedReader b = s.reader();
  EXPECT_EQ(a.next(), 1u);
  EXPECT_EQ(a.next(), 2u);
  EXPECT_EQ(b.next(), 1u);
  SharedReader c = a;  // fork
  EXPECT_EQ(c.next(), 3u);
  EXPECT_EQ(a.next(), 3u);
  EXPECT_EQ(s.reader(5).next(), 6u);
}

TEST(Share, SkipPastTheEnd) {
  SharedStream s = share(from_values({1, 2}));
  EXPECT_EQ(s.reader(5).next(), stream_end);
}

TEST(Share, LongStreamsCrossChunks) {
  SharedStream s = share(from(0));
  EXPECT_EQ(take(s.reader().stream(), 5000), take(from(0), 5000));
  EXPECT_EQ(s.reader(4000).next(), 4000u);
  EXPECT_EQ(s.produced(), 5000u);
}

TEST(Share, BufferAccountingReturnsToZero) {
  Instrument inst;
  {
    SharedStream s = share(from(0), &inst);
    take(s.reader().stream(), 3000);
    EXPECT_EQ(inst.buffered, 3000);
  }
  EXPECT_EQ(inst.buffered, 0);
  EXPECT_EQ(inst.peak_buffered, 3000);
}

TEST(FixStream, PrimesFromTheirOwnComposites) {
  OrderedStream primes = fix_stream([](FixHandle h) {
    auto ps = std::make_shared<SharedReader>(h.reader());
    OrderedStream composites = fold_union_p(
        [ps]() -> std::optional<OrderedStream> {
          natural p = ps->next();
          return arithmetic(p * p, p);
        },
        false);
    return cons(2, minus(spin(circ(V{1}), 3), std::move(composites)));
  });
  EXPECT_EQ(take(primes, 1000), oracle::first_primes(1000));
}

TEST(FixStream, ConstantProducerIgnoresHandle) {
  OrderedStream s = fix_stream([](FixHandle) { return from_values({7, 8, 9}); });
  EXPECT_EQ(take(s, 10), (V{7, 8, 9}));
}

TEST(FixStream, SelfReferenceIsNonProductive) {
  OrderedStream s = fix_stream([](FixHandle h) { return h.reader().stream(); });
  EXPECT_THROW(s.next(), non_productive_error);
}

TEST(FixStream, ReadingAheadOfProductionIsNonProductive) {
  OrderedStream s = fix_stream([](FixHandle h) { return cons(1, h.suffix(1)); });
  EXPECT_EQ(s.next(), 1u);
  EXPECT_THROW(s.next(), non_productive_error);
}

TEST(FixStream, ReadersAgreeOnEveryPrefix) {
  SharedStream s = fix_shared([](FixHandle h) {
    return cons(1, scale(2, h.reader().stream()));
  });
  SharedReader a = s.reader();
  V first = take(a.stream(), 60);
  SharedReader b = s.reader();
  V second;
  for (int i = 0; i < 60; ++i)
    second.push_back(b.next());
  EXPECT_EQ(first, second);
  EXPECT_EQ(first[10], 1024u);
}

TEST(FixStream, SuffixSkipsMemoizedPrefix) {
  SharedStream s = fix_shared([](FixHandle h) {
    return prepend({2, 3, 5, 7}, scale(11, h.suffix(0)));
  });
  EXPECT_EQ(take(s.reader(4).stream(), 3), (V{22, 33, 55}));
}
