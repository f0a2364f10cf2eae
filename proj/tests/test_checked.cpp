// Built with EULERSIEVE_CHECKED=1: precondition violations of the fast-path
// combinators are reported instead of silently producing wrong streams.

#include <gtest/gtest.h>

#include <vector>

#include "test_support.hpp"

using namespace eulersieve;
using V = std::vector<natural>;

static_assert(checked_build);

TEST(Checked, DUnionRejectsSharedElement) {
  OrderedStream u = d_union(from_values({1, 5}), from_values({5, 7}));
  EXPECT_EQ(u.next(), 1u);
  EXPECT_THROW(u.next(), precondition_error);
}

TEST(Checked, DUnionPRejectsSharedElementAfterTheHead) {
  OrderedStream u = d_union_p(from_values({2, 6}), from_values({6, 9}));
  EXPECT_EQ(u.next(), 2u);
  EXPECT_THROW(u.next(), precondition_error);
}

TEST(Checked, SMinusRejectsNonSubset) {
  OrderedStream d = s_minus(from_values({2, 3, 5}), from_values({4}));
  EXPECT_EQ(d.next(), 2u);
  EXPECT_EQ(d.next(), 3u);
  EXPECT_THROW(d.next(), precondition_error);
}

TEST(Checked, ValidInputsPass) {
  EXPECT_EQ(take(d_union(from_values({1, 3}), from_values({2, 4})), 10), (V{1, 2, 3, 4}));
  EXPECT_EQ(take(s_minus(from_values({1, 2, 3}), from_values({2})), 10), (V{1, 3}));
}

TEST(Checked, EulerSievesRespectPreconditions) {
  V oracle = oracle::first_primes(10000);
  for (SieveVariant v : full_scale_variants())
    EXPECT_EQ(take(make_sieve(v), 10000), oracle) << variant_name(v);
  EXPECT_EQ(take(naive_wheel_euler(), 1000), V(oracle.begin(), oracle.begin() + 1000));
  EXPECT_EQ(take(naive_euler(), 2000), V(oracle.begin(), oracle.begin() + 2000));
  EXPECT_EQ(take(turner_sieve(), 2000), V(oracle.begin(), oracle.begin() + 2000));
}
