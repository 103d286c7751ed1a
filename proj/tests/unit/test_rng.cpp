#include <gtest/gtest.h>

#include <cmath>

#include "curvereg/rng.hpp"

using curvereg::derive_seed;
using curvereg::Rng;

TEST(Rng, EngineFollowsTheStandardSequence) {
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  Rng rng(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next_u64();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(Rng, DeriveSeedMatchesDocumentedFold) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  const std::uint64_t base = 7;
  const std::uint64_t want = mix(mix(base ^ 3) ^ 9);
  EXPECT_EQ(derive_seed(base, {3, 9}), want);
  EXPECT_EQ(derive_seed(base, {}), base);
  EXPECT_NE(derive_seed(base, {3, 9}), derive_seed(base, {9, 3}));
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.uniform01(), b.uniform01());
    ASSERT_EQ(a.normal(), b.normal());
  }
}

TEST(Rng, UniformStaysInUnitInterval) {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(-0.25, 0.5);
    ASSERT_GE(u, -0.25);
    ASSERT_LT(u, 0.5);
  }
}

TEST(Rng, NormalMoments) {
  Rng rng(2);
  const int n = 200000;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  const double mean = s / n, var = s2 / n - mean * mean;
  EXPECT_LT(std::abs(mean), 4.0 / std::sqrt(n));
  EXPECT_NEAR(var, 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 0.1);
}
