#include "ametric/sampling.hpp"

#include <gtest/gtest.h>

#include <set>

#include "ametric/spaces.hpp"

using namespace ametric;

TEST(CounterRng, DrawDependsOnlyOnSeedAndCounter) {
  CounterRng a(99);
  CounterRng b(99);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next(), b.next());
  // The k-th draw is the finalizer applied to seed + k * gamma.
  CounterRng c(99);
  c.next();
  c.next();
  EXPECT_EQ(c.next(), mix64(99 + 3 * 0x9E3779B97F4A7C15ULL));
}

TEST(CounterRng, UniformStaysInUnitInterval) {
  CounterRng rng(5);
  double lo = 1.0;
  double hi = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_LT(lo, 0.01);
  EXPECT_GT(hi, 0.99);
}

TEST(CounterRng, IndexCoversRange) {
  CounterRng rng(11);
  std::set<std::size_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto k = rng.index(7);
    ASSERT_LT(k, 7u);
    seen.insert(k);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(DeriveSeed, StreamsAreDistinct) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 64; ++s) seeds.insert(derive_seed(1234, s));
  EXPECT_EQ(seeds.size(), 64u);
  EXPECT_EQ(derive_seed(1234, 7), derive_seed(1234, 7));
}

TEST(SampleTuples, SameSeedSameSample) {
  const auto space = make_absdiff_space(Arity(3), 2);
  const auto a = sample_tuples(space, 4, 200, 77);
  const auto b = sample_tuples(space, 4, 200, 77);
  const auto c = sample_tuples(space, 4, 200, 78);
  EXPECT_EQ(a.tuples, b.tuples);
  EXPECT_NE(a.tuples, c.tuples);
  EXPECT_FALSE(a.exhaustive);
}

TEST(SampleTuples, InjectsDegenerateTuples) {
  const auto space = make_absdiff_space(Arity(3));
  const auto set = sample_tuples(space, 3, 50, 1);
  EXPECT_EQ(set.size(), 50u + 12u);
  std::size_t all_equal = 0;
  std::size_t two_equal = 0;
  std::size_t near_equal = 0;
  for (const auto& t : set.tuples) {
    if (t[0] == t[1] && t[1] == t[2]) {
      ++all_equal;
    } else if (t[0] == t[1]) {
      ++two_equal;
      if (std::abs(t[2][0] - t[0][0]) <= 1e-6 * 1.01) ++near_equal;
    }
  }
  EXPECT_EQ(all_equal, 4u);
  EXPECT_GE(two_equal, 8u);
  EXPECT_EQ(near_equal, 4u);
}

TEST(SampleTuples, NoInjectionWhenDisabled) {
  const auto space = make_absdiff_space(Arity(3));
  SamplingOptions opts;
  opts.inject_degenerate = false;
  EXPECT_EQ(sample_tuples(space, 3, 50, 1, opts).size(), 50u);
}

TEST(SampleTuples, ExhaustiveOnSmallFiniteCarrier) {
  const MetricTable table{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  const auto space = lift_table(Arity(3), table);
  const auto set = sample_tuples(space, 4, 10, 0);
  EXPECT_TRUE(set.exhaustive);
  EXPECT_EQ(set.size(), 81u);
  std::set<std::vector<Point>> distinct(set.tuples.begin(), set.tuples.end());
  EXPECT_EQ(distinct.size(), 81u);
}

TEST(SampleTuples, RandomOnLargeFiniteCarrier) {
  MetricTable table(20, std::vector<double>(20, 1.0));
  for (std::size_t i = 0; i < 20; ++i) table[i][i] = 0.0;
  const auto space = lift_table(Arity(3), table);
  const auto set = sample_tuples(space, 4, 100, 0);
  EXPECT_FALSE(set.exhaustive);
  for (const auto& t : set.tuples)
    for (const auto& p : t) EXPECT_TRUE(space.contains(p));
}

TEST(SampleTuples, DrawsRespectBoxAndWindow) {
  const auto boxed = make_absdiff_space(Arity(2), 2, {0.0, -100.0}, {1.0, 100.0});
  SamplingOptions opts;
  opts.window = 5.0;
  const auto set = sample_tuples(boxed, 2, 500, 3, opts);
  for (const auto& t : set.tuples) {
    for (const auto& p : t) {
      ASSERT_TRUE(boxed.contains(p));
      EXPECT_LE(std::abs(p[1]), 5.0);
    }
  }
}
