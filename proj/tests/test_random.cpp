#include <trigger/random.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using trigger::RandomStream;

// Known-answer vectors from the Random123 distribution (kat_vectors, philox4x32 10).
TEST(Philox, KnownAnswerZero) {
    const auto out = RandomStream::philox({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out[0], 0x6627e8d5u);
    EXPECT_EQ(out[1], 0xe169c58du);
    EXPECT_EQ(out[2], 0xbc57ac4cu);
    EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerPi) {
    const auto out = RandomStream::philox({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
    EXPECT_EQ(out[0], 0xd16cfe09u);
    EXPECT_EQ(out[1], 0x94fdccebu);
    EXPECT_EQ(out[2], 0x5001e420u);
    EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(RandomStream, SameKeySameSequence) {
    RandomStream a(42, 7), b(42, 7);
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(a(), b());
}

TEST(RandomStream, DistinctStreamsDiffer) {
    std::set<std::uint64_t> first;
    for (std::uint64_t id = 0; id < 1000; ++id)
        first.insert(RandomStream(42, id)());
    EXPECT_EQ(first.size(), 1000u);
    EXPECT_NE(RandomStream(1, 0)(), RandomStream(2, 0)());
}

TEST(RandomStream, UniformStaysInOpenInterval) {
    RandomStream rng(3, 0);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    // mean 1/2, sd of the mean sqrt(1/12/n)
    EXPECT_NEAR(sum / n, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(RandomStream, ExponentialMeanAndZeroRate) {
    RandomStream rng(5, 1);
    const int n = 200000;
    const double rate = 2.5;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += rng.exponential(rate);
    EXPECT_NEAR(sum / n, 1.0 / rate, 3.0 * (1.0 / rate) / std::sqrt(n));
    EXPECT_TRUE(std::isinf(rng.exponential(0.0)));
}
