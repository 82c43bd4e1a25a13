#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "maxchaos/errors.hpp"
#include "maxchaos/rng.hpp"

using namespace maxchaos;

namespace {

using Ctr = Philox4x32::Counter;

// Reference Philox4x32-10 written directly from the round definition, used
// to cross-check the library on random inputs.
Ctr philox_oracle(Ctr c, Philox4x32::Key k) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
    const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    k[0] += 0x9E3779B9u;
    k[1] += 0xBB67AE85u;
  }
  return c;
}

}  // namespace

TEST(Philox, KnownAnswerVectors) {
  EXPECT_EQ(Philox4x32::apply({0, 0, 0, 0}, {0, 0}), (Ctr{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(Philox4x32::apply({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
            (Ctr{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(Philox4x32::apply({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
            (Ctr{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, MatchesRoundOracle) {
  std::uint32_t s = 12345;
  auto next = [&s] { return s = s * 1664525u + 1013904223u; };
  for (int trial = 0; trial < 1000; ++trial) {
    const Ctr c{next(), next(), next(), next()};
    const Philox4x32::Key k{next(), next()};
    ASSERT_EQ(Philox4x32::apply(c, k), philox_oracle(c, k));
  }
}

TEST(Streams, DeterministicAndDistinct) {
  const RngSpec a = make_stream(42, StreamPurpose::interacting, 7);
  const RngSpec b = make_stream(42, StreamPurpose::iid, 7);
  const RngSpec c = make_stream(42, StreamPurpose::interacting, 8);
  EXPECT_EQ(normal_pair(a, 3, 5), normal_pair(a, 3, 5));
  EXPECT_NE(normal_pair(a, 3, 5), normal_pair(b, 3, 5));
  EXPECT_NE(normal_pair(a, 3, 5), normal_pair(c, 3, 5));
  EXPECT_NE(normal_pair(a, 3, 5), normal_pair(a, 4, 5));
  EXPECT_NE(normal_pair(a, 3, 5), normal_pair(a, 3, 6));
  EXPECT_NE(normal_pair(make_stream(43, StreamPurpose::interacting, 7), 3, 5), normal_pair(a, 3, 5));
}

TEST(Streams, FillIsPrefixConsistent) {
  // Particle i's draw does not depend on the population size.
  const RngSpec r = make_stream(1, StreamPurpose::interacting, 0);
  std::vector<double> small(7), large(100);
  fill_normals(r, 2, small);
  fill_normals(r, 2, large);
  for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(small[i], large[i]);
  const auto pair = normal_pair(r, 2, 3);
  EXPECT_EQ(large[6], pair[0]);
  EXPECT_EQ(large[7], pair[1]);
}

TEST(Streams, UniformsInOpenInterval) {
  const RngSpec r = make_stream(9, StreamPurpose::lemma, 0);
  std::vector<double> u(100001);
  fill_uniforms(r, 0, u);
  double mean = 0.0;
  for (double v : u) {
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
    mean += v / u.size();
  }
  EXPECT_NEAR(mean, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / u.size()));
}

TEST(Streams, NormalMoments) {
  const RngSpec r = make_stream(3, StreamPurpose::iid, 1);
  std::vector<double> z(200000);
  fill_normals(r, 1, z);
  double m1 = 0, m2 = 0, m4 = 0;
  for (double v : z) {
    m1 += v;
    m2 += v * v;
    m4 += v * v * v * v;
  }
  const double n = static_cast<double>(z.size());
  EXPECT_NEAR(m1 / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(m2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(m4 / n, 3.0, 4.0 * std::sqrt(96.0 / n));
}

TEST(Streams, LargeCounterRejected) {
  const RngSpec r = make_stream(0, StreamPurpose::interacting, 0);
  EXPECT_THROW(normal_pair(r, std::uint64_t{1} << 32, 0), DomainError);
  EXPECT_THROW(normal_pair(r, 0, std::uint64_t{1} << 32), DomainError);
}
