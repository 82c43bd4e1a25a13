#include "maxchaos/rng.hpp"

#include <cmath>
#include <numbers>

#include "maxchaos/errors.hpp"

namespace maxchaos {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
constexpr int kRounds = 10;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline Philox4x32::Counter round(const Philox4x32::Counter& c, const Philox4x32::Key& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, c[0], hi0, lo0);
  mulhilo(kMul1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

Philox4x32::Counter block_bits(const RngSpec& rng, std::uint64_t step, std::uint64_t block) {
  if (step > 0xFFFFFFFFu || block > 0xFFFFFFFFu) {
    throw DomainError("rng counter exceeds 32-bit step/block range");
  }
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(block),
                                static_cast<std::uint32_t>(rng.stream_id),
                                static_cast<std::uint32_t>(rng.stream_id >> 32)};
  const Philox4x32::Key key{static_cast<std::uint32_t>(rng.master_seed),
                            static_cast<std::uint32_t>(rng.master_seed >> 32)};
  return Philox4x32::apply(ctr, key);
}

inline std::array<double, 2> box_muller(double u1, double u2) {
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace

Philox4x32::Counter Philox4x32::apply(Counter ctr, Key key) {
  ctr = round(ctr, key);
  for (int r = 1; r < kRounds; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    ctr = round(ctr, key);
  }
  return ctr;
}

RngSpec make_stream(std::uint64_t master_seed, StreamPurpose purpose, std::uint64_t replicate) {
  if (replicate >> 56) throw DomainError("replicate id exceeds 56 bits");
  return {master_seed, (static_cast<std::uint64_t>(purpose) << 56) | replicate};
}

std::array<double, 2> uniform_pair(const RngSpec& rng, std::uint64_t step, std::uint64_t block) {
  const auto w = block_bits(rng, step, block);
  return {to_open_unit(w[0], w[1]), to_open_unit(w[2], w[3])};
}

std::array<double, 2> normal_pair(const RngSpec& rng, std::uint64_t step, std::uint64_t block) {
  const auto u = uniform_pair(rng, step, block);
  return box_muller(u[0], u[1]);
}

void fill_normals(const RngSpec& rng, std::uint64_t step, std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; i += 2) {
    const auto z = normal_pair(rng, step, i / 2);
    out[i] = z[0];
    if (i + 1 < n) out[i + 1] = z[1];
  }
}

void fill_uniforms(const RngSpec& rng, std::uint64_t step, std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; i += 2) {
    const auto u = uniform_pair(rng, step, i / 2);
    out[i] = u[0];
    if (i + 1 < n) out[i + 1] = u[1];
  }
}

}  // namespace maxchaos
