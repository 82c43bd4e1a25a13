#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace maxchaos {

/// Philox4x32-10 counter-based block cipher. Stateless: the output is a pure
/// function of (counter, key), so any draw can be regenerated in isolation.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key);
};

/// Identifies one independent random stream.
struct RngSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

/// What a stream is used for; mixed into the top byte of the stream id so the
/// interacting run, its i.i.d. reference and the lemma estimators never share
/// draws even for the same replicate.
enum class StreamPurpose : std::uint8_t {
  interacting = 1,
  iid = 2,
  density = 3,
  direct = 4,
  lemma = 5,
};

RngSpec make_stream(std::uint64_t master_seed, StreamPurpose purpose, std::uint64_t replicate);

/// Two uniforms in the open interval (0, 1) drawn from counter (step, block).
std::array<double, 2> uniform_pair(const RngSpec& rng, std::uint64_t step, std::uint64_t block);

/// Standard normal pair from counter (step, block) via Box-Muller.
std::array<double, 2> normal_pair(const RngSpec& rng, std::uint64_t step, std::uint64_t block);

/// out[i] is the standard normal assigned to (step, particle i). Particles
/// 2k and 2k+1 share one Box-Muller pair.
void fill_normals(const RngSpec& rng, std::uint64_t step, std::span<double> out);

/// out[i] is the (0,1) uniform assigned to (step, particle i).
void fill_uniforms(const RngSpec& rng, std::uint64_t step, std::span<double> out);

}  // namespace maxchaos
