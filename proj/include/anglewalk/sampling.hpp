#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "anglewalk/geometry.hpp"

namespace anglewalk::sampling {

// Master seed for an experiment. Every random quantity in the library is a
// deterministic function of (seed, stream id), so runs are reproducible and
// replicates can be generated independently and in any order.
struct Seed {
  std::uint64_t value = 0;
};

// Parse "123" or "0x5EED" (case-insensitive hex prefix). Rejects anything
// with trailing junk or out of uint64 range.
std::optional<Seed> parse_seed(std::string_view text);

// Counter-derived pseudo-random stream: xoshiro256++ seeded through a
// splitmix64 avalanche of master ^ stream_id. Hand-rolled rather than
// <random> engines/distributions because the standard distributions are not
// bit-reproducible across library implementations, and reproducibility is a
// contract here.
class RandomSource {
 public:
  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double next_unit();

  // Uniform on (0, 1]; used where a subsequent log() must not see zero.
  double next_unit_open();

  // Uniform on [-alpha, alpha]. Requires 0 < alpha <= pi.
  double uniform_symmetric(double alpha);

  // Uniform direction on the unit circle: (cos t, sin t), t ~ U[0, 2pi).
  Vec2 uniform_circle();

  // Standard normal via Box-Muller; pairs are generated together and the
  // second value is cached, so draws come in a fixed order.
  double normal_std();

  std::uint64_t stream_id() const { return stream_id_; }

 private:
  friend RandomSource derive_stream(Seed master, std::uint64_t stream_id);
  RandomSource() = default;

  std::array<std::uint64_t, 4> s_{};
  std::uint64_t stream_id_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// The only way to obtain a RandomSource. Streams for distinct
// (master, stream_id) pairs are decorrelated by the seeding avalanche;
// deriving a stream never perturbs other streams.
RandomSource derive_stream(Seed master, std::uint64_t stream_id);

}  // namespace anglewalk::sampling
