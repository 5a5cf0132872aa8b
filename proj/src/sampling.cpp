#include "anglewalk/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace anglewalk::sampling {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

// splitmix64 step (Steele/Lea/Flood mixer): full-avalanche, used both to
// expand the seed material into generator state and as the stream deriver.
inline std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::optional<Seed> parse_seed(std::string_view text) {
  if (text.empty()) return std::nullopt;
  int base = 10;
  std::string_view digits = text;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    digits = text.substr(2);
  }
  std::uint64_t value = 0;
  for (char c : digits) {
    int d;
    if (c >= '0' && c <= '9') {
      d = c - '0';
    } else if (base == 16 && c >= 'a' && c <= 'f') {
      d = c - 'a' + 10;
    } else if (base == 16 && c >= 'A' && c <= 'F') {
      d = c - 'A' + 10;
    } else {
      return std::nullopt;
    }
    // overflow check: value*base + d must fit in 64 bits
    if (value > (UINT64_MAX - static_cast<std::uint64_t>(d)) / base) {
      return std::nullopt;
    }
    value = value * base + static_cast<std::uint64_t>(d);
  }
  return Seed{value};
}

RandomSource derive_stream(Seed master, std::uint64_t stream_id) {
  RandomSource src;
  src.stream_id_ = stream_id;
  // Expand master ^ stream_id through the avalanche mixer. Nearby stream ids
  // (0, 1, 2, ...) land in unrelated regions of the state space.
  std::uint64_t x = master.value ^ stream_id;
  for (auto& word : src.s_) word = splitmix64(x);
  return src;
}

std::uint64_t RandomSource::next_u64() {
  // xoshiro256++ (Blackman & Vigna)
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomSource::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::next_unit_open() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RandomSource::uniform_symmetric(double alpha) {
  if (!(alpha > 0.0) || alpha > std::numbers::pi) {
    throw std::invalid_argument("uniform_symmetric: alpha must be in (0, pi], got " +
                                std::to_string(alpha));
  }
  return alpha * (2.0 * next_unit() - 1.0);
}

Vec2 RandomSource::uniform_circle() {
  const double t = kTwoPi * next_unit();
  return {std::cos(t), std::sin(t)};
}

double RandomSource::normal_std() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(next_unit_open()));
  const double t = kTwoPi * next_unit();
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

}  // namespace anglewalk::sampling
