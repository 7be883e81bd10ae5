#pragma once

#include <array>
#include <bit>
#include <cstdint>

namespace momnes {

// Deterministic per-trial random stream. xoshiro256++ state derived from
// (seed, stream_id) through splitmix64, so equal pairs reproduce the exact
// draw sequence on every platform and distinct stream ids give statistically
// independent streams.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), id_(stream_id) {
    // golden-ratio mix keeps (seed, id) pairs far apart in splitmix space
    std::uint64_t x = seed ^ (stream_id * 0x9E3779B97F4A7C15ull + 0x632BE59BD9B4E019ull);
    for (auto& w : state_) w = splitmix64(x);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = std::rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  // uniform on (0,1]; never returns 0 so U^(-1/alpha) is always finite
  double next_unit_pos() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // uniform on [0,1)
  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Rademacher +/-1
  double next_sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

  double next_gaussian();  // standard normal, Box-Muller (consumes 2 words)

  // Independent stream derived from this one's identity; used to hand each
  // parallel worker its own deterministic source.
  RngStream substream(std::uint64_t j) const {
    return RngStream(seed_ ^ 0xA5A5A5A5A5A5A5A5ull,
                     id_ * 0x2545F4914F6CDD1Dull + j + 1);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return id_; }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::array<std::uint64_t, 4> state_;
  std::uint64_t seed_, id_;
};

}  // namespace momnes
