#pragma once

#include <cstdint>

namespace antrope::rng {

// Increment of the splitmix64 sequence (golden ratio in 2^64 fixed point).
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Second mixing constant, used only to separate the substream-id input from
// the master seed before the final whitening pass.
inline constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ull;

// Stafford "Mix13" finalizer, the output function of splitmix64.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Key of the substream identified by (master_seed, substream_id).
constexpr std::uint64_t derive_key(std::uint64_t master_seed,
                                   std::uint64_t substream_id) {
  std::uint64_t k = mix64(master_seed + kGolden);
  k ^= mix64(substream_id + kStreamSalt);
  return mix64(k + kGolden);
}

// Maps 64 random bits to the open interval (0,1). The offset keeps the result
// strictly inside, so log() and power transforms never see 0 or 1.
constexpr double unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

// A counter-based random substream: draw i of substream s under master seed m
// is mix64(derive_key(m, s) + (i+1)*kGolden), i.e. the splitmix64 sequence
// started at the substream key. Draws are addressable by index, so any
// trajectory can be replayed independently of evaluation order.
class Substream {
 public:
  Substream(std::uint64_t master_seed, std::uint64_t substream_id)
      : key_(derive_key(master_seed, substream_id)), id_(substream_id) {}

  std::uint64_t next_bits() {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
  }

  double next_unit() { return unit_open(next_bits()); }

  // Number of raw 64-bit draws consumed so far.
  std::uint64_t draw_index() const { return counter_; }
  std::uint64_t substream_id() const { return id_; }

  // Random access: the draw_index-th raw draw (0-based) of a substream.
  static constexpr std::uint64_t bits_at(std::uint64_t master_seed,
                                         std::uint64_t substream_id,
                                         std::uint64_t draw_index) {
    return mix64(derive_key(master_seed, substream_id) +
                 (draw_index + 1) * kGolden);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::uint64_t id_;
};

}  // namespace antrope::rng

namespace antrope {
using rng::derive_key;
using rng::Substream;
}  // namespace antrope
