#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "opeadb/bignum.hpp"
#include "opeadb/sha256.hpp"

namespace opeadb {

// Deterministic splittable generator. Every draw goes through an explicit
// handle; nothing in the library reads ambient randomness. split() derives an
// independent child stream from the parent state plus a label, so a child's
// draws are stable even when unrelated draw counts change upstream. The core
// step is SplitMix64; stdlib distributions are avoided because their mappings
// are implementation-defined and replay must be bit-exact.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}

  static SplitRng from_bytes(std::span<const std::uint8_t> seed, std::string_view label);

  SplitRng split(std::string_view label);
  SplitRng split_index(std::uint64_t index);

  std::uint64_t next_u64();

  // Uniform in [0, n); n must be nonzero. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n);

  // Uniform in [lo, hi] inclusive.
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi);

  Int big_below(const Int& n);
  Int big_range(const Int& lo, const Int& hi);

 private:
  std::uint64_t state_;
};

// HMAC-SHA256 counter stream for key-material derivation. Slower than
// SplitMix64, which is fine: it runs once per key, and cross-platform
// stability of the derived R sequence is what matters.
class SeedStream {
 public:
  SeedStream(std::span<const std::uint8_t> key, std::string_view label);

  std::uint8_t next_byte();
  std::uint32_t next_u32();
  // Uniform in [0, n); n must be nonzero.
  std::uint32_t below(std::uint32_t n);

 private:
  void refill();

  std::array<std::uint8_t, 32> key_;
  std::string label_;
  std::uint64_t counter_ = 0;
  Digest block_{};
  std::size_t used_ = 32;
};

}  // namespace opeadb
