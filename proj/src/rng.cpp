#include "opeadb/rng.hpp"

#include <cstring>

#include "opeadb/errors.hpp"

namespace opeadb {

namespace {

// SplitMix64 output mix (Steele, Lea, Vigna).
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t load_u64_le(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

SplitRng SplitRng::from_bytes(std::span<const std::uint8_t> seed, std::string_view label) {
  Sha256 h;
  h.update(seed);
  h.update(std::string_view("\x00", 1));
  h.update(label);
  Digest d = h.finish();
  return SplitRng(load_u64_le(d.data()));
}

std::uint64_t SplitRng::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

SplitRng SplitRng::split(std::string_view label) {
  // Child seed commits to one parent draw plus the label; hashing keeps
  // adversarially chosen labels from colliding child streams.
  std::uint64_t stamp = next_u64();
  std::uint8_t bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = std::uint8_t(stamp >> (8 * i));
  Sha256 h;
  h.update(std::span<const std::uint8_t>(bytes, 8));
  h.update(label);
  Digest d = h.finish();
  return SplitRng(load_u64_le(d.data()));
}

SplitRng SplitRng::split_index(std::uint64_t index) {
  return split("i" + std::to_string(index));
}

std::uint64_t SplitRng::below(std::uint64_t n) {
  if (n == 0) fail(ErrorKind::Internal, "uniform draw from empty range");
  if ((n & (n - 1)) == 0) return next_u64() & (n - 1);
  // Rejection zone keeps the draw exactly uniform.
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit) return v % n;
  }
}

std::uint64_t SplitRng::range(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) fail(ErrorKind::Internal, "uniform draw from inverted range");
  std::uint64_t width = hi - lo;
  if (width == UINT64_MAX) return next_u64();
  return lo + below(width + 1);
}

Int SplitRng::big_below(const Int& n) {
  if (n <= 0) fail(ErrorKind::Internal, "uniform draw from empty big range");
  if (n <= Int(UINT64_MAX)) return Int(below(n.convert_to<std::uint64_t>()));
  unsigned words = (boost::multiprecision::msb(n) / 64) + 1;
  for (;;) {
    Int v = 0;
    for (unsigned i = 0; i < words; ++i) {
      v <<= 64;
      v += next_u64();
    }
    // v is uniform over [0, 2^(64*words)); accept the prefix that folds
    // evenly onto [0, n).
    Int span = Int(1) << (64 * words);
    Int limit = span - span % n;
    if (v < limit) return v % n;
  }
}

Int SplitRng::big_range(const Int& lo, const Int& hi) {
  if (lo > hi) fail(ErrorKind::Internal, "uniform draw from inverted big range");
  return lo + big_below(hi - lo + 1);
}

SeedStream::SeedStream(std::span<const std::uint8_t> key, std::string_view label)
    : label_(label) {
  Digest d = hmac_sha256(key, "seed-stream:" + label_);
  key_ = d;
}

void SeedStream::refill() {
  std::uint8_t msg[8];
  for (int i = 0; i < 8; ++i) msg[i] = std::uint8_t(counter_ >> (56 - 8 * i));
  block_ = hmac_sha256(std::span<const std::uint8_t>(key_.data(), key_.size()),
                       std::span<const std::uint8_t>(msg, 8));
  ++counter_;
  used_ = 0;
}

std::uint8_t SeedStream::next_byte() {
  if (used_ >= block_.size()) refill();
  return block_[used_++];
}

std::uint32_t SeedStream::next_u32() {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | next_byte();
  return v;
}

std::uint32_t SeedStream::below(std::uint32_t n) {
  if (n == 0) fail(ErrorKind::Internal, "uniform draw from empty range");
  std::uint32_t limit = UINT32_MAX - UINT32_MAX % n;
  for (;;) {
    std::uint32_t v = next_u32();
    if (v < limit) return v % n;
  }
}

}  // namespace opeadb
