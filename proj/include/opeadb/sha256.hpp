#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace opeadb {

using Digest = std::array<std::uint8_t, 32>;

// FIPS 180-4 SHA-256. Self-contained so the core library links nothing; the
// unit tests pin the standard public vectors. Used for identifier
// anonymization (keyed) and for deriving key-material streams, both of which
// must be bit-stable across platforms and toolchains.
class Sha256 {
 public:
  Sha256();
  void update(std::span<const std::uint8_t> data);
  void update(std::string_view data);
  Digest finish();

 private:
  void compress(const std::uint8_t* block);

  std::array<std::uint32_t, 8> state_;
  std::array<std::uint8_t, 64> buffer_;
  std::uint64_t total_ = 0;
  std::size_t buffered_ = 0;
};

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);

Digest hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> message);
Digest hmac_sha256(std::span<const std::uint8_t> key, std::string_view message);

std::string hex_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> hex_decode(std::string_view hex);  // throws MalformedCell

}  // namespace opeadb
