#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opeadb/bignum.hpp"
#include "opeadb/rng.hpp"

namespace opeadb {

// Inclusive integer interval. A plaintext m owns the partition
// [lower, upper]; encryption draws uniformly inside it.
struct Bounds {
  Int lower;
  Int upper;
};

struct DomainConfig {
  std::uint64_t t = 0;          // largest storable plaintext; values are 1..t
  std::uint64_t max_sum = 0;    // largest recoverable sum; also the partition count
  std::uint64_t max_group = 1;  // largest aggregation cardinality to support
  unsigned r_bits = 8;          // bit width of each partition's random width
};

// One comparison domain's key material: the sorted width sequence R, the base
// offset sigma, and the domain sizing. Both cipher variants hang off the same
// material. Partition boundaries follow the closed forms
//
//   L[t] = t*sigma + (t-1)*R_1 + sum(R_1..R_{t-1}),  U[t]  = L[t] + R_t
//   U'[t] = t*sigma - (t-1)*R_1 - sum(R_1..R_{t-1}), L'[t] = U'[t] - R_t
//
// computed on demand from a prefix-sum table; no boundary table is ever
// materialized. The standard variant keeps sums of ciphertexts below the
// boundary of the plaintext sum, the mirrored variant keeps them above, and
// the pair brackets a sum tightly enough to recover it exactly.
class DomainKey {
 public:
  // Deterministically derives the width sequence from seed material: max_sum
  // draws of r_bits-bit positive integers, sorted ascending, then the smallest
  // sigma with sigma > 3*R_max and sigma >= (max_sum+max_group)*R_max - R_1.
  static DomainKey derive(std::span<const std::uint8_t> seed, std::string_view label,
                          const DomainConfig& config);

  // Assembles a key from explicit parts. Test and bench fixtures use this to
  // pin width sequences and sigma exactly; derive() is the production path.
  static DomainKey with_parts(std::vector<std::uint32_t> r, std::uint64_t sigma,
                              std::uint64_t t, std::uint64_t max_group,
                              std::string_view label);

  const std::string& label() const { return label_; }
  const DomainConfig& config() const { return config_; }
  std::uint64_t t() const { return config_.t; }
  std::uint64_t t_max() const { return r_.size(); }
  std::uint64_t sigma() const { return sigma_; }
  std::span<const std::uint32_t> r_all() const { return r_; }
  std::span<const std::uint8_t> seed() const { return seed_; }

  // R_t, 1-indexed; t in [1, t_max].
  std::uint32_t r(std::uint64_t t) const;
  // R_1 + ... + R_t; r_prefix(0) == 0.
  std::uint64_t r_prefix(std::uint64_t t) const;

  Bounds bounds(std::uint64_t m) const;      // standard partition [L_m, U_m]
  Bounds ext_bounds(std::uint64_t m) const;  // mirrored partition [L'_m, U'_m]

  Int encrypt(std::uint64_t m, SplitRng& rng) const;
  Int encrypt_ext(std::uint64_t m, SplitRng& rng) const;

  // Largest t with L[t] <= c, so values falling in the gap between U[t] and
  // L[t+1] (which sums of ciphertexts do) resolve downward. Clamps at t_max.
  std::uint64_t decrypt(const Int& c) const;

  // Smallest t with c <= U'[t]; gap values resolve upward.
  std::uint64_t decrypt_ext(const Int& c) const;

  // Uniform draw from [R_{t_max}, sigma). Any x in that window classifies
  // same-plaintext pairs as equal and distinct-plaintext pairs by order, and
  // stays below every ciphertext so the NULL sentinel 0 never compares equal.
  Int pick_equality_threshold(SplitRng& rng) const;

  // Largest value v with (v + cardinality)*R_{t_max} - R_1 <= sigma, clamped
  // to [0, t_max]: the biggest sum constant this key can probe exactly for
  // groups of the given cardinality. May be 0.
  std::uint64_t max_supported_sum(std::uint64_t cardinality) const;

 private:
  DomainKey() = default;
  void build_prefix();

  std::string label_;
  DomainConfig config_;
  std::vector<std::uint32_t> r_;      // sorted non-decreasing, 1-indexed as r_[t-1]
  std::vector<std::uint64_t> prefix_; // prefix_[t] = R_1 + .. + R_t
  std::uint64_t sigma_ = 0;
  std::vector<std::uint8_t> seed_;    // empty for with_parts keys
};

// Literal transcriptions of the iterative boundary constructions. They accept
// arbitrary positive width sequences (not just sorted ones) and exist as an
// independent route for checking the closed forms above; keep them naive.
// Standard variant requires sigma > max(R) - R_1, mirrored sigma > 3*max(R).
std::vector<Bounds> boundaries_iterative(std::span<const std::uint32_t> r,
                                         std::uint64_t sigma, std::uint64_t upto);
std::vector<Bounds> ext_boundaries_iterative(std::span<const std::uint32_t> r,
                                             std::uint64_t sigma, std::uint64_t upto);

}  // namespace opeadb
