#include "opeadb/opea.hpp"

#include <algorithm>

#include "opeadb/errors.hpp"

namespace opeadb {

namespace {

constexpr std::uint64_t kMaxPartitions = 1ull << 25;  // prefix table memory cap
constexpr std::uint64_t kMaxSigma = 1ull << 62;

}  // namespace

DomainKey DomainKey::derive(std::span<const std::uint8_t> seed, std::string_view label,
                            const DomainConfig& config) {
  if (config.t == 0) fail(ErrorKind::KeySizing, "t must be at least 1");
  if (config.max_sum < config.t)
    fail(ErrorKind::KeySizing, "max_sum must be at least t (every stored value is a sum)");
  if (config.max_sum > kMaxPartitions)
    fail(ErrorKind::KeySizing, "max_sum exceeds the materializable width-table size");
  if (config.max_group == 0) fail(ErrorKind::KeySizing, "max_group must be at least 1");
  if (config.max_group > kMaxPartitions)
    fail(ErrorKind::KeySizing, "max_group exceeds the supported cardinality cap");
  if (config.r_bits < 1 || config.r_bits > 16)
    fail(ErrorKind::KeySizing, "r_bits must be in [1, 16]");

  DomainKey key;
  key.label_ = std::string(label);
  key.config_ = config;
  key.seed_.assign(seed.begin(), seed.end());

  // max_sum draws of r_bits-bit positive integers, i.e. uniform on
  // [1, 2^r_bits - 1], sorted ascending. r_bits == 1 pins every width to 1.
  SeedStream stream(seed, "partition-widths:" + key.label_);
  const std::uint32_t top = (1u << config.r_bits) - 1;
  key.r_.resize(config.max_sum);
  for (auto& r : key.r_) r = 1 + stream.below(top);
  std::sort(key.r_.begin(), key.r_.end());
  key.build_prefix();

  // Smallest sigma with sigma > 3*R_max (mirrored-variant validity) and
  // sigma >= (max_sum + max_group)*R_max - R_1 (exact sum recovery budget).
  const unsigned __int128 r_max = key.r_.back();
  const unsigned __int128 r_1 = key.r_.front();
  unsigned __int128 floor_a = 3 * r_max + 1;
  unsigned __int128 need = (unsigned __int128)(config.max_sum + config.max_group) * r_max;
  unsigned __int128 floor_b = need > r_1 ? need - r_1 : 0;
  unsigned __int128 sigma = std::max(floor_a, floor_b);
  if (sigma > kMaxSigma)
    fail(ErrorKind::KeySizing, "sigma overflows the configured word-size limit; "
                               "shrink max_sum, max_group, or r_bits");
  key.sigma_ = static_cast<std::uint64_t>(sigma);
  return key;
}

DomainKey DomainKey::with_parts(std::vector<std::uint32_t> r, std::uint64_t sigma,
                                std::uint64_t t, std::uint64_t max_group,
                                std::string_view label) {
  if (r.empty()) fail(ErrorKind::KeySizing, "width sequence is empty");
  if (r.size() > kMaxPartitions)
    fail(ErrorKind::KeySizing, "width sequence exceeds the materializable size");
  if (t == 0 || t > r.size())
    fail(ErrorKind::KeySizing, "t must be in [1, len(R)]");
  std::uint32_t r_max = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] == 0) fail(ErrorKind::KeySizing, "widths must be positive");
    if (i > 0 && r[i] < r[i - 1])
      fail(ErrorKind::KeySizing, "width sequence must be non-decreasing");
    r_max = std::max(r_max, r[i]);
  }
  if (sigma <= 3ull * r_max)
    fail(ErrorKind::KeySizing, "sigma must exceed 3*R_max");
  if (sigma > kMaxSigma)
    fail(ErrorKind::KeySizing, "sigma overflows the configured word-size limit");

  DomainKey key;
  key.label_ = std::string(label);
  key.config_.t = t;
  key.config_.max_sum = r.size();
  key.config_.max_group = max_group == 0 ? 1 : max_group;
  unsigned bits = 1;
  while ((1u << bits) - 1 < r_max) ++bits;
  key.config_.r_bits = bits;
  key.r_ = std::move(r);
  key.sigma_ = sigma;
  key.build_prefix();
  return key;
}

void DomainKey::build_prefix() {
  prefix_.resize(r_.size() + 1);
  prefix_[0] = 0;
  for (std::size_t i = 0; i < r_.size(); ++i) prefix_[i + 1] = prefix_[i] + r_[i];
}

std::uint32_t DomainKey::r(std::uint64_t t) const {
  if (t < 1 || t > r_.size()) fail(ErrorKind::Internal, "width index out of range");
  return r_[t - 1];
}

std::uint64_t DomainKey::r_prefix(std::uint64_t t) const {
  if (t > r_.size()) fail(ErrorKind::Internal, "prefix index out of range");
  return prefix_[t];
}

Bounds DomainKey::bounds(std::uint64_t m) const {
  if (m < 1 || m > r_.size()) fail(ErrorKind::RangeError, "plaintext outside [1, t_max]");
  Int lower = Int(m) * sigma_ + Int(m - 1) * r_.front() + prefix_[m - 1];
  return Bounds{lower, lower + r_[m - 1]};
}

Bounds DomainKey::ext_bounds(std::uint64_t m) const {
  if (m < 1 || m > r_.size()) fail(ErrorKind::RangeError, "plaintext outside [1, t_max]");
  Int upper = Int(m) * sigma_ - Int(m - 1) * r_.front() - prefix_[m - 1];
  return Bounds{upper - r_[m - 1], upper};
}

Int DomainKey::encrypt(std::uint64_t m, SplitRng& rng) const {
  if (m < 1 || m > config_.t)
    fail(ErrorKind::RangeError, "plaintext outside [1, t] for domain " + label_);
  Bounds b = bounds(m);
  return b.lower + rng.below(std::uint64_t(r_[m - 1]) + 1);
}

Int DomainKey::encrypt_ext(std::uint64_t m, SplitRng& rng) const {
  if (m < 1 || m > config_.t)
    fail(ErrorKind::RangeError, "plaintext outside [1, t] for domain " + label_);
  Bounds b = ext_bounds(m);
  return b.lower + rng.below(std::uint64_t(r_[m - 1]) + 1);
}

std::uint64_t DomainKey::decrypt(const Int& c) const {
  if (c == 0) fail(ErrorKind::NullCell, "ciphertext is the NULL sentinel");
  if (c < Int(sigma_))
    fail(ErrorKind::NotACiphertext, "value below the first partition of " + label_);
  // Largest t with L[t] <= c. L is strictly increasing, so binary search;
  // sums past the top partition clamp to t_max.
  std::uint64_t lo = 1, hi = r_.size();
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (bounds(mid).lower <= c)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

std::uint64_t DomainKey::decrypt_ext(const Int& c) const {
  if (c == 0) fail(ErrorKind::NullCell, "ciphertext is the NULL sentinel");
  if (c < ext_bounds(1).lower)
    fail(ErrorKind::NotACiphertext, "value below the first mirrored partition of " + label_);
  if (c > ext_bounds(r_.size()).upper)
    fail(ErrorKind::NotACiphertext, "value above the top mirrored partition of " + label_);
  // Smallest t with c <= U'[t]; U' is strictly increasing.
  std::uint64_t lo = 1, hi = r_.size();
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (ext_bounds(mid).upper >= c)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

Int DomainKey::pick_equality_threshold(SplitRng& rng) const {
  // [R_{t_max}, sigma): wide enough to absorb any same-plaintext spread,
  // strictly below sigma so no ciphertext (and no NULL sentinel mix-up)
  // can bridge two distinct plaintexts.
  return Int(rng.range(r_.back(), sigma_ - 1));
}

std::uint64_t DomainKey::max_supported_sum(std::uint64_t cardinality) const {
  if (cardinality == 0) fail(ErrorKind::Internal, "cardinality must be positive");
  const unsigned __int128 r_max = r_.back();
  const unsigned __int128 budget = (unsigned __int128)sigma_ + r_.front();
  const unsigned __int128 cost = (unsigned __int128)cardinality * r_max;
  if (cost > budget) return 0;
  unsigned __int128 value = (budget - cost) / r_max;
  std::uint64_t v = value > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(value);
  return std::min<std::uint64_t>(v, r_.size());
}

std::vector<Bounds> boundaries_iterative(std::span<const std::uint32_t> r,
                                         std::uint64_t sigma, std::uint64_t upto) {
  if (upto < 1 || upto > r.size())
    fail(ErrorKind::RangeError, "upto must be in [1, len(R)]");
  std::uint32_t r_max = 0, r_1 = r[0];
  for (std::uint64_t i = 0; i < upto; ++i) r_max = std::max(r_max, r[i]);
  if (r_max >= r_1 && sigma <= std::uint64_t(r_max - r_1))
    fail(ErrorKind::KeySizing, "sigma must exceed max(R) - R_1");
  std::vector<Bounds> out(upto);
  out[0].lower = sigma;
  out[0].upper = out[0].lower + r[0];
  for (std::uint64_t t = 2; t <= upto; ++t) {
    Int best = 0;
    for (std::uint64_t i = 1; i < t; ++i)
      best = std::max(best, Int(out[i - 1].upper + out[t - i - 1].upper));
    out[t - 1].lower = best;
    out[t - 1].upper = best + r[t - 1];
  }
  return out;
}

std::vector<Bounds> ext_boundaries_iterative(std::span<const std::uint32_t> r,
                                             std::uint64_t sigma, std::uint64_t upto) {
  if (upto < 1 || upto > r.size())
    fail(ErrorKind::RangeError, "upto must be in [1, len(R)]");
  std::uint32_t r_max = 0;
  for (std::uint64_t i = 0; i < upto; ++i) r_max = std::max(r_max, r[i]);
  if (sigma <= 3ull * r_max)
    fail(ErrorKind::KeySizing, "sigma must exceed 3*max(R)");
  std::vector<Bounds> out(upto);
  out[0].upper = sigma;
  out[0].lower = Int(sigma) - r[0];
  for (std::uint64_t t = 2; t <= upto; ++t) {
    Int best;
    for (std::uint64_t i = 1; i < t; ++i) {
      Int candidate = out[i - 1].lower + out[t - i - 1].lower;
      if (i == 1 || candidate < best) best = candidate;
    }
    out[t - 1].upper = best;
    out[t - 1].lower = best - r[t - 1];
  }
  return out;
}

}  // namespace opeadb
