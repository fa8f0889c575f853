#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "opeadb/manifest.hpp"
#include "opeadb/opea.hpp"

namespace opeadb {

// Owner-private key material: one comparison-domain key per domain id, plus
// the identifier-pseudonym key. Every key derives deterministically from the
// master seed and the domain's label, so the file stores only the seed and the
// sizing parameters; width sequences are re-derived on load and never written.
struct KeyRing {
  std::vector<std::uint8_t> master_seed;
  std::vector<std::uint8_t> name_key;  // keyed identifier pseudonyms
  std::map<std::string, DomainKey> keys;  // domain id -> key

  static KeyRing derive(std::span<const std::uint8_t> master_seed,
                        const SchemaManifest& manifest);

  const DomainKey& key_for(const std::string& domain_id) const;

  // Versioned text file: master seed hex plus, per domain, the id/label and
  // sizing. Loading re-derives the keys and cross-checks them against the
  // recorded sigma.
  void save(const std::string& path) const;
  static KeyRing load(const std::string& path);
};

std::vector<std::uint8_t> parse_hex(std::string_view hex);
std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace opeadb
