#include "opeadb/keyring.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "opeadb/errors.hpp"
#include "opeadb/rng.hpp"

namespace opeadb {

using nlohmann::json;

std::vector<std::uint8_t> parse_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(ErrorKind::Io, "odd-length hex string");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error(ErrorKind::Io, "invalid hex digit");
  };
  std::vector<std::uint8_t> out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
  }
  return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

static std::vector<std::uint8_t> derive_name_key(std::span<const std::uint8_t> seed) {
  SeedStream stream(seed, "identifier-pseudonyms");
  std::vector<std::uint8_t> key(32);
  for (auto& b : key) b = stream.next_byte();
  return key;
}

KeyRing KeyRing::derive(std::span<const std::uint8_t> master_seed,
                        const SchemaManifest& manifest) {
  if (master_seed.empty()) {
    throw Error(ErrorKind::KeySizing, "master seed must not be empty");
  }
  KeyRing ring;
  ring.master_seed.assign(master_seed.begin(), master_seed.end());
  ring.name_key = derive_name_key(master_seed);
  for (const auto& [id, info] : manifest.domains) {
    ring.keys.emplace(id, DomainKey::derive(master_seed, info.label, info.config));
  }
  return ring;
}

const DomainKey& KeyRing::key_for(const std::string& domain_id) const {
  auto it = keys.find(domain_id);
  if (it == keys.end()) {
    throw Error(ErrorKind::KeySizing, "no key for comparison domain '" + domain_id + "'");
  }
  return it->second;
}

void KeyRing::save(const std::string& path) const {
  json doc;
  doc["version"] = 1;
  doc["seed"] = to_hex(master_seed);
  json domains = json::object();
  for (const auto& [id, key] : keys) {
    const DomainConfig& c = key.config();
    domains[id] = {{"label", key.label()},
                   {"t", c.t},
                   {"max_sum", c.max_sum},
                   {"max_group", c.max_group},
                   {"r_bits", c.r_bits},
                   {"sigma", key.sigma()}};
  }
  doc["domains"] = std::move(domains);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write key file '" + path + "'");
  out << doc.dump(2) << "\n";
  if (!out.good()) throw Error(ErrorKind::Io, "short write to '" + path + "'");
}

KeyRing KeyRing::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read key file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed key file: ") + e.what());
  }
  try {
    if (doc.at("version").get<int>() != 1) {
      throw Error(ErrorKind::Io, "unsupported key file version");
    }
    KeyRing ring;
    ring.master_seed = parse_hex(doc.at("seed").get<std::string>());
    if (ring.master_seed.empty()) {
      throw Error(ErrorKind::Io, "key file has an empty seed");
    }
    ring.name_key = derive_name_key(ring.master_seed);
    for (const auto& [id, d] : doc.at("domains").items()) {
      DomainConfig cfg;
      cfg.t = d.at("t").get<std::uint64_t>();
      cfg.max_sum = d.at("max_sum").get<std::uint64_t>();
      cfg.max_group = d.at("max_group").get<std::uint64_t>();
      cfg.r_bits = d.at("r_bits").get<unsigned>();
      DomainKey key =
          DomainKey::derive(ring.master_seed, d.at("label").get<std::string>(), cfg);
      if (key.sigma() != d.at("sigma").get<std::uint64_t>()) {
        throw Error(ErrorKind::KeySizing,
                    "re-derived key for domain '" + id + "' disagrees with the file");
      }
      ring.keys.emplace(id, std::move(key));
    }
    return ring;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed key file: ") + e.what());
  }
}

}  // namespace opeadb
