#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "opeadb/errors.hpp"
#include "opeadb/manifest.hpp"
#include "opeadb/sha256.hpp"

namespace opeadb {

using nlohmann::json;

std::string normalize_ident(std::string_view name) {
  std::string out(name);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return char(std::toupper(c)); });
  return out;
}

std::string anonymize_identifier(const std::vector<std::uint8_t>& name_key,
                                 std::string_view name) {
  std::string canon = normalize_ident(name);
  auto mac = hmac_sha256(name_key, std::vector<std::uint8_t>(canon.begin(), canon.end()));
  std::string hex = hex_encode(mac);
  return "C" + hex.substr(0, 16);
}

const ColumnSpec* TableSpec::find_column(std::string_view column) const {
  std::string canon = normalize_ident(column);
  for (const ColumnSpec& c : columns) {
    if (normalize_ident(c.name) == canon) return &c;
  }
  return nullptr;
}

const TableSpec* SchemaManifest::find_table(std::string_view name) const {
  std::string canon = normalize_ident(name);
  for (const TableSpec& t : tables) {
    if (normalize_ident(t.name) == canon) return &t;
  }
  return nullptr;
}

const DomainInfo& SchemaManifest::domain_of(const ColumnSpec& col) const {
  auto it = domains.find(col.domain);
  if (it == domains.end()) {
    fail(ErrorKind::ManifestMismatch,
         "column '" + col.name + "' names undeclared domain '" + col.domain + "'");
  }
  return it->second;
}

bool SchemaManifest::allows(const std::string& principal, const std::string& table) const {
  auto it = principals.find(principal);
  if (it == principals.end()) return false;
  std::string canon = normalize_ident(table);
  for (const std::string& entry : it->second) {
    if (entry == "*" || normalize_ident(entry) == canon) return true;
  }
  return false;
}

void SchemaManifest::validate() const {
  std::set<std::string> anon_names;
  std::set<std::string> plain_names;
  // Codes of two columns are comparable only if the columns map plaintexts
  // identically, so a domain pins the rule and the rule's code-shaping knobs.
  std::map<std::string, const ColumnSpec*> domain_rep;
  auto check_domain_shape = [&](const ColumnSpec& c) {
    auto [it, fresh] = domain_rep.emplace(c.domain, &c);
    if (fresh) return;
    const ColumnSpec& rep = *it->second;
    bool ok = rep.rule == c.rule;
    if (ok && c.rule == EncodingRule::Numeric) {
      ok = rep.min == c.min && rep.scale == c.scale;
    }
    if (ok && c.rule == EncodingRule::Packed) {
      ok = rep.width == c.width && rep.sem == c.sem;
    }
    if (!ok) {
      fail(ErrorKind::ManifestMismatch,
           "columns '" + rep.name + "' and '" + c.name + "' share domain '" + c.domain +
               "' but encode differently");
    }
  };
  for (const TableSpec& t : tables) {
    if (t.anon_name.empty()) {
      fail(ErrorKind::ManifestMismatch, "table '" + t.name + "' lacks an anonymized name");
    }
    if (!plain_names.insert(normalize_ident(t.name)).second) {
      fail(ErrorKind::ManifestMismatch, "duplicate table '" + t.name + "'");
    }
    if (!anon_names.insert(t.anon_name).second) {
      fail(ErrorKind::ManifestMismatch, "anonymization collision on '" + t.anon_name + "'");
    }
    std::set<std::string> cols;
    for (const ColumnSpec& c : t.columns) {
      validate_column_spec(c);
      if (c.anon_name.empty()) {
        fail(ErrorKind::ManifestMismatch, "column '" + c.name + "' lacks an anonymized name");
      }
      if (!cols.insert(normalize_ident(c.name)).second) {
        fail(ErrorKind::ManifestMismatch,
             "duplicate column '" + c.name + "' in table '" + t.name + "'");
      }
      if (!anon_names.insert(c.anon_name).second) {
        fail(ErrorKind::ManifestMismatch, "anonymization collision on '" + c.anon_name + "'");
      }
      const DomainInfo& dom = domain_of(c);
      if (dom.config.t < domain_plain_cap(c)) {
        fail(ErrorKind::ManifestMismatch,
             "domain '" + dom.id + "' is too narrow for column '" + c.name + "'");
      }
      check_domain_shape(c);
    }
  }
}

namespace {

std::string sem_name(SemType s) {
  switch (s) {
    case SemType::Integer: return "integer";
    case SemType::Decimal: return "decimal";
    case SemType::Char: return "char";
    case SemType::Varchar: return "varchar";
  }
  fail(ErrorKind::Internal, "bad sem type");
}

SemType sem_from(const std::string& s) {
  if (s == "integer") return SemType::Integer;
  if (s == "decimal") return SemType::Decimal;
  if (s == "char") return SemType::Char;
  if (s == "varchar") return SemType::Varchar;
  fail(ErrorKind::ManifestMismatch, "unknown column type '" + s + "'");
}

std::string rule_name(EncodingRule r) {
  switch (r) {
    case EncodingRule::Numeric: return "numeric";
    case EncodingRule::Fuzzy: return "fuzzy";
    case EncodingRule::Packed: return "packed";
    case EncodingRule::Fixed: return "fixed";
  }
  fail(ErrorKind::Internal, "bad encoding rule");
}

EncodingRule rule_from(const std::string& s) {
  if (s == "numeric") return EncodingRule::Numeric;
  if (s == "fuzzy") return EncodingRule::Fuzzy;
  if (s == "packed") return EncodingRule::Packed;
  if (s == "fixed") return EncodingRule::Fixed;
  fail(ErrorKind::ManifestMismatch, "unknown encoding rule '" + s + "'");
}

json column_to_json(const ColumnSpec& c) {
  json j;
  j["name"] = c.name;
  j["anon_name"] = c.anon_name;
  j["type"] = sem_name(c.sem);
  j["min"] = c.min;
  j["max"] = c.max;
  j["scale"] = c.scale;
  j["width"] = c.width;
  j["rule"] = rule_name(c.rule);
  j["domain"] = c.domain;
  j["extension"] = c.needs_extension;
  j["nullable"] = c.nullable;
  return j;
}

ColumnSpec column_from_json(const json& j) {
  ColumnSpec c;
  c.name = j.at("name").get<std::string>();
  c.anon_name = j.value("anon_name", "");
  c.sem = sem_from(j.at("type").get<std::string>());
  c.min = j.value("min", 1LL);
  c.max = j.value("max", 1LL);
  c.scale = j.value("scale", 0u);
  c.width = j.value("width", 0u);
  c.rule = rule_from(j.at("rule").get<std::string>());
  c.domain = j.at("domain").get<std::string>();
  c.needs_extension = j.value("extension", false);
  c.nullable = j.value("nullable", true);
  return c;
}

}  // namespace

std::string SchemaManifest::to_json() const {
  json j;
  j["version"] = 1;
  j["tables"] = json::array();
  for (const TableSpec& t : tables) {
    json jt;
    jt["name"] = t.name;
    jt["anon_name"] = t.anon_name;
    jt["columns"] = json::array();
    for (const ColumnSpec& c : t.columns) jt["columns"].push_back(column_to_json(c));
    j["tables"].push_back(std::move(jt));
  }
  j["domains"] = json::object();
  for (const auto& [id, dom] : domains) {
    json jd;
    jd["label"] = dom.label;
    jd["t"] = dom.config.t;
    jd["max_sum"] = dom.config.max_sum;
    jd["max_group"] = dom.config.max_group;
    jd["r_bits"] = dom.config.r_bits;
    j["domains"][id] = std::move(jd);
  }
  j["principals"] = principals;
  return j.dump(2);
}

SchemaManifest SchemaManifest::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ManifestMismatch, std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("version", 0) != 1) {
      fail(ErrorKind::ManifestMismatch, "unsupported manifest version");
    }
    SchemaManifest m;
    for (const json& jt : j.at("tables")) {
      TableSpec t;
      t.name = jt.at("name").get<std::string>();
      t.anon_name = jt.value("anon_name", "");
      for (const json& jc : jt.at("columns")) t.columns.push_back(column_from_json(jc));
      m.tables.push_back(std::move(t));
    }
    for (const auto& [id, jd] : j.at("domains").items()) {
      DomainInfo dom;
      dom.id = id;
      dom.label = jd.at("label").get<std::string>();
      dom.config.t = jd.at("t").get<std::uint64_t>();
      dom.config.max_sum = jd.at("max_sum").get<std::uint64_t>();
      dom.config.max_group = jd.at("max_group").get<std::uint64_t>();
      dom.config.r_bits = jd.at("r_bits").get<unsigned>();
      m.domains[id] = std::move(dom);
    }
    if (j.contains("principals")) {
      m.principals = j.at("principals").get<std::map<std::string, std::vector<std::string>>>();
    }
    return m;
  } catch (const json::exception& e) {
    fail(ErrorKind::ManifestMismatch, std::string("manifest field error: ") + e.what());
  }
}

void SchemaManifest::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write manifest to " + path);
  out << to_json() << "\n";
}

SchemaManifest SchemaManifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read manifest from " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace opeadb
