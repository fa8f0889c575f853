#include <set>
#include <string>

#include "opeadb/errors.hpp"
#include "opeadb/translate.hpp"

namespace opeadb {

namespace {

constexpr unsigned char kMinChar = 32;
constexpr unsigned char kMaxChar = 126;

// Character-class body between [ and ], already unescaped of the ] terminator.
// '^' first negates; '-' between two members is a range, literal at the ends.
struct ClassSpec {
  bool negated = false;
  std::set<unsigned char> members;
};

ClassSpec parse_class(const std::string& body, std::optional<char> escape) {
  ClassSpec spec;
  std::size_t i = 0;
  if (!body.empty() && body[0] == '^' && body.size() > 1) {
    spec.negated = true;
    i = 1;
  }
  std::vector<unsigned char> items;  // literal chars in order; ranges expand in place
  std::vector<bool> literal_dash;
  while (i < body.size()) {
    char c = body[i];
    if (escape && c == *escape && i + 1 < body.size()) {
      items.push_back(static_cast<unsigned char>(body[i + 1]));
      literal_dash.push_back(true);  // escaped '-' never forms a range
      i += 2;
      continue;
    }
    items.push_back(static_cast<unsigned char>(c));
    literal_dash.push_back(false);
    ++i;
  }
  for (std::size_t k = 0; k < items.size();) {
    // '-' forms a range only strictly between two members; elsewhere (first,
    // last, or left over after a range) it is a literal member.
    if (k + 2 < items.size() && items[k + 1] == '-' && !literal_dash[k + 1]) {
      unsigned char lo = items[k];
      unsigned char hi = items[k + 2];
      if (lo > hi) fail(ErrorKind::Parse, "LIKE class range runs backwards");
      for (unsigned c = lo; c <= hi; ++c) spec.members.insert(static_cast<unsigned char>(c));
      k += 3;
      continue;
    }
    spec.members.insert(items[k]);
    ++k;
  }
  return spec;
}

MatchAtom make_literal(unsigned char c, const DomainKey& key, SplitRng& rng) {
  MatchAtom atom;
  atom.kind = MatchAtom::Kind::Literal;
  atom.ciphers.push_back(key.encrypt(c, rng));
  atom.matches_blank = (c == ' ');
  return atom;
}

MatchAtom make_any() {
  MatchAtom atom;
  atom.kind = MatchAtom::Kind::AnyOne;
  atom.matches_blank = true;
  return atom;
}

MatchAtom make_class(const ClassSpec& spec, const DomainKey& key, SplitRng& rng) {
  MatchAtom atom;
  atom.kind = MatchAtom::Kind::Class;
  atom.class_negated = spec.negated;
  for (unsigned char c : spec.members) {
    if (c < kMinChar || c > kMaxChar) {
      fail(ErrorKind::Parse, "LIKE class member outside the encodable range");
    }
    atom.ciphers.push_back(key.encrypt(c, rng));
  }
  atom.matches_blank = spec.members.count(' ') != 0;
  if (spec.negated) atom.matches_blank = !atom.matches_blank;
  return atom;
}

}  // namespace

MatchProgram compile_like_pattern(const std::string& pattern, std::optional<char> escape,
                                  const DomainKey& key, const Int& x,
                                  PlanColumn::Layout subject, unsigned fixed_digits,
                                  SplitRng& rng) {
  MatchProgram prog;
  prog.subject = subject;
  prog.fixed_digits = fixed_digits;
  prog.x = x;

  bool any_percent = false;
  bool leading_percent = false;
  bool trailing_percent = false;
  MatchSegment current;
  auto flush = [&] {
    if (!current.atoms.empty()) {
      prog.segments.push_back(std::move(current));
      current = MatchSegment{};
    }
  };

  std::size_t i = 0;
  bool saw_atom = false;
  while (i < pattern.size()) {
    char c = pattern[i];
    if (escape && c == *escape) {
      if (i + 1 >= pattern.size()) fail(ErrorKind::Parse, "LIKE pattern ends inside an escape");
      current.atoms.push_back(
          make_literal(static_cast<unsigned char>(pattern[i + 1]), key, rng));
      saw_atom = true;
      trailing_percent = false;
      i += 2;
      continue;
    }
    if (c == '%') {
      any_percent = true;
      if (!saw_atom) leading_percent = true;
      trailing_percent = true;
      flush();
      ++i;
      continue;
    }
    if (c == '_') {
      current.atoms.push_back(make_any());
    } else if (c == '[') {
      std::size_t end = i + 1;
      bool esc = false;
      while (end < pattern.size()) {
        if (esc) {
          esc = false;
        } else if (escape && pattern[end] == *escape) {
          esc = true;
        } else if (pattern[end] == ']') {
          break;
        }
        ++end;
      }
      if (end >= pattern.size()) fail(ErrorKind::Parse, "LIKE pattern has an unterminated [class]");
      current.atoms.push_back(
          make_class(parse_class(pattern.substr(i + 1, end - i - 1), escape), key, rng));
      i = end;  // ++i below steps past ']'
    } else {
      current.atoms.push_back(make_literal(static_cast<unsigned char>(c), key, rng));
    }
    saw_atom = true;
    trailing_percent = false;
    ++i;
  }
  flush();

  prog.anchored_start = !leading_percent;
  prog.anchored_end = !any_percent || !trailing_percent;
  prog.min_length = 0;
  for (const MatchSegment& seg : prog.segments) prog.min_length += seg.atoms.size();
  return prog;
}

}  // namespace opeadb
