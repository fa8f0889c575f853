#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace opeadb {

enum class ErrorKind {
  Lex,                  // bad token stream (unterminated literal, stray byte)
  Parse,                // token stream does not match the grammar
  UnknownIdentifier,    // table/column/variable fails to resolve
  UnsupportedFeature,   // grammar-adjacent construct we deliberately reject
  PermissionDenied,     // session principal lacks access to a table
  TypeMismatch,         // operand types disagree (e.g. numeric column vs string)
  DomainRange,          // plaintext value outside the column's declared bounds
  KeySizing,            // key parameters violate a derivation precondition
  NullCell,             // decrypt asked on the NULL sentinel
  NotACiphertext,       // integer outside every partition of the domain
  RangeError,           // plaintext outside [1, T] for the domain
  Encoding,             // value cannot be encoded under the column rule
  Decode,               // code stream cannot be mapped back to a value
  MalformedCell,        // stored cell text fails to parse
  ManifestMismatch,     // store contents disagree with the manifest
  InconsistentSumProbe, // sum probe satisfied no decision branch
  SumProtocolFailure,   // exact-sum recovery exhausted its probe window
  SumRangeExceeded,     // requested sum constant exceeds the supported budget
  SubqueryCardinality,  // scalar subquery produced more than one row
  Io,                   // file system failure
  Internal,             // invariant breach inside the library itself
};

std::string_view error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace opeadb
