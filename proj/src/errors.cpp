#include "opeadb/errors.hpp"

namespace opeadb {

std::string_view error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Lex: return "LexError";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::UnsupportedFeature: return "UnsupportedFeature";
    case ErrorKind::PermissionDenied: return "PermissionDenied";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::DomainRange: return "DomainRange";
    case ErrorKind::KeySizing: return "KeySizing";
    case ErrorKind::NullCell: return "NullCell";
    case ErrorKind::NotACiphertext: return "NotACiphertext";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::Encoding: return "EncodingError";
    case ErrorKind::Decode: return "DecodeError";
    case ErrorKind::MalformedCell: return "MalformedCell";
    case ErrorKind::ManifestMismatch: return "ManifestMismatch";
    case ErrorKind::InconsistentSumProbe: return "InconsistentSumProbe";
    case ErrorKind::SumProtocolFailure: return "SumProtocolFailure";
    case ErrorKind::SumRangeExceeded: return "SumRangeExceeded";
    case ErrorKind::SubqueryCardinality: return "SubqueryCardinality";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::Internal: return "InternalError";
  }
  return "Error";
}

}  // namespace opeadb
