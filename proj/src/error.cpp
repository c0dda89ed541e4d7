#include "pkv/error.hpp"

namespace pkv {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::EmptyAbstract: return "EmptyAbstract";
    case ErrorCode::NoCpcCodes: return "NoCpcCodes";
    case ErrorCode::BadDate: return "BadDate";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::BadSection: return "BadSection";
    case ErrorCode::BadFormat: return "BadFormat";
    case ErrorCode::Rejected: return "Rejected";
    case ErrorCode::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::UnknownPhrase: return "UnknownPhrase";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace pkv
