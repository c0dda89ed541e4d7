#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pkv {

enum class ErrorCode {
  // corpus
  MalformedJson,
  MissingField,
  EmptyAbstract,
  NoCpcCodes,
  BadDate,
  DuplicateId,
  FileNotFound,
  IoFailure,
  // cpc
  BadSection,
  BadFormat,
  // extract / embed
  Rejected,
  EmptyVocabulary,
  NotFound,
  // index
  ZeroNorm,
  UnknownPhrase,
  BadMagic,
  VersionMismatch,
  ChecksumMismatch,
  // config / arguments
  BadConfig,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. `code()` identifies the failure class; the message
/// carries the human-readable detail (field name, path, offending text).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pkv
