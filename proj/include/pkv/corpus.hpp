#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "pkv/error.hpp"

namespace pkv {

/// Calendar date at day granularity. Years outside [1800, 2100] are rejected.
struct Date {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  /// Parses strict "YYYY-MM-DD"; throws Error(BadDate).
  static Date parse(std::string_view text);
  std::string to_string() const;

  auto operator<=>(const Date&) const = default;
};

struct PatentRecord {
  std::string patent_id;
  std::string abstract;
  std::vector<std::string> cpc_codes;
  Date application_date;
  std::vector<std::string> applicants;
  std::vector<std::string> inventors;

  bool operator==(const PatentRecord&) const = default;
};

/// Parses one JSON Lines record. Unknown fields are ignored; `applicants` and
/// `inventors` are optional. Throws Error with MalformedJson, MissingField,
/// EmptyAbstract, NoCpcCodes or BadDate.
PatentRecord parse_patent_record(std::string_view line);

/// Inverse of parse_patent_record: a single-line JSON object.
std::string serialize_patent_record(const PatentRecord& record);

struct CorpusEntry {
  std::size_t line_number = 0;  // 1-based
  std::variant<PatentRecord, Error> value;

  bool ok() const { return std::holds_alternative<PatentRecord>(value); }
  const PatentRecord& record() const { return std::get<PatentRecord>(value); }
  const Error& error() const { return std::get<Error>(value); }
};

struct LoadTotals {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t lines() const { return accepted + rejected; }
};

/// Sequential streaming reader over a JSONL corpus. Holds one line at a time
/// plus the set of already accepted patent ids; a later record reusing an id
/// is yielded as a DuplicateId error.
class CorpusReader {
 public:
  /// Throws Error(FileNotFound) or Error(IoFailure).
  explicit CorpusReader(const std::filesystem::path& path);
  /// Reads from a caller-owned stream.
  explicit CorpusReader(std::istream& in);

  CorpusReader(CorpusReader&&) noexcept = default;
  CorpusReader& operator=(CorpusReader&&) noexcept = default;

  /// Next line's outcome, or nullopt at end of input. Throws Error(IoFailure)
  /// if the underlying stream fails mid-read.
  std::optional<CorpusEntry> next();

  const LoadTotals& totals() const { return totals_; }

 private:
  std::unique_ptr<std::ifstream> owned_;
  std::istream* in_ = nullptr;
  std::string source_;
  std::size_t line_number_ = 0;
  std::unordered_set<std::string> seen_ids_;
  LoadTotals totals_;
};

inline CorpusReader load_corpus(const std::filesystem::path& path) { return CorpusReader(path); }

}  // namespace pkv
