#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pkv/config.hpp"
#include "pkv/embed.hpp"
#include "pkv/extract.hpp"

namespace pkv {

struct BuildReport {
  std::size_t records_accepted = 0;
  std::size_t records_rejected = 0;
  std::size_t phrases_extracted = 0;  // distinct phrases before merge/filter
  std::size_t phrases_final = 0;
  std::size_t dimensions = 0;
  double seconds = 0.0;
  std::vector<std::string> errors;    // first few "line N: message" entries

  static constexpr std::size_t kMaxReportedErrors = 20;
};

struct BuildResult {
  EmbeddingSet set;
  BuildReport report;
};

/// Builtin stop words plus the optional custom file from the config.
StopWordList load_stopwords(const Config& config);

/// corpus -> extract -> embed. A record with an unparsable CPC code counts as
/// rejected. Throws Error(FileNotFound/IoFailure/EmptyVocabulary).
BuildResult build_embeddings(const std::filesystem::path& corpus, const Config& config);
BuildResult build_embeddings(std::istream& corpus, const Config& config);

}  // namespace pkv
