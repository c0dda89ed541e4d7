#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pkv/index.hpp"

namespace pkv {

struct PhraseMetadata {
  std::uint32_t id = 0;
  std::string phrase;
  std::vector<YearCount> timeline;                                 // ascending by year
  std::vector<std::pair<std::string, std::uint32_t>> top_cpc;      // count desc, text asc
  std::vector<std::pair<std::string, std::uint32_t>> top_applicants;
  std::vector<std::pair<std::string, std::uint32_t>> top_inventors;
  std::uint32_t doc_freq = 0;

  static constexpr std::size_t kTopN = 20;
};

PhraseMetadata phrase_metadata(const SimilarityIndex& index, std::uint32_t id);

/// "%.6f" rendering used for every similarity the service emits.
std::string format_similarity(double similarity);

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

using QueryParams = std::map<std::string, std::string>;

/// Transport-independent request handlers over a shared immutable index.
/// Bodies depend only on the index and the request, never on call history.
class SearchApi {
 public:
  static constexpr std::size_t kDefaultLimit = 20;

  explicit SearchApi(const SimilarityIndex& index) : index_(index) {}

  /// Routes GET /api/search, /api/phrase/{id}, /api/phrase-by-text, /healthz.
  ApiResponse handle(std::string_view path, const QueryParams& params) const;

  ApiResponse search(const QueryParams& params) const;
  ApiResponse phrase_by_id(std::string_view id_text) const;
  ApiResponse phrase_by_text(const QueryParams& params) const;
  ApiResponse health() const;

 private:
  ApiResponse unknown_phrase(std::string_view query) const;

  const SimilarityIndex& index_;
};

std::string metadata_json(const PhraseMetadata& meta);

}  // namespace pkv
