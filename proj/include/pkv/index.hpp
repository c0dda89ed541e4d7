#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pkv/cpc.hpp"
#include "pkv/embed.hpp"
#include "pkv/error.hpp"
#include "pkv/sparse_vector.hpp"

namespace pkv {

/// |a.b| / (|a| |b|) over sorted entry lists; the dot product is accumulated
/// in integers. Throws Error(ZeroNorm) if either vector is empty.
double cosine(const SparseVector& a, const SparseVector& b);

std::uint64_t dot(const SparseVector& a, const SparseVector& b);

struct SearchResult {
  std::uint32_t id = 0;
  std::string phrase;
  double similarity = 0.0;

  bool operator==(const SearchResult&) const = default;
};

struct SearchPage {
  std::uint32_t query_id = 0;
  std::string query;        // resolved vocabulary text
  std::size_t total = 0;    // phrases with nonzero similarity, query excluded
  std::vector<SearchResult> results;
};

/// Thrown by SimilarityIndex::search for phrases outside the vocabulary.
class UnknownPhraseError : public Error {
 public:
  UnknownPhraseError(std::string query, std::vector<std::string> suggestions)
      : Error(ErrorCode::UnknownPhrase, query), query_(std::move(query)), suggestions_(std::move(suggestions)) {}

  const std::string& query() const { return query_; }
  const std::vector<std::string>& suggestions() const { return suggestions_; }

 private:
  std::string query_;
  std::vector<std::string> suggestions_;
};

/// Immutable exact-search structure over an EmbeddingSet. Phrase ids follow
/// phrase text order, so ordering by id is ordering by text. All tables are
/// stored flat (offset arrays plus value arrays).
class SimilarityIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;
  static constexpr std::size_t kMaxLimit = 1000;
  static constexpr std::size_t kMaxSuggestions = 10;

  SimilarityIndex() = default;

  static SimilarityIndex build(const EmbeddingSet& set);

  std::size_t phrase_count() const { return phrases_.size(); }
  std::size_t dimension_count() const { return dimensions_.size(); }
  GranularityLevel level() const { return level_; }

  const std::string& phrase(std::uint32_t id) const { return phrases_.at(id); }
  std::span<const std::uint32_t> vector_dims(std::uint32_t id) const;
  std::span<const std::uint32_t> vector_counts(std::uint32_t id) const;
  SparseVector vector(std::uint32_t id) const;
  double norm(std::uint32_t id) const { return norms_.at(id); }
  std::uint32_t doc_freq(std::uint32_t id) const { return doc_freq_.at(id); }
  std::span<const YearCount> timeline(std::uint32_t id) const;
  std::span<const EntityCount> applicants(std::uint32_t id) const;
  std::span<const EntityCount> inventors(std::uint32_t id) const;

  std::span<const std::uint32_t> posting_ids(std::uint32_t dim) const;
  std::span<const std::uint32_t> posting_counts(std::uint32_t dim) const;

  const std::string& dimension_text(std::uint32_t dim) const { return dimensions_.at(dim); }
  const std::string& applicant_name(std::uint32_t id) const { return applicant_names_.at(id); }
  const std::string& inventor_name(std::uint32_t id) const { return inventor_names_.at(id); }
  const std::map<std::string, std::uint32_t>& aliases() const { return aliases_; }

  /// Exact lookup by text.
  std::optional<std::uint32_t> id_of(std::string_view text) const;
  /// Normalization plus variant resolution, as for search queries.
  std::optional<std::uint32_t> find(std::string_view query) const;
  /// Up to kMaxSuggestions vocabulary phrases starting with the normalized
  /// query, ascending.
  std::vector<std::string> suggestions(std::string_view query) const;

  /// Slice [offset, offset + limit) of all phrases sharing a dimension with
  /// the query, by similarity descending then text ascending; the query
  /// phrase itself is excluded. Throws UnknownPhraseError, or Error(InvalidArgument)
  /// if limit is outside [1, kMaxLimit].
  SearchPage search(std::string_view query, std::size_t offset, std::size_t limit) const;
  SearchPage search_id(std::uint32_t query_id, std::size_t offset, std::size_t limit) const;

  bool operator==(const SimilarityIndex&) const = default;

  friend void save_index(const SimilarityIndex& index, const std::filesystem::path& path);
  friend SimilarityIndex load_index(const std::filesystem::path& path);
  friend std::vector<std::uint8_t> encode_index(const SimilarityIndex& index);
  friend SimilarityIndex decode_index(std::span<const std::uint8_t> bytes);

 private:
  GranularityLevel level_ = GranularityLevel::MainGroup;
  std::vector<std::string> phrases_;
  std::vector<std::string> dimensions_;
  std::vector<std::string> applicant_names_;
  std::vector<std::string> inventor_names_;
  std::map<std::string, std::uint32_t> aliases_;

  std::vector<std::uint64_t> vec_offsets_{0};
  std::vector<std::uint32_t> vec_dims_;
  std::vector<std::uint32_t> vec_counts_;
  std::vector<double> norms_;
  std::vector<std::uint32_t> doc_freq_;

  std::vector<std::uint64_t> timeline_offsets_{0};
  std::vector<YearCount> timelines_;
  std::vector<std::uint64_t> applicant_offsets_{0};
  std::vector<EntityCount> applicant_counts_;
  std::vector<std::uint64_t> inventor_offsets_{0};
  std::vector<EntityCount> inventor_counts_;

  std::vector<std::uint64_t> post_offsets_{0};
  std::vector<std::uint32_t> post_ids_;
  std::vector<std::uint32_t> post_counts_;
};

inline SimilarityIndex build_index(const EmbeddingSet& set) { return SimilarityIndex::build(set); }

/// Binary little-endian file: magic "PKVX", version, granularity, counts,
/// string table, phrase records, delta/varint posting lists, entity tables,
/// trailing CRC32. Throws Error(IoFailure).
void save_index(const SimilarityIndex& index, const std::filesystem::path& path);
/// Throws Error with IoFailure, BadMagic, VersionMismatch or ChecksumMismatch.
SimilarityIndex load_index(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_index(const SimilarityIndex& index);
SimilarityIndex decode_index(std::span<const std::uint8_t> bytes);

}  // namespace pkv
