#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pkv/corpus.hpp"
#include "pkv/cpc.hpp"
#include "pkv/extract.hpp"
#include "pkv/sparse_vector.hpp"

namespace pkv {

using YearCount = std::pair<std::int32_t, std::uint32_t>;     // (year, count)
using EntityCount = std::pair<std::uint32_t, std::uint32_t>;  // (entity id, count)

/// One vocabulary entry with its four metadata vectors.
struct KeyPhrase {
  std::string phrase;
  SparseVector cpc_vector;
  std::vector<YearCount> timeline;           // ascending by year
  std::vector<EntityCount> applicant_counts; // ascending by id
  std::vector<EntityCount> inventor_counts;  // ascending by id
  std::uint32_t doc_freq = 0;

  bool operator==(const KeyPhrase&) const = default;
};

/// Finalized vocabulary. Phrases are sorted by text, so a phrase's position is
/// also its rank in text order. Dimension and entity ids are assigned in
/// ascending text order, which makes the set independent of record order.
struct EmbeddingSet {
  GranularityLevel level = GranularityLevel::MainGroup;
  std::vector<KeyPhrase> phrases;
  DimensionRegistry registry;
  std::vector<std::string> applicants;
  std::vector<std::string> inventors;
  /// Folded variant -> canonical phrase text, for phrases that survived.
  std::map<std::string, std::string> aliases;

  /// Position of `query` after normalization and variant resolution.
  std::optional<std::size_t> find(std::string_view query) const;

  bool operator==(const EmbeddingSet&) const = default;
};

/// Resolves free query text against a vocabulary: normalize, exact match,
/// recorded alias, then the suffix rules applied repeatedly. Returns the
/// matching vocabulary text.
std::optional<std::string> resolve_phrase(std::string_view query,
                                          const std::function<bool(const std::string&)>& contains,
                                          const std::function<const std::string*(const std::string&)>& alias);

/// Throws Error(NotFound).
const SparseVector& phrase_vector(const EmbeddingSet& set, std::string_view phrase);

/// Additive accumulator for the per-phrase metadata vectors. Builders over
/// disjoint record partitions can be merged.
class EmbeddingBuilder {
 public:
  explicit EmbeddingBuilder(GranularityLevel level = GranularityLevel::MainGroup) : level_(level) {}

  /// Adds one (phrase, record) occurrence: every listed CPC code, truncated to
  /// the builder level, adds 1 to its dimension; the record's year, applicants
  /// and inventors add 1 each; doc_freq adds 1. Repeating the same record for
  /// the same phrase back to back is a no-op. Throws Error(BadSection/BadFormat)
  /// on an unparsable CPC code.
  void accumulate(std::string_view phrase, const PatentRecord& record);

  /// accumulate() for each distinct phrase of one record, parsing codes once.
  void add_record(const PatentRecord& record, std::span<const std::string> phrases);

  void merge(EmbeddingBuilder&& other);

  GranularityLevel level() const { return level_; }
  std::size_t phrase_count() const { return phrases_.size(); }
  std::vector<std::string> vocabulary() const;

 private:
  struct Accum {
    std::unordered_map<std::uint32_t, std::uint32_t> cpc;
    std::map<std::int32_t, std::uint32_t> timeline;
    std::unordered_map<std::uint32_t, std::uint32_t> applicants;
    std::unordered_map<std::uint32_t, std::uint32_t> inventors;
    std::uint32_t doc_freq = 0;
    std::string last_patent;
  };
  struct RecordKeys {
    std::vector<std::uint32_t> dims;
    std::vector<std::uint32_t> applicants;
    std::vector<std::uint32_t> inventors;
  };

  RecordKeys keys_for(const PatentRecord& record);
  void add(Accum& acc, const RecordKeys& keys, const PatentRecord& record);

  friend EmbeddingSet finalize(const EmbeddingBuilder&, const VariantMap&, std::uint32_t);

  GranularityLevel level_;
  std::unordered_map<std::string, Accum> phrases_;
  DimensionRegistry dims_;
  DimensionRegistry applicants_;
  DimensionRegistry inventors_;
};

/// Folds variants onto their canonical phrases (all counts summed), drops
/// phrases with doc_freq below `min_doc_freq` and canonicalizes ids. Throws
/// Error(EmptyVocabulary) if nothing survives.
EmbeddingSet finalize(const EmbeddingBuilder& builder, const VariantMap& variants, std::uint32_t min_doc_freq);

/// finalize() with the variant map computed from the builder's vocabulary.
EmbeddingSet finalize(const EmbeddingBuilder& builder, std::uint32_t min_doc_freq);

}  // namespace pkv
