#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pkv {

struct ExtractConfig {
  std::size_t max_phrase_len = 5;
  double min_phrase_score = 1.0;
};

class StopWordList {
 public:
  enum class Source { Builtin, Custom };

  StopWordList() = default;

  /// The versioned list compiled into the library.
  static const StopWordList& builtin();
  /// Parses one token per line; '#' starts a comment. Throws Error(BadConfig)
  /// for entries with internal whitespace.
  static StopWordList parse(std::string_view content, Source source);
  /// Throws Error(FileNotFound) or Error(BadConfig).
  static StopWordList from_file(const std::filesystem::path& path);

  void add(std::string_view word);
  void merge(const StopWordList& other);
  bool contains(std::string_view word) const { return words_.find(word) != words_.end(); }
  std::size_t size() const { return words_.size(); }
  Source source() const { return source_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_set<std::string, Hash, std::equal_to<>> words_;
  Source source_ = Source::Custom;
};

using Tokens = std::vector<std::string>;

struct CandidatePhrase {
  Tokens tokens;
  double score = 0.0;

  std::string text() const;
};

/// Lowercases `text` and splits it into maximal runs of non-stop tokens.
/// Runs end at stop words, pure-number tokens, sentence punctuation and line
/// breaks; hyphens separate tokens without ending a run. Runs longer than
/// `max_phrase_len` keep their first `max_phrase_len` tokens.
std::vector<Tokens> split_candidates(std::string_view text, const StopWordList& stops,
                                     std::size_t max_phrase_len = 5);

/// RAKE scoring: word score deg(w)/freq(w), phrase score the sum over its
/// tokens. Distinct phrases, descending score, ties by phrase text.
std::vector<CandidatePhrase> score_phrases(std::span<const Tokens> candidates);

/// Mixed digit/letter tokens and tokens longer than 30 code points.
bool is_cryptic_token(std::string_view token);

/// Drops cryptic tokens and joins the rest with single spaces; nullopt when
/// nothing (or only a lone stop word) remains.
std::optional<std::string> normalize_phrase(std::span<const std::string> tokens,
                                            const StopWordList& stops);

/// Normalizes free text typed as a query: same tokenization and cryptic-token
/// rule as extraction, stop words are kept. May return an empty string.
std::string normalize_query(std::string_view text);

/// Folding of trailing-"s" and gerund variants onto a base phrase present in
/// the vocabulary. Stores only non-identity entries.
class VariantMap {
 public:
  /// Canonical target of `phrase` (itself when it is not a variant).
  const std::string& canonical(const std::string& phrase) const;
  bool is_variant(const std::string& phrase) const { return targets_.count(phrase) != 0; }
  const std::unordered_map<std::string, std::string>& entries() const { return targets_; }
  void set(std::string variant, std::string target) { targets_[std::move(variant)] = std::move(target); }

 private:
  std::unordered_map<std::string, std::string> targets_;
};

/// Candidate base forms of `phrase` under the suffix rules, in priority order:
/// strip a trailing "s"; or for a final token longer than four characters
/// ending in "ing", strip "ing", then strip "ing" and append "e".
std::vector<std::string> variant_bases(std::string_view phrase);

VariantMap merge_variants(std::span<const std::string> vocabulary);

/// Per-abstract extraction: split, score, keep phrases scoring at least
/// `min_phrase_score` with an alphabetic token, normalize. Distinct phrases in
/// descending score order.
std::vector<std::string> extract_phrases(std::string_view abstract, const StopWordList& stops,
                                         const ExtractConfig& config = {});

}  // namespace pkv
