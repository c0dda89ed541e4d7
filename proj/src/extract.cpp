#include "pkv/extract.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "pkv/error.hpp"
#include "pkv/text.hpp"

namespace pkv {
namespace {

constexpr const char* kBuiltinStopwords =
#include "pkv/builtin_stopwords.inc"
    ;

constexpr std::size_t kMaxTokenLength = 30;

bool is_token_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || text::is_ascii_digit(c) || (c >= 'a' && c <= 'z');
}

// Tokenizes lowercased text into words with run breaks marked by empty
// strings. A possessive "'s" is dropped and ends the run; a hyphen or whitespace separates
// tokens inside a run; sentence punctuation (. , ; : ! ? ( ) [ ] "), line
// breaks and any other ASCII symbol break the run.
std::vector<std::string> lex(std::string_view lowered) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < lowered.size(); ++i) {
    const char c = lowered[i];
    if (is_token_char(c)) {
      cur.push_back(c);
    } else if (c == '\'' && !cur.empty() && i + 1 < lowered.size() && lowered[i + 1] == 's' &&
               (i + 2 == lowered.size() || !is_token_char(lowered[i + 2]))) {
      flush();
      if (out.empty() || !out.back().empty()) out.emplace_back();
      ++i;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f' || c == '-') {
      flush();
    } else {
      flush();
      if (out.empty() || !out.back().empty()) out.emplace_back();
    }
  }
  flush();
  return out;
}

bool has_letter(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](char c) {
    return static_cast<unsigned char>(c) >= 0x80 || text::is_ascii_alpha(c);
  });
}

std::string join(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

}  // namespace

const StopWordList& StopWordList::builtin() {
  static const StopWordList list = parse(kBuiltinStopwords, Source::Builtin);
  return list;
}

StopWordList StopWordList::parse(std::string_view content, Source source) {
  StopWordList list;
  list.source_ = source;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string word = line.substr(b, e - b + 1);
    if (word.find_first_of(" \t") != std::string::npos) {
      throw Error(ErrorCode::BadConfig, "stop word with whitespace: '" + word + "'");
    }
    list.add(word);
  }
  return list;
}

StopWordList StopWordList::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), Source::Custom);
}

void StopWordList::add(std::string_view word) {
  if (!word.empty()) words_.insert(text::to_lower(word));
}

void StopWordList::merge(const StopWordList& other) {
  words_.insert(other.words_.begin(), other.words_.end());
}

std::string CandidatePhrase::text() const { return join(tokens); }

std::vector<Tokens> split_candidates(std::string_view input, const StopWordList& stops,
                                     std::size_t max_phrase_len) {
  std::vector<Tokens> runs;
  Tokens run;
  auto close_run = [&] {
    if (run.empty()) return;
    if (run.size() > max_phrase_len) run.resize(max_phrase_len);
    runs.push_back(std::move(run));
    run.clear();
  };
  for (auto& tok : lex(text::to_lower(input))) {
    if (tok.empty() || stops.contains(tok) || text::is_all_digits(tok)) {
      close_run();
    } else {
      run.push_back(std::move(tok));
    }
  }
  close_run();
  return runs;
}

std::vector<CandidatePhrase> score_phrases(std::span<const Tokens> candidates) {
  struct WordStats {
    double freq = 0;
    double degree = 0;
  };
  std::unordered_map<std::string_view, WordStats> stats;
  for (const auto& cand : candidates) {
    for (const auto& w : cand) {
      auto& s = stats[w];
      s.freq += 1;
      s.degree += static_cast<double>(cand.size());
    }
  }

  std::map<std::string, const Tokens*> distinct;
  for (const auto& cand : candidates) distinct.emplace(join(cand), &cand);

  std::vector<CandidatePhrase> out;
  out.reserve(distinct.size());
  for (const auto& [text, tokens] : distinct) {
    double score = 0;
    for (const auto& w : *tokens) {
      const auto& s = stats.at(w);
      score += s.degree / s.freq;
    }
    out.push_back({*tokens, score});
  }
  // `distinct` is already in text order, so a stable sort on score alone
  // leaves ties ordered by text.
  std::stable_sort(out.begin(), out.end(),
                   [](const CandidatePhrase& a, const CandidatePhrase& b) { return a.score > b.score; });
  return out;
}

bool is_cryptic_token(std::string_view token) {
  if (text::utf8_length(token) > kMaxTokenLength) return true;
  bool digit = false;
  bool letter = false;
  for (char c : token) {
    if (text::is_ascii_digit(c)) {
      digit = true;
    } else if (text::is_ascii_alpha(c) || static_cast<unsigned char>(c) >= 0x80) {
      letter = true;
    }
  }
  return digit && letter;
}

std::optional<std::string> normalize_phrase(std::span<const std::string> tokens,
                                            const StopWordList& stops) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const auto& t : tokens) {
    std::string lowered = text::to_lower(t);
    if (lowered.empty() || is_cryptic_token(lowered)) continue;
    kept.push_back(std::move(lowered));
  }
  if (kept.empty()) return std::nullopt;
  if (kept.size() == 1 && stops.contains(kept.front())) return std::nullopt;
  return join(kept);
}

std::string normalize_query(std::string_view input) {
  std::vector<std::string> kept;
  for (auto& tok : lex(text::to_lower(input))) {
    if (!tok.empty() && !is_cryptic_token(tok)) kept.push_back(std::move(tok));
  }
  return join(kept);
}

const std::string& VariantMap::canonical(const std::string& phrase) const {
  auto it = targets_.find(phrase);
  return it == targets_.end() ? phrase : it->second;
}

std::vector<std::string> variant_bases(std::string_view phrase) {
  std::vector<std::string> out;
  const auto space = phrase.rfind(' ');
  const std::string_view last = space == std::string_view::npos ? phrase : phrase.substr(space + 1);
  if (last.size() > 1 && last.back() == 's') {
    out.emplace_back(phrase.substr(0, phrase.size() - 1));
  } else if (last.size() > 4 && last.ends_with("ing")) {
    std::string stem(phrase.substr(0, phrase.size() - 3));
    out.push_back(stem);
    out.push_back(stem + "e");
  }
  return out;
}

VariantMap merge_variants(std::span<const std::string> vocabulary) {
  std::unordered_set<std::string_view> present(vocabulary.begin(), vocabulary.end());

  // One-step targets first, then chains are resolved to their fixed point.
  // Every rule shortens the phrase, so chains terminate.
  std::unordered_map<std::string_view, std::string_view> step;
  for (const auto& p : vocabulary) {
    for (const auto& base : variant_bases(p)) {
      if (auto it = present.find(base); it != present.end()) {
        step.emplace(p, *it);
        break;
      }
    }
  }

  VariantMap map;
  for (const auto& [variant, first] : step) {
    std::string_view target = first;
    for (auto it = step.find(target); it != step.end(); it = step.find(target)) target = it->second;
    map.set(std::string(variant), std::string(target));
  }
  return map;
}

std::vector<std::string> extract_phrases(std::string_view abstract, const StopWordList& stops,
                                         const ExtractConfig& config) {
  const auto candidates = split_candidates(abstract, stops, config.max_phrase_len);
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& cand : score_phrases(candidates)) {
    if (cand.score < config.min_phrase_score) continue;
    if (std::none_of(cand.tokens.begin(), cand.tokens.end(), [](const std::string& t) { return has_letter(t); })) {
      continue;
    }
    auto norm = normalize_phrase(cand.tokens, stops);
    if (norm && seen.insert(*norm).second) out.push_back(std::move(*norm));
  }
  return out;
}

}  // namespace pkv
