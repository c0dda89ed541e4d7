#include "pkv/api.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <functional>
#include <optional>

#include "json.hpp"

namespace pkv {
namespace {

std::string quote(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

std::vector<std::pair<std::string, std::uint32_t>> top_named(std::span<const EntityCount> counts,
                                                            const std::function<const std::string&(std::uint32_t)>& name) {
  std::vector<std::pair<std::string, std::uint32_t>> out;
  out.reserve(counts.size());
  for (const auto& [id, count] : counts) out.emplace_back(name(id), count);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (out.size() > PhraseMetadata::kTopN) out.resize(PhraseMetadata::kTopN);
  return out;
}

std::string pairs_json(const std::vector<std::pair<std::string, std::uint32_t>>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += "[" + quote(items[i].first) + "," + std::to_string(items[i].second) + "]";
  }
  return out + "]";
}

ApiResponse error_response(int status, std::string_view message) {
  return {status, "{\"error\":" + quote(message) + "}"};
}

// Nonnegative decimal integer without sign or trailing garbage.
std::optional<std::size_t> parse_count(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

std::string format_similarity(double similarity) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", similarity);
  return buf;
}

PhraseMetadata phrase_metadata(const SimilarityIndex& index, std::uint32_t id) {
  PhraseMetadata meta;
  meta.id = id;
  meta.phrase = index.phrase(id);
  const auto tl = index.timeline(id);
  meta.timeline.assign(tl.begin(), tl.end());
  meta.doc_freq = index.doc_freq(id);

  const auto dims = index.vector_dims(id);
  const auto counts = index.vector_counts(id);
  std::vector<EntityCount> cpc(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) cpc[k] = {dims[k], counts[k]};
  meta.top_cpc = top_named(cpc, [&](std::uint32_t d) -> const std::string& { return index.dimension_text(d); });
  meta.top_applicants =
      top_named(index.applicants(id), [&](std::uint32_t a) -> const std::string& { return index.applicant_name(a); });
  meta.top_inventors =
      top_named(index.inventors(id), [&](std::uint32_t i) -> const std::string& { return index.inventor_name(i); });
  return meta;
}

std::string metadata_json(const PhraseMetadata& meta) {
  std::string out = "{\"id\":" + std::to_string(meta.id) + ",\"phrase\":" + quote(meta.phrase) + ",\"timeline\":[";
  for (std::size_t i = 0; i < meta.timeline.size(); ++i) {
    if (i) out += ',';
    out += "[" + std::to_string(meta.timeline[i].first) + "," + std::to_string(meta.timeline[i].second) + "]";
  }
  out += "],\"top_cpc\":" + pairs_json(meta.top_cpc);
  out += ",\"top_applicants\":" + pairs_json(meta.top_applicants);
  out += ",\"top_inventors\":" + pairs_json(meta.top_inventors);
  out += ",\"doc_freq\":" + std::to_string(meta.doc_freq) + "}";
  return out;
}

ApiResponse SearchApi::handle(std::string_view path, const QueryParams& params) const {
  if (path == "/api/search") return search(params);
  if (path == "/api/phrase-by-text") return phrase_by_text(params);
  if (path == "/healthz") return health();
  constexpr std::string_view kPhrasePrefix = "/api/phrase/";
  if (path.starts_with(kPhrasePrefix)) return phrase_by_id(path.substr(kPhrasePrefix.size()));
  return error_response(404, "no such endpoint");
}

ApiResponse SearchApi::unknown_phrase(std::string_view query) const {
  std::string body = "{\"error\":\"unknown phrase\",\"query\":" + quote(normalize_query(query)) + ",\"suggestions\":[";
  const auto suggestions = index_.suggestions(query);
  for (std::size_t i = 0; i < suggestions.size(); ++i) {
    if (i) body += ',';
    body += quote(suggestions[i]);
  }
  return {404, body + "]}"};
}

ApiResponse SearchApi::search(const QueryParams& params) const {
  auto q = params.find("q");
  if (q == params.end() || q->second.empty()) return error_response(400, "missing parameter q");

  std::size_t offset = 0;
  if (auto it = params.find("offset"); it != params.end()) {
    auto parsed = parse_count(it->second);
    if (!parsed) return error_response(400, "offset must be a nonnegative integer");
    offset = *parsed;
  }
  std::size_t limit = kDefaultLimit;
  if (auto it = params.find("limit"); it != params.end()) {
    auto parsed = parse_count(it->second);
    if (!parsed || *parsed < 1 || *parsed > SimilarityIndex::kMaxLimit) {
      return error_response(400, "limit must be an integer in [1, 1000]");
    }
    limit = *parsed;
  }

  const auto id = index_.find(q->second);
  if (!id) return unknown_phrase(q->second);
  const SearchPage page = index_.search_id(*id, offset, limit);

  std::string body = "{\"query\":" + quote(page.query) + ",\"total\":" + std::to_string(page.total) + ",\"results\":[";
  for (std::size_t i = 0; i < page.results.size(); ++i) {
    const auto& r = page.results[i];
    if (i) body += ',';
    body += "{\"id\":" + std::to_string(r.id) + ",\"phrase\":" + quote(r.phrase) +
            ",\"similarity\":" + format_similarity(r.similarity) + "}";
  }
  return {200, body + "]}"};
}

ApiResponse SearchApi::phrase_by_id(std::string_view id_text) const {
  const auto id = parse_count(id_text);
  if (!id) return error_response(400, "phrase id must be a nonnegative integer");
  if (*id >= index_.phrase_count()) return error_response(404, "unknown phrase id");
  return {200, metadata_json(phrase_metadata(index_, static_cast<std::uint32_t>(*id)))};
}

ApiResponse SearchApi::phrase_by_text(const QueryParams& params) const {
  auto q = params.find("q");
  if (q == params.end() || q->second.empty()) return error_response(400, "missing parameter q");
  const auto id = index_.find(q->second);
  if (!id) return unknown_phrase(q->second);
  return {200, metadata_json(phrase_metadata(index_, *id))};
}

ApiResponse SearchApi::health() const {
  return {200, "{\"status\":\"ok\",\"phrases\":" + std::to_string(index_.phrase_count()) + "}"};
}

}  // namespace pkv
