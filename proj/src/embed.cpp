#include "pkv/embed.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "pkv/error.hpp"

namespace pkv {
namespace {

template <class Map>
std::vector<EntityCount> remap_sorted(const Map& counts, const std::vector<std::uint32_t>& remap) {
  std::vector<EntityCount> out;
  out.reserve(counts.size());
  for (const auto& [id, count] : counts) out.emplace_back(remap[id], count);
  std::sort(out.begin(), out.end());
  return out;
}

// Canonical renumbering: used ids of `registry`, ordered by text.
std::vector<std::uint32_t> canonical_ids(const DimensionRegistry& registry, const std::vector<bool>& used,
                                         std::vector<std::string>& texts_out) {
  std::vector<std::uint32_t> order;
  for (std::uint32_t id = 0; id < used.size(); ++id) {
    if (used[id]) order.push_back(id);
  }
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return registry.text(a) < registry.text(b); });
  std::vector<std::uint32_t> remap(registry.size(), 0);
  texts_out.clear();
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    remap[order[i]] = i;
    texts_out.push_back(registry.text(order[i]));
  }
  return remap;
}

}  // namespace

std::optional<std::string> resolve_phrase(std::string_view query,
                                          const std::function<bool(const std::string&)>& contains,
                                          const std::function<const std::string*(const std::string&)>& alias) {
  std::string q = normalize_query(query);
  if (q.empty()) return std::nullopt;
  std::deque<std::string> frontier{std::move(q)};
  std::unordered_set<std::string> visited;
  while (!frontier.empty()) {
    std::string cur = std::move(frontier.front());
    frontier.pop_front();
    if (!visited.insert(cur).second) continue;
    if (contains(cur)) return cur;
    if (const std::string* target = alias(cur); target && contains(*target)) return *target;
    for (auto& base : variant_bases(cur)) frontier.push_back(std::move(base));
  }
  return std::nullopt;
}

std::optional<std::size_t> EmbeddingSet::find(std::string_view query) const {
  auto position = [&](const std::string& text) {
    return std::lower_bound(phrases.begin(), phrases.end(), text,
                            [](const KeyPhrase& p, const std::string& t) { return p.phrase < t; });
  };
  auto resolved = resolve_phrase(
      query,
      [&](const std::string& t) {
        auto it = position(t);
        return it != phrases.end() && it->phrase == t;
      },
      [&](const std::string& t) -> const std::string* {
        auto it = aliases.find(t);
        return it == aliases.end() ? nullptr : &it->second;
      });
  if (!resolved) return std::nullopt;
  return static_cast<std::size_t>(position(*resolved) - phrases.begin());
}

const SparseVector& phrase_vector(const EmbeddingSet& set, std::string_view phrase) {
  auto pos = set.find(phrase);
  if (!pos) throw Error(ErrorCode::NotFound, std::string(phrase));
  return set.phrases[*pos].cpc_vector;
}

EmbeddingBuilder::RecordKeys EmbeddingBuilder::keys_for(const PatentRecord& record) {
  RecordKeys keys;
  keys.dims.reserve(record.cpc_codes.size());
  for (const auto& raw : record.cpc_codes) keys.dims.push_back(dims_.intern(truncate(parse_cpc(raw), level_)));
  for (const auto& a : record.applicants) keys.applicants.push_back(applicants_.intern(a));
  for (const auto& i : record.inventors) keys.inventors.push_back(inventors_.intern(i));
  return keys;
}

void EmbeddingBuilder::add(Accum& acc, const RecordKeys& keys, const PatentRecord& record) {
  if (acc.doc_freq > 0 && acc.last_patent == record.patent_id) return;
  acc.last_patent = record.patent_id;
  for (auto d : keys.dims) ++acc.cpc[d];
  ++acc.timeline[record.application_date.year];
  for (auto a : keys.applicants) ++acc.applicants[a];
  for (auto i : keys.inventors) ++acc.inventors[i];
  ++acc.doc_freq;
}

void EmbeddingBuilder::accumulate(std::string_view phrase, const PatentRecord& record) {
  const RecordKeys keys = keys_for(record);
  add(phrases_[std::string(phrase)], keys, record);
}

void EmbeddingBuilder::add_record(const PatentRecord& record, std::span<const std::string> phrases) {
  const RecordKeys keys = keys_for(record);
  for (const auto& p : phrases) add(phrases_[p], keys, record);
}

void EmbeddingBuilder::merge(EmbeddingBuilder&& other) {
  auto translate = [](DimensionRegistry& into, const DimensionRegistry& from) {
    std::vector<std::uint32_t> map(from.size());
    for (std::uint32_t id = 0; id < from.size(); ++id) map[id] = into.intern(from.text(id));
    return map;
  };
  const auto dim_map = translate(dims_, other.dims_);
  const auto app_map = translate(applicants_, other.applicants_);
  const auto inv_map = translate(inventors_, other.inventors_);

  for (auto& [phrase, theirs] : other.phrases_) {
    Accum& mine = phrases_[phrase];
    for (const auto& [d, c] : theirs.cpc) mine.cpc[dim_map[d]] += c;
    for (const auto& [y, c] : theirs.timeline) mine.timeline[y] += c;
    for (const auto& [a, c] : theirs.applicants) mine.applicants[app_map[a]] += c;
    for (const auto& [i, c] : theirs.inventors) mine.inventors[inv_map[i]] += c;
    mine.doc_freq += theirs.doc_freq;
    mine.last_patent.clear();
  }
  other.phrases_.clear();
}

std::vector<std::string> EmbeddingBuilder::vocabulary() const {
  std::vector<std::string> out;
  out.reserve(phrases_.size());
  for (const auto& [p, _] : phrases_) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

EmbeddingSet finalize(const EmbeddingBuilder& builder, const VariantMap& variants, std::uint32_t min_doc_freq) {
  using Accum = EmbeddingBuilder::Accum;

  std::map<std::string, Accum> folded;
  for (const auto& [phrase, acc] : builder.phrases_) {
    Accum& into = folded[variants.canonical(phrase)];
    for (const auto& [d, c] : acc.cpc) into.cpc[d] += c;
    for (const auto& [y, c] : acc.timeline) into.timeline[y] += c;
    for (const auto& [a, c] : acc.applicants) into.applicants[a] += c;
    for (const auto& [i, c] : acc.inventors) into.inventors[i] += c;
    into.doc_freq += acc.doc_freq;
  }
  std::erase_if(folded, [&](const auto& kv) { return kv.second.doc_freq < min_doc_freq; });
  if (folded.empty()) throw Error(ErrorCode::EmptyVocabulary, "no phrase passed the filters");

  std::vector<bool> dim_used(builder.dims_.size());
  std::vector<bool> app_used(builder.applicants_.size());
  std::vector<bool> inv_used(builder.inventors_.size());
  for (const auto& [_, acc] : folded) {
    for (const auto& [d, c] : acc.cpc) dim_used[d] = true;
    for (const auto& [a, c] : acc.applicants) app_used[a] = true;
    for (const auto& [i, c] : acc.inventors) inv_used[i] = true;
  }

  EmbeddingSet set;
  set.level = builder.level_;
  std::vector<std::string> dim_texts;
  const auto dim_remap = canonical_ids(builder.dims_, dim_used, dim_texts);
  for (const auto& t : dim_texts) set.registry.intern(t);
  const auto app_remap = canonical_ids(builder.applicants_, app_used, set.applicants);
  const auto inv_remap = canonical_ids(builder.inventors_, inv_used, set.inventors);

  set.phrases.reserve(folded.size());
  for (const auto& [phrase, acc] : folded) {
    KeyPhrase kp;
    kp.phrase = phrase;
    std::vector<SparseVector::Entry> entries;
    entries.reserve(acc.cpc.size());
    for (const auto& [d, c] : acc.cpc) entries.push_back({dim_remap[d], c});
    kp.cpc_vector = SparseVector::from_entries(std::move(entries));
    kp.timeline.assign(acc.timeline.begin(), acc.timeline.end());
    kp.applicant_counts = remap_sorted(acc.applicants, app_remap);
    kp.inventor_counts = remap_sorted(acc.inventors, inv_remap);
    kp.doc_freq = acc.doc_freq;
    set.phrases.push_back(std::move(kp));
  }

  for (const auto& [variant, target] : variants.entries()) {
    if (folded.count(target) && builder.phrases_.count(variant)) set.aliases.emplace(variant, target);
  }
  return set;
}

EmbeddingSet finalize(const EmbeddingBuilder& builder, std::uint32_t min_doc_freq) {
  const auto vocab = builder.vocabulary();
  return finalize(builder, merge_variants(vocab), min_doc_freq);
}

}  // namespace pkv
