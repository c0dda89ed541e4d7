#include "pkv/index.hpp"

#include <algorithm>

namespace pkv {

std::uint64_t dot(const SparseVector& a, const SparseVector& b) {
  const auto ea = a.entries();
  const auto eb = b.entries();
  std::uint64_t sum = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].dim < eb[j].dim) {
      ++i;
    } else if (eb[j].dim < ea[i].dim) {
      ++j;
    } else {
      sum += static_cast<std::uint64_t>(ea[i].count) * eb[j].count;
      ++i;
      ++j;
    }
  }
  return sum;
}

double cosine(const SparseVector& a, const SparseVector& b) {
  if (a.empty() || b.empty() || a.norm() <= 0.0 || b.norm() <= 0.0) {
    throw Error(ErrorCode::ZeroNorm, "cosine of a zero vector");
  }
  // Counts are nonnegative, so the dot product is already its absolute value.
  const double sim = static_cast<double>(dot(a, b)) / (a.norm() * b.norm());
  return std::min(sim, 1.0);
}

SimilarityIndex SimilarityIndex::build(const EmbeddingSet& set) {
  SimilarityIndex index;
  index.level_ = set.level;
  index.dimensions_ = set.registry.texts();
  index.applicant_names_ = set.applicants;
  index.inventor_names_ = set.inventors;

  const std::size_t n = set.phrases.size();
  const std::size_t dims = index.dimensions_.size();
  index.phrases_.reserve(n);
  index.norms_.reserve(n);
  index.doc_freq_.reserve(n);
  index.vec_offsets_.reserve(n + 1);
  index.timeline_offsets_.reserve(n + 1);
  index.applicant_offsets_.reserve(n + 1);
  index.inventor_offsets_.reserve(n + 1);

  std::size_t nnz = 0;
  for (const auto& p : set.phrases) nnz += p.cpc_vector.size();
  index.vec_dims_.reserve(nnz);
  index.vec_counts_.reserve(nnz);

  std::vector<std::uint64_t> per_dim(dims, 0);
  for (std::size_t id = 0; id < n; ++id) {
    const KeyPhrase& p = set.phrases[id];
    if (id > 0 && !(set.phrases[id - 1].phrase < p.phrase)) {
      throw Error(ErrorCode::InvalidArgument, "phrases must be sorted and unique: '" + p.phrase + "'");
    }
    if (p.cpc_vector.empty()) throw Error(ErrorCode::ZeroNorm, "empty vector for '" + p.phrase + "'");
    index.phrases_.push_back(p.phrase);
    for (const auto& e : p.cpc_vector.entries()) {
      if (e.dim >= dims) throw Error(ErrorCode::InvalidArgument, "dimension out of range for '" + p.phrase + "'");
      index.vec_dims_.push_back(e.dim);
      index.vec_counts_.push_back(e.count);
      ++per_dim[e.dim];
    }
    index.vec_offsets_.push_back(index.vec_dims_.size());
    index.norms_.push_back(p.cpc_vector.norm());
    index.doc_freq_.push_back(p.doc_freq);
    index.timelines_.insert(index.timelines_.end(), p.timeline.begin(), p.timeline.end());
    index.timeline_offsets_.push_back(index.timelines_.size());
    index.applicant_counts_.insert(index.applicant_counts_.end(), p.applicant_counts.begin(),
                                   p.applicant_counts.end());
    index.applicant_offsets_.push_back(index.applicant_counts_.size());
    index.inventor_counts_.insert(index.inventor_counts_.end(), p.inventor_counts.begin(),
                                  p.inventor_counts.end());
    index.inventor_offsets_.push_back(index.inventor_counts_.size());
  }

  // Counting sort into posting lists; phrases are visited in id order, so
  // every list comes out sorted by phrase id.
  index.post_offsets_.assign(dims + 1, 0);
  for (std::size_t d = 0; d < dims; ++d) index.post_offsets_[d + 1] = index.post_offsets_[d] + per_dim[d];
  index.post_ids_.resize(nnz);
  index.post_counts_.resize(nnz);
  std::vector<std::uint64_t> cursor(index.post_offsets_.begin(), index.post_offsets_.end() - 1);
  for (std::uint32_t id = 0; id < n; ++id) {
    for (auto k = index.vec_offsets_[id]; k < index.vec_offsets_[id + 1]; ++k) {
      const auto slot = cursor[index.vec_dims_[k]]++;
      index.post_ids_[slot] = id;
      index.post_counts_[slot] = index.vec_counts_[k];
    }
  }

  for (const auto& [variant, target] : set.aliases) {
    if (auto id = index.id_of(target)) index.aliases_.emplace(variant, *id);
  }
  return index;
}

std::span<const std::uint32_t> SimilarityIndex::vector_dims(std::uint32_t id) const {
  return std::span(vec_dims_).subspan(vec_offsets_.at(id), vec_offsets_.at(id + 1) - vec_offsets_[id]);
}

std::span<const std::uint32_t> SimilarityIndex::vector_counts(std::uint32_t id) const {
  return std::span(vec_counts_).subspan(vec_offsets_.at(id), vec_offsets_.at(id + 1) - vec_offsets_[id]);
}

SparseVector SimilarityIndex::vector(std::uint32_t id) const {
  const auto dims = vector_dims(id);
  const auto counts = vector_counts(id);
  std::vector<SparseVector::Entry> entries(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) entries[k] = {dims[k], counts[k]};
  return SparseVector::from_entries(std::move(entries));
}

std::span<const YearCount> SimilarityIndex::timeline(std::uint32_t id) const {
  return std::span(timelines_).subspan(timeline_offsets_.at(id), timeline_offsets_.at(id + 1) - timeline_offsets_[id]);
}

std::span<const EntityCount> SimilarityIndex::applicants(std::uint32_t id) const {
  return std::span(applicant_counts_)
      .subspan(applicant_offsets_.at(id), applicant_offsets_.at(id + 1) - applicant_offsets_[id]);
}

std::span<const EntityCount> SimilarityIndex::inventors(std::uint32_t id) const {
  return std::span(inventor_counts_)
      .subspan(inventor_offsets_.at(id), inventor_offsets_.at(id + 1) - inventor_offsets_[id]);
}

std::span<const std::uint32_t> SimilarityIndex::posting_ids(std::uint32_t dim) const {
  return std::span(post_ids_).subspan(post_offsets_.at(dim), post_offsets_.at(dim + 1) - post_offsets_[dim]);
}

std::span<const std::uint32_t> SimilarityIndex::posting_counts(std::uint32_t dim) const {
  return std::span(post_counts_).subspan(post_offsets_.at(dim), post_offsets_.at(dim + 1) - post_offsets_[dim]);
}

std::optional<std::uint32_t> SimilarityIndex::id_of(std::string_view text) const {
  auto it = std::lower_bound(phrases_.begin(), phrases_.end(), text,
                             [](const std::string& p, std::string_view t) { return p < t; });
  if (it == phrases_.end() || *it != text) return std::nullopt;
  return static_cast<std::uint32_t>(it - phrases_.begin());
}

std::optional<std::uint32_t> SimilarityIndex::find(std::string_view query) const {
  auto resolved = resolve_phrase(
      query, [&](const std::string& t) { return id_of(t).has_value(); },
      [&](const std::string& t) -> const std::string* {
        auto it = aliases_.find(t);
        return it == aliases_.end() ? nullptr : &phrases_[it->second];
      });
  if (!resolved) return std::nullopt;
  return id_of(*resolved);
}

std::vector<std::string> SimilarityIndex::suggestions(std::string_view query) const {
  std::vector<std::string> out;
  const std::string prefix = normalize_query(query);
  if (prefix.empty()) return out;
  auto it = std::lower_bound(phrases_.begin(), phrases_.end(), prefix);
  for (; it != phrases_.end() && out.size() < kMaxSuggestions && it->starts_with(prefix); ++it) {
    out.push_back(*it);
  }
  return out;
}

SearchPage SimilarityIndex::search(std::string_view query, std::size_t offset, std::size_t limit) const {
  auto id = find(query);
  if (!id) throw UnknownPhraseError(normalize_query(query), suggestions(query));
  return search_id(*id, offset, limit);
}

namespace {

struct Scratch {
  std::vector<std::uint64_t> acc;
  std::vector<std::uint32_t> touched;
  std::vector<std::pair<double, std::uint32_t>> scored;
};

}  // namespace

SearchPage SimilarityIndex::search_id(std::uint32_t query_id, std::size_t offset, std::size_t limit) const {
  if (limit < 1 || limit > kMaxLimit) {
    throw Error(ErrorCode::InvalidArgument, "limit must be in [1, " + std::to_string(kMaxLimit) + "]");
  }
  if (query_id >= phrases_.size()) throw Error(ErrorCode::InvalidArgument, "phrase id out of range");

  thread_local Scratch scratch;
  auto& acc = scratch.acc;
  auto& touched = scratch.touched;
  auto& scored = scratch.scored;
  if (acc.size() < phrases_.size()) acc.resize(phrases_.size(), 0);
  touched.clear();
  scored.clear();

  const auto qdims = vector_dims(query_id);
  const auto qcounts = vector_counts(query_id);
  for (std::size_t k = 0; k < qdims.size(); ++k) {
    const std::uint64_t weight = qcounts[k];
    const auto ids = posting_ids(qdims[k]);
    const auto counts = posting_counts(qdims[k]);
    for (std::size_t j = 0; j < ids.size(); ++j) {
      auto& slot = acc[ids[j]];
      if (slot == 0) touched.push_back(ids[j]);
      slot += weight * counts[j];
    }
  }

  const double qnorm = norms_[query_id];
  scored.reserve(touched.size());
  for (auto id : touched) {
    if (id != query_id) {
      const double sim = static_cast<double>(acc[id]) / (qnorm * norms_[id]);
      scored.emplace_back(std::min(sim, 1.0), id);
    }
    acc[id] = 0;
  }

  SearchPage page;
  page.query_id = query_id;
  page.query = phrases_[query_id];
  page.total = scored.size();
  if (offset >= scored.size()) return page;

  // Ids follow text order, so the id tie-break is the text tie-break.
  auto before = [](const std::pair<double, std::uint32_t>& a, const std::pair<double, std::uint32_t>& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  };
  const std::size_t end = std::min(scored.size(), offset + limit);
  if (end * 4 < scored.size()) {
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(end), scored.end(), before);
  } else {
    std::sort(scored.begin(), scored.end(), before);
  }
  page.results.reserve(end - offset);
  for (std::size_t k = offset; k < end; ++k) {
    page.results.push_back({scored[k].second, phrases_[scored[k].second], scored[k].first});
  }
  return page;
}

}  // namespace pkv
