#include "pkv/sparse_vector.hpp"

#include <algorithm>
#include <cmath>

namespace pkv {

SparseVector SparseVector::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.dim < b.dim; });
  SparseVector v;
  v.entries_.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.count == 0) continue;
    if (!v.entries_.empty() && v.entries_.back().dim == e.dim) {
      v.entries_.back().count += e.count;
    } else {
      v.entries_.push_back(e);
    }
  }
  v.norm_ = std::sqrt(static_cast<double>(v.squared_norm()));
  return v;
}

std::uint64_t SparseVector::squared_norm() const {
  std::uint64_t sum = 0;
  for (const auto& e : entries_) sum += static_cast<std::uint64_t>(e.count) * e.count;
  return sum;
}

std::uint64_t SparseVector::total() const {
  std::uint64_t sum = 0;
  for (const auto& e : entries_) sum += e.count;
  return sum;
}

SparseVector operator+(const SparseVector& a, const SparseVector& b) {
  std::vector<SparseVector::Entry> merged;
  merged.reserve(a.size() + b.size());
  merged.insert(merged.end(), a.entries_.begin(), a.entries_.end());
  merged.insert(merged.end(), b.entries_.begin(), b.entries_.end());
  return SparseVector::from_entries(std::move(merged));
}

}  // namespace pkv
