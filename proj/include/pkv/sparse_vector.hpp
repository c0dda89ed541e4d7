#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pkv {

/// Nonnegative integer count vector over CPC dimensions, entries strictly
/// ascending by dimension, every count >= 1, Euclidean norm cached.
class SparseVector {
 public:
  struct Entry {
    std::uint32_t dim = 0;
    std::uint32_t count = 0;
    bool operator==(const Entry&) const = default;
  };

  SparseVector() = default;

  /// Sorts, sums duplicate dimensions and drops zero counts.
  static SparseVector from_entries(std::vector<Entry> entries);

  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double norm() const { return norm_; }
  /// Exact sum of squared counts.
  std::uint64_t squared_norm() const;
  /// Sum of all counts.
  std::uint64_t total() const;

  friend SparseVector operator+(const SparseVector& a, const SparseVector& b);
  bool operator==(const SparseVector&) const = default;

 private:
  std::vector<Entry> entries_;
  double norm_ = 0.0;
};

}  // namespace pkv
