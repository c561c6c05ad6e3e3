#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace jbjump {

/// Subset of the intervals {0, ..., n-1} that enter a trimmed sum.
/// Interval i (0-based) is the increment x[i+1] - x[i].
class RetainedSet {
 public:
  RetainedSet() = default;

  static RetainedSet all(std::size_t n);
  /// Every interval except the listed ones; duplicates are an error.
  static RetainedSet all_except(std::size_t n,
                                std::span<const std::size_t> removed);
  /// Exactly the listed intervals; duplicates are an error.
  static RetainedSet only(std::size_t n, std::span<const std::size_t> kept);

  std::size_t universe() const noexcept { return mask_.size(); }
  std::size_t size() const noexcept { return count_; }
  std::size_t removed_count() const noexcept { return mask_.size() - count_; }
  bool contains(std::size_t i) const noexcept { return mask_[i] != 0; }

  /// Drops interval i; returns false when it was already absent.
  bool remove(std::size_t i);

  std::vector<std::size_t> indices() const;
  std::vector<std::size_t> removed() const;

  friend bool operator==(const RetainedSet&, const RetainedSet&) = default;

 private:
  std::vector<char> mask_;
  std::size_t count_ = 0;
};

}  // namespace jbjump
