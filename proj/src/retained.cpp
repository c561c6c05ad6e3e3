#include "jbjump/retained.hpp"

#include <string>

#include "jbjump/errors.hpp"

namespace jbjump {

RetainedSet RetainedSet::all(std::size_t n) {
  RetainedSet s;
  s.mask_.assign(n, 1);
  s.count_ = n;
  return s;
}

RetainedSet RetainedSet::all_except(std::size_t n,
                                    std::span<const std::size_t> removed) {
  RetainedSet s = all(n);
  for (std::size_t i : removed) {
    if (i >= n) {
      throw InvalidArgument("interval index " + std::to_string(i + 1) +
                            " outside 1.." + std::to_string(n));
    }
    if (!s.remove(i)) {
      throw InvalidArgument("interval " + std::to_string(i + 1) +
                            " listed twice");
    }
  }
  return s;
}

RetainedSet RetainedSet::only(std::size_t n, std::span<const std::size_t> kept) {
  RetainedSet s;
  s.mask_.assign(n, 0);
  for (std::size_t i : kept) {
    if (i >= n) {
      throw InvalidArgument("interval index " + std::to_string(i + 1) +
                            " outside 1.." + std::to_string(n));
    }
    if (s.mask_[i]) {
      throw InvalidArgument("interval " + std::to_string(i + 1) +
                            " listed twice");
    }
    s.mask_[i] = 1;
    ++s.count_;
  }
  return s;
}

bool RetainedSet::remove(std::size_t i) {
  if (i >= mask_.size() || !mask_[i]) return false;
  mask_[i] = 0;
  --count_;
  return true;
}

std::vector<std::size_t> RetainedSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i]) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> RetainedSet::removed() const {
  std::vector<std::size_t> out;
  out.reserve(mask_.size() - count_);
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (!mask_[i]) out.push_back(i);
  }
  return out;
}

}  // namespace jbjump
