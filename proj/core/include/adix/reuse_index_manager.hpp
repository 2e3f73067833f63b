#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "adix/identifier.hpp"

namespace adix {

/// Couples identifiers to variable lifetimes. Freed identifiers return to a
/// free pool and are handed out again. Identifiers that have not been used
/// since the last reset live in a separate unused pool, so that inputs
/// registered mid-recording can get an identifier whose adjoint is untouched
/// by the statements recorded so far.
class ReuseIndexManager {
 public:
  static constexpr ManagerKind kKind = ManagerKind::reuse;
  static constexpr std::size_t kDefaultBlockSize = 256;

  static constexpr ManagerCapabilities capabilities() {
    return {.assign_needs_statement = true,
            .handles_lhs_implicitly = false,
            .bulk_copy_safe = false,
            .input_needs_statement = false};
  }

  explicit ReuseIndexManager(std::size_t block_size = kDefaultBlockSize)
      : block_size_(block_size), free_pool_(block_size), unused_pool_(block_size) {
    if (block_size == 0) {
      throw std::invalid_argument("reuse index manager: block size must be positive");
    }
    create_new_indices();
  }

  /// Keeps a nonzero id in place: the old value's lifecycle ends here and the
  /// new value may take over its identifier.
  Identifier assign_index(Identifier& id) {
    if (id == kPassiveIdentifier) {
      if (free_count_ == 0) {
        return assign_unused_index(id);
      }
      free_count_ -= 1;
      id = free_pool_[free_count_];
    }
    return id;
  }

  Identifier assign_unused_index(Identifier& id) {
    if (id != kPassiveIdentifier) {
      free_index(id);  // force change of index
    }
    if (unused_count_ == 0) {
      create_new_indices();
    }
    unused_count_ -= 1;
    id = unused_pool_[unused_count_];
    return id;
  }

  void free_index(Identifier& id) {
    if (id != kPassiveIdentifier) {
      if (free_count_ == free_pool_.size()) {
        free_pool_.resize(free_pool_.size() + block_size_);
      }
      free_pool_[free_count_] = id;
      free_count_ += 1;
      id = kPassiveIdentifier;
    }
  }

  // No sharing: lhs needs its own identifier whenever rhs is active.
  void copy_index(Identifier& lhs, Identifier rhs) {
    if (rhs != kPassiveIdentifier) {
      assign_index(lhs);
    } else {
      free_index(lhs);
    }
  }

  /// Moves every identifier of the free pool to the unused pool. Nothing is
  /// forgotten, since live variables may still hold identifiers from before
  /// the reset and will return them later.
  void reset() {
    const std::size_t total = free_count_ + unused_count_;
    if (unused_pool_.size() < total) {
      unused_pool_.resize(total);
    }
    std::copy(free_pool_.begin(), free_pool_.begin() + static_cast<std::ptrdiff_t>(free_count_),
              unused_pool_.begin() + static_cast<std::ptrdiff_t>(unused_count_));
    unused_count_ = total;
    free_count_ = 0;
  }

  Identifier maximum_index() const { return maximum_index_; }
  Identifier largest_created_index() const { return maximum_index_; }
  std::size_t block_size() const { return block_size_; }

  std::span<const Identifier> free_pool() const { return {free_pool_.data(), free_count_}; }
  std::span<const Identifier> unused_pool() const { return {unused_pool_.data(), unused_count_}; }

 private:
  // Only called with an empty unused pool, whose storage is at least one
  // block long.
  void create_new_indices() {
    if (static_cast<std::size_t>(kMaxIdentifier - maximum_index_) < block_size_) {
      throw IdentifierExhausted("reuse index manager: identifier space exhausted");
    }
    for (; unused_count_ < block_size_; unused_count_ += 1) {
      maximum_index_ += 1;
      unused_pool_[unused_count_] = maximum_index_;
    }
  }

  std::size_t block_size_;
  Identifier maximum_index_ = 0;
  std::vector<Identifier> free_pool_;
  std::size_t free_count_ = 0;
  std::vector<Identifier> unused_pool_;
  std::size_t unused_count_ = 0;
};

}  // namespace adix
