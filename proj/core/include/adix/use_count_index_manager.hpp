#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "adix/identifier.hpp"
#include "adix/reuse_index_manager.hpp"

namespace adix {

/// Per-identifier reference counts, stored densely by identifier.
class IdentifierUseCount {
 public:
  using Count = std::int32_t;

  void set_maximum_size(std::size_t size) {
    if (counts_.size() < size) {
      counts_.resize(size, 0);
    }
  }

  /// Returns true if this was the last use of the identifier.
  bool unuse_index(Identifier id) {
    counts_[static_cast<std::size_t>(id)] -= 1;
    return counts_[static_cast<std::size_t>(id)] == 0;
  }

  void use_index(Identifier id) { counts_[static_cast<std::size_t>(id)] += 1; }

  Count count(Identifier id) const { return counts_[static_cast<std::size_t>(id)]; }
  std::span<const Count> counts() const { return counts_; }

 private:
  std::vector<Count> counts_;
};

/// Reuse scheme with reference counted identifiers. Copies share the rhs
/// identifier instead of recording a statement; an identifier returns to the
/// pool when its last holder lets go of it.
class UseCountIndexManager {
 public:
  static constexpr ManagerKind kKind = ManagerKind::use_count;
  static constexpr std::size_t kDefaultBlockSize = ReuseIndexManager::kDefaultBlockSize;

  static constexpr ManagerCapabilities capabilities() {
    return {.assign_needs_statement = false,
            .handles_lhs_implicitly = false,
            .bulk_copy_safe = false,
            .input_needs_statement = false};
  }

  explicit UseCountIndexManager(std::size_t block_size = kDefaultBlockSize) : pool_(block_size) {
    sync_use_count_size();
  }

  Identifier assign_index(Identifier& id) {
    if (id != kPassiveIdentifier) {
      if (use_count_.unuse_index(id)) {
        // Last holder: the identifier can stay where it is.
        use_count_.use_index(id);
        return id;
      }
      id = kPassiveIdentifier;
    }
    pool_.assign_index(id);
    sync_use_count_size();
    use_count_.use_index(id);
    return id;
  }

  Identifier assign_unused_index(Identifier& id) {
    free_index(id);
    pool_.assign_unused_index(id);
    sync_use_count_size();
    use_count_.use_index(id);
    return id;
  }

  void free_index(Identifier& id) {
    if (id != kPassiveIdentifier) {
      if (use_count_.unuse_index(id)) {
        pool_.free_index(id);
      }
      id = kPassiveIdentifier;
    }
  }

  void copy_index(Identifier& lhs, Identifier rhs) {
    // lhs == rhs also covers lhs and rhs aliasing the same variable; freeing
    // lhs first would turn that variable passive.
    if (lhs != rhs) {
      free_index(lhs);
      if (rhs != kPassiveIdentifier) {
        use_count_.use_index(rhs);
      }
      lhs = rhs;
    }
  }

  void reset() { pool_.reset(); }

  IdentifierUseCount::Count use_count(Identifier id) const { return use_count_.count(id); }
  std::span<const IdentifierUseCount::Count> use_counts() const { return use_count_.counts(); }

  Identifier maximum_index() const { return pool_.maximum_index(); }
  Identifier largest_created_index() const { return pool_.maximum_index(); }
  std::size_t block_size() const { return pool_.block_size(); }
  std::span<const Identifier> free_pool() const { return pool_.free_pool(); }
  std::span<const Identifier> unused_pool() const { return pool_.unused_pool(); }

 private:
  void sync_use_count_size() {
    use_count_.set_maximum_size(static_cast<std::size_t>(pool_.maximum_index()) + 1);
  }

  ReuseIndexManager pool_;
  IdentifierUseCount use_count_;
};

}  // namespace adix
