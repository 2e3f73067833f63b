#pragma once

#include <cstdint>
#include <unordered_set>

#include "adix/index_manager.hpp"

namespace adix::testing {

/// Forwards to `Base` and keeps an independent account of holder lifecycles
/// and of the identifiers handed out since the last reset.
///
/// A holder starts when an identifier slot goes from 0 (or another
/// identifier) to a new identifier, and ends when the slot lets go of an
/// identifier. A kept-in-place identifier is an end plus a start and is not
/// counted.
template <IndexManager Base>
class CountingManager {
 public:
  static constexpr ManagerKind kKind = Base::kKind;
  static constexpr ManagerCapabilities capabilities() { return Base::capabilities(); }

  explicit CountingManager(Base base = Base{}) : base_(std::move(base)) {}

  Identifier assign_index(Identifier& id) {
    const Identifier before = id;
    base_.assign_index(id);
    note_transition(before, id);
    distributed_.insert(id);
    return id;
  }

  Identifier assign_unused_index(Identifier& id) {
    const Identifier before = id;
    base_.assign_unused_index(id);
    if (distributed_.contains(id)) {
      fresh_violations_ += 1;
    }
    if (before != kPassiveIdentifier) {
      ends_ += 1;
      nonzero_frees_ += 1;
    }
    starts_ += 1;
    distributed_.insert(id);
    return id;
  }

  void free_index(Identifier& id) {
    if (id != kPassiveIdentifier) {
      ends_ += 1;
      nonzero_frees_ += 1;
    }
    base_.free_index(id);
  }

  void copy_index(Identifier& lhs, Identifier rhs) {
    const Identifier before = lhs;
    base_.copy_index(lhs, rhs);
    note_transition(before, lhs);
  }

  void reset() {
    base_.reset();
    distributed_.clear();
  }

  Identifier largest_created_index() const { return base_.largest_created_index(); }

  auto use_count(Identifier id) const
    requires requires(const Base& b) { b.use_count(id); }
  {
    return base_.use_count(id);
  }

  const Base& base() const { return base_; }

  std::int64_t starts() const { return starts_; }
  std::int64_t ends() const { return ends_; }
  std::int64_t nonzero_frees() const { return nonzero_frees_; }
  std::int64_t fresh_violations() const { return fresh_violations_; }

 private:
  void note_transition(Identifier before, Identifier after) {
    if (before == after) {
      return;
    }
    if (before != kPassiveIdentifier) {
      ends_ += 1;
    }
    if (after != kPassiveIdentifier) {
      starts_ += 1;
    }
  }

  Base base_;
  std::unordered_set<Identifier> distributed_;
  std::int64_t starts_ = 0;
  std::int64_t ends_ = 0;
  std::int64_t nonzero_frees_ = 0;
  std::int64_t fresh_violations_ = 0;
};

/// The linear manager with its lhs identifiers stored on the tape instead of
/// implied by statement order.
class ExplicitLhsLinearManager : public LinearIndexManager {
 public:
  static constexpr ManagerCapabilities capabilities() {
    ManagerCapabilities caps = LinearIndexManager::capabilities();
    caps.handles_lhs_implicitly = false;
    return caps;
  }
};

template <class M>
const auto& underlying(const M& manager) {
  if constexpr (requires { manager.base(); }) {
    return manager.base();
  } else {
    return manager;
  }
}

}  // namespace adix::testing
