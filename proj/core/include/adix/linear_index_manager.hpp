#pragma once

#include "adix/identifier.hpp"

namespace adix {

/// Hands out a new identifier for every assigned value. Identifiers are never
/// recycled within a recording, so the lhs identifier of the k-th statement
/// is k and need not be stored on the tape.
class LinearIndexManager {
 public:
  static constexpr ManagerKind kKind = ManagerKind::linear;

  static constexpr ManagerCapabilities capabilities() {
    return {.assign_needs_statement = false,
            .handles_lhs_implicitly = true,
            .bulk_copy_safe = true,
            .input_needs_statement = true};
  }

  // The old value of id is irrelevant: every value gets a fresh identifier.
  Identifier assign_index(Identifier& id) {
    if (last_index_ == kMaxIdentifier) {
      throw IdentifierExhausted("linear index manager: identifier space exhausted");
    }
    last_index_ += 1;  // 0 is never handed out
    id = last_index_;
    return id;
  }

  Identifier assign_unused_index(Identifier& id) { return assign_index(id); }

  void free_index(Identifier& /*id*/) {}

  void copy_index(Identifier& lhs, Identifier rhs) { lhs = rhs; }

  void reset() { last_index_ = 0; }

  Identifier last_index() const { return last_index_; }
  Identifier largest_created_index() const { return last_index_; }

 private:
  Identifier last_index_ = 0;
};

}  // namespace adix
