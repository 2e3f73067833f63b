#pragma once

#include <concepts>

#include "adix/identifier.hpp"
#include "adix/linear_index_manager.hpp"
#include "adix/reuse_index_manager.hpp"
#include "adix/use_count_index_manager.hpp"

namespace adix {

template <class M>
concept IndexManager = requires(M manager, const M& const_manager, Identifier& id, Identifier rhs) {
  { M::kKind } -> std::convertible_to<ManagerKind>;
  { M::capabilities() } -> std::same_as<ManagerCapabilities>;
  manager.assign_index(id);
  manager.assign_unused_index(id);
  manager.free_index(id);
  manager.copy_index(id, rhs);
  manager.reset();
  { const_manager.largest_created_index() } -> std::convertible_to<Identifier>;
};

static_assert(IndexManager<LinearIndexManager>);
static_assert(IndexManager<ReuseIndexManager>);
static_assert(IndexManager<UseCountIndexManager>);

inline constexpr ManagerCapabilities capabilities_of(ManagerKind kind) {
  switch (kind) {
    case ManagerKind::linear:
      return LinearIndexManager::capabilities();
    case ManagerKind::reuse:
      return ReuseIndexManager::capabilities();
    case ManagerKind::use_count:
      return UseCountIndexManager::capabilities();
  }
  return LinearIndexManager::capabilities();
}

}  // namespace adix
