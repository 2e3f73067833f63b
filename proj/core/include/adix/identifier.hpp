#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace adix {

/// Names a slot in the adjoint vector. Zero marks a passive value and may be
/// held by any number of variables at once.
using Identifier = std::int32_t;

inline constexpr Identifier kPassiveIdentifier = 0;
inline constexpr Identifier kMaxIdentifier = std::numeric_limits<Identifier>::max();

enum class ManagerKind { linear, reuse, use_count };

inline const char* to_string(ManagerKind kind) {
  switch (kind) {
    case ManagerKind::linear:
      return "linear";
    case ManagerKind::reuse:
      return "reuse";
    case ManagerKind::use_count:
      return "usecount";
  }
  return "unknown";
}

struct ManagerCapabilities {
  /// Copies b = a must be recorded as a statement.
  bool assign_needs_statement;
  /// Statement lhs identifiers follow from statement order and are not stored.
  bool handles_lhs_implicitly;
  /// Values may be duplicated with memcpy-like operations.
  bool bulk_copy_safe;
  /// register_input writes a (tagged) statement.
  bool input_needs_statement;

  friend bool operator==(const ManagerCapabilities&, const ManagerCapabilities&) = default;
};

/// Thrown when the 32-bit identifier space is used up. The tape is then larger
/// than anything this library supports.
class IdentifierExhausted : public std::overflow_error {
 public:
  explicit IdentifierExhausted(const std::string& what) : std::overflow_error(what) {}
};

}  // namespace adix
