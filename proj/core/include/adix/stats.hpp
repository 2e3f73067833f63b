#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adix/identifier.hpp"
#include "adix/jacobian_tape.hpp"

namespace adix {

/// sizeof(double) and sizeof(int): bytes per adjoint lane and per stored
/// identifier or use count.
inline constexpr std::uint64_t kAdjointEntryBytes = 8;
inline constexpr std::uint64_t kIdentifierBytes = 4;
/// Per-statement arg count and per-argument (partial, identifier) sizes.
inline constexpr std::uint64_t kArgCountBytes = sizeof(std::int8_t);
inline constexpr std::uint64_t kArgumentBytes = sizeof(double) + sizeof(Identifier);

struct MemoryModelInputs {
  std::uint64_t s_a = 0;
  std::uint64_t s_c = 0;
  std::uint64_t s_i = 0;
  /// Largest identifier for the reuse schemes.
  std::uint64_t i_max = 0;
  std::uint64_t d = 1;

  std::uint64_t total_statements() const { return s_a + s_c + s_i; }
};

/// Index-management memory split into its adjoint-vector part and its
/// identifier part (stored lhs identifiers plus use counts).
struct MemoryModelBreakdown {
  std::uint64_t adjoint_entries = 0;
  std::uint64_t adjoint_bytes = 0;
  std::uint64_t identifier_bytes = 0;

  std::uint64_t total() const { return adjoint_bytes + identifier_bytes; }
};

MemoryModelBreakdown memory_model_breakdown(ManagerKind kind, const MemoryModelInputs& in);

/// Memory attributable to index management:
///   linear:    m_d (s_a + s_i) d
///   reuse:     m_d i_max d + m_i (s_a + s_c)
///   use count: m_d i_max d + m_i s_a + m_i i_max
inline std::uint64_t memory_model(ManagerKind kind, const MemoryModelInputs& in) {
  return memory_model_breakdown(kind, in).total();
}

struct TapeReport {
  ManagerKind manager = ManagerKind::linear;

  std::uint64_t s_a = 0;
  std::uint64_t s_c = 0;
  std::uint64_t s_i = 0;
  std::uint64_t s_o = 0;
  /// Largest identifier for reuse schemes; peak number of simultaneously
  /// active holders for the linear scheme (what a reuse scheme would need).
  std::uint64_t i_max = 0;
  std::uint64_t peak_live_holders = 0;
  std::uint64_t d = 1;

  // Measured entry counts. Slot 0 of the adjoint and use-count arrays is
  // counted as fixed overhead.
  std::uint64_t statement_entries = 0;
  std::uint64_t lhs_identifier_entries = 0;
  std::uint64_t argument_entries = 0;
  std::uint64_t adjoint_entries = 0;
  std::uint64_t use_count_entries = 0;

  std::uint64_t adjoint_bytes = 0;
  std::uint64_t statement_bytes = 0;
  std::uint64_t argument_bytes = 0;
  std::uint64_t identifier_bytes = 0;
  std::uint64_t fixed_overhead_bytes = 0;

  MemoryModelBreakdown model;

  double record_seconds = 0.0;
  double reverse_seconds = 0.0;

  MemoryModelInputs model_inputs() const;
};

/// Snapshot of a stopped tape. Output-uniquification statements are ordinary
/// assignments with a stored lhs, so the model counts them with s_a.
template <class Tape>
TapeReport measure_tape(const Tape& tape) {
  TapeReport r;
  r.manager = Tape::kKind;
  const RecordingCounters& c = tape.counters();
  r.s_a = c.s_a;
  r.s_c = c.s_c;
  r.s_i = c.s_i;
  r.s_o = c.s_o;
  r.d = tape.adjoints().lanes();
  r.peak_live_holders = static_cast<std::uint64_t>(tape.peak_live_holders());
  if constexpr (Tape::kKind == ManagerKind::linear) {
    r.i_max = r.peak_live_holders;
  } else {
    r.i_max = static_cast<std::uint64_t>(tape.manager().largest_created_index());
  }

  r.statement_entries = tape.statement_count();
  r.lhs_identifier_entries = tape.lhs_identifier_count();
  r.argument_entries = tape.argument_count();
  const std::uint64_t adjoint_slots = tape.adjoints().size();
  r.adjoint_entries = adjoint_slots - 1;
  if constexpr (Tape::kKind == ManagerKind::use_count) {
    r.use_count_entries = tape.manager().use_counts().size() - 1;
  }

  r.adjoint_bytes = kAdjointEntryBytes * r.adjoint_entries * r.d;
  r.statement_bytes = kArgCountBytes * r.statement_entries + kIdentifierBytes * r.lhs_identifier_entries;
  r.argument_bytes = kArgumentBytes * r.argument_entries;
  r.identifier_bytes = kIdentifierBytes * (r.lhs_identifier_entries + r.use_count_entries);
  r.fixed_overhead_bytes = kAdjointEntryBytes * r.d + (Tape::kKind == ManagerKind::use_count ? kIdentifierBytes : 0) +
                           sizeof(RecordingCounters) + sizeof(TapeOptions);
  r.model = memory_model_breakdown(r.manager, r.model_inputs());
  return r;
}

/// One CSV row: the columns written by render_csv.
struct CsvRecord {
  std::string manager;
  std::uint64_t s_a = 0;
  std::uint64_t s_c = 0;
  std::uint64_t s_i = 0;
  std::uint64_t i_max = 0;
  std::uint64_t d = 0;
  std::uint64_t adjoint_bytes = 0;
  std::uint64_t statement_bytes = 0;
  std::uint64_t argument_bytes = 0;
  std::uint64_t model_bytes = 0;
  double record_seconds = 0.0;
  double reverse_seconds = 0.0;

  friend bool operator==(const CsvRecord&, const CsvRecord&) = default;
};

inline constexpr std::string_view kCsvHeader =
    "manager,s_a,s_c,s_i,i_max,d,adjoint_bytes,statement_bytes,argument_bytes,model_bytes,record_seconds,"
    "reverse_seconds";

CsvRecord to_csv_record(const TapeReport& report);

/// Header plus one row per report, '\n' terminated. Doubles use the shortest
/// representation that parses back to the same value.
std::string render_csv(std::span<const TapeReport> reports);
std::string render_csv(std::span<const CsvRecord> records);
std::vector<CsvRecord> parse_csv(std::string_view text);

/// Human-readable table including the model comparison and fixed overhead.
std::string render_table(std::span<const TapeReport> reports);

}  // namespace adix
