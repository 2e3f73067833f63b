#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "adix/adjoint_vector.hpp"
#include "adix/identifier.hpp"
#include "adix/index_manager.hpp"

namespace adix {

struct TapeOptions {
  /// Zero the lhs adjoint when a statement is reversed. Turning this off keeps
  /// intermediate adjoints readable but requires clear_adjoints() before the
  /// tape is evaluated again. Only valid with the linear manager.
  bool zero_adjoint_on_reverse = true;
  /// Vector mode dimension.
  std::size_t vector_dim = 1;
};

struct RecordingCounters {
  std::uint64_t s_a = 0;  // assignment statements, including split temporaries
  std::uint64_t s_c = 0;  // copies of active values
  std::uint64_t s_i = 0;  // registered inputs
  std::uint64_t s_o = 0;  // identity statements that made a shared output unique
  std::uint64_t args_total = 0;

  friend bool operator==(const RecordingCounters&, const RecordingCounters&) = default;
};

/// Statement arg count that tags a register-input statement.
inline constexpr std::int8_t kInputStatementTag = -1;
inline constexpr std::size_t kMaxStatementArguments = 127;

/// Jacobian tape: stores one statement per assignment (argument count and,
/// unless the manager makes it implicit, the lhs identifier) plus one
/// (partial, rhs identifier) record per active argument.
///
/// The tape is the recording target for ActiveReal<JacobianTape<M>> on the
/// thread that constructed it. Constructing a second tape of the same type
/// shadows the first until the second one is destroyed.
template <IndexManager Manager>
class JacobianTape {
 public:
  using manager_type = Manager;
  static constexpr ManagerKind kKind = Manager::kKind;
  static constexpr ManagerCapabilities kCapabilities = Manager::capabilities();

  explicit JacobianTape(TapeOptions options = {}, Manager manager = Manager{})
      : manager_(std::move(manager)), options_(options), adjoints_(options.vector_dim) {
    if (!options.zero_adjoint_on_reverse && kKind != ManagerKind::linear) {
      throw std::invalid_argument("jacobian tape: skipping the adjoint reset requires the linear index manager");
    }
    previous_ = current_;
    current_ = this;
  }

  ~JacobianTape() {
    if (current_ == this) {
      current_ = previous_;
    }
  }

  JacobianTape(const JacobianTape&) = delete;
  JacobianTape& operator=(const JacobianTape&) = delete;

  static JacobianTape* current() { return current_; }

  static constexpr ManagerCapabilities capabilities() { return kCapabilities; }
  const Manager& manager() const { return manager_; }
  const TapeOptions& options() const { return options_; }

  void start_recording() { recording_ = true; }
  /// Sizes the adjoint vector to the identifier range of the recording.
  void stop_recording() {
    recording_ = false;
    adjoints_.resize(required_adjoint_size());
  }
  bool is_recording() const { return recording_; }

  void reserve(std::size_t statements, std::size_t arguments) {
    arg_counts_.reserve(statements);
    if constexpr (!kCapabilities.handles_lhs_implicitly) {
      lhs_ids_.reserve(statements);
    }
    partials_.reserve(arguments);
    rhs_ids_.reserve(arguments);
  }

  /// Records lhs = phi(rhs) with the given partial derivatives. Passive rhs
  /// entries are dropped; a fully passive rhs makes lhs passive. The lhs
  /// identifier is assigned after the arguments are stored, so lhs may
  /// appear among the rhs identifiers.
  void store_statement(Identifier& lhs, std::span<const double> partials, std::span<const Identifier> rhs) {
    if (partials.size() != rhs.size()) {
      throw std::invalid_argument("jacobian tape: partials and identifiers differ in length");
    }
    if (!recording_) {
      release(lhs);
      return;
    }
    std::size_t active = 0;
    for (Identifier id : rhs) {
      active += id != kPassiveIdentifier ? 1 : 0;
    }
    if (active == 0) {
      release(lhs);
      return;
    }
    if (active <= kMaxStatementArguments) {
      const std::size_t begin = partials_.size();
      for (std::size_t j = 0; j < rhs.size(); ++j) {
        if (rhs[j] != kPassiveIdentifier) {
          partials_.push_back(partials[j]);
          rhs_ids_.push_back(rhs[j]);
        }
      }
      finish_statement(lhs, partials_.size() - begin);
      counters_.s_a += 1;
      return;
    }
    store_split_statement(lhs, partials, rhs);
  }

  /// Records lhs = rhs. Managers that share identifiers do this without a
  /// statement.
  void store_copy(Identifier& lhs, Identifier rhs) {
    if (!recording_ || rhs == kPassiveIdentifier) {
      release(lhs);
      return;
    }
    if constexpr (kCapabilities.assign_needs_statement) {
      partials_.push_back(1.0);
      rhs_ids_.push_back(rhs);
      finish_statement(lhs, 1);
    } else {
      const Identifier old = lhs;
      manager_.copy_index(lhs, rhs);
      track_holder(old, lhs);
    }
    counters_.s_c += 1;
  }

  void register_input(Identifier& id) {
    if (!recording_) {
      throw std::logic_error("jacobian tape: register_input requires an active recording");
    }
    const Identifier old = id;
    if constexpr (kCapabilities.input_needs_statement) {
      manager_.assign_index(id);
      arg_counts_.push_back(kInputStatementTag);
      if constexpr (!kCapabilities.handles_lhs_implicitly) {
        lhs_ids_.push_back(id);
      }
    } else {
      manager_.assign_unused_index(id);
    }
    track_holder(old, id);
    counters_.s_i += 1;
  }

  /// Makes sure an active output holds an identifier nobody else holds.
  void register_output(Identifier& id) {
    if (id == kPassiveIdentifier) {
      return;
    }
    if constexpr (kKind == ManagerKind::use_count) {
      if (recording_ && manager_.use_count(id) > 1) {
        partials_.push_back(1.0);
        rhs_ids_.push_back(id);
        finish_statement(id, 1);
        counters_.s_o += 1;
      }
    }
  }

  /// End of a holder's lifecycle (destruction, or becoming passive).
  void release(Identifier& id) {
    if (id != kPassiveIdentifier) {
      manager_.free_index(id);
      id = kPassiveIdentifier;
      live_holders_ -= 1;
    }
  }

  /// Accounts for holders created without manager involvement (bulk copies).
  void note_bulk_holders(std::size_t count) {
    live_holders_ += static_cast<std::int64_t>(count);
    peak_live_holders_ = std::max(peak_live_holders_, live_holders_);
  }

  void reset_tape() {
    arg_counts_.clear();
    lhs_ids_.clear();
    partials_.clear();
    rhs_ids_.clear();
    counters_ = {};
    adjoints_.clear();
    manager_.reset();
    peak_live_holders_ = live_holders_;
  }

  /// Number of adjoint slots (including passive slot 0) any recorded
  /// identifier fits into.
  std::size_t required_adjoint_size() const {
    return static_cast<std::size_t>(manager_.largest_created_index()) + 1;
  }

  void evaluate_reverse() {
    adjoints_.grow_to(required_adjoint_size());
    evaluate_reverse(adjoints_);
  }

  void evaluate_reverse(AdjointVector& adjoints) const {
    if (adjoints.size() < required_adjoint_size()) {
      throw std::out_of_range("jacobian tape: adjoint vector is smaller than the recorded identifier range");
    }
    const bool zero = options_.zero_adjoint_on_reverse;
    const bool scalar = adjoints.lanes() == 1;
    if (zero && scalar) {
      reverse_sweep<true, true>(adjoints);
    } else if (zero) {
      reverse_sweep<true, false>(adjoints);
    } else if (scalar) {
      reverse_sweep<false, true>(adjoints);
    } else {
      reverse_sweep<false, false>(adjoints);
    }
  }

  void set_adjoint(Identifier id, std::size_t lane, double value) {
    adjoints_.grow_to(required_adjoint_size());
    adjoints_.set(id, lane, value);
  }
  double get_adjoint(Identifier id, std::size_t lane = 0) {
    adjoints_.grow_to(required_adjoint_size());
    return adjoints_.get(id, lane);
  }
  void clear_adjoints() { adjoints_.clear(); }
  const AdjointVector& adjoints() const { return adjoints_; }
  AdjointVector& adjoints() { return adjoints_; }

  const RecordingCounters& counters() const { return counters_; }
  std::size_t statement_count() const { return arg_counts_.size(); }
  std::size_t argument_count() const { return partials_.size(); }
  std::size_t lhs_identifier_count() const { return lhs_ids_.size(); }

  std::int64_t live_holders() const { return live_holders_; }
  std::int64_t peak_live_holders() const { return peak_live_holders_; }

  std::span<const std::int8_t> statement_arg_counts() const { return arg_counts_; }
  std::span<const Identifier> statement_lhs_ids() const { return lhs_ids_; }
  std::span<const double> argument_partials() const { return partials_; }
  std::span<const Identifier> argument_rhs_ids() const { return rhs_ids_; }

 private:
  void track_holder(Identifier old_id, Identifier new_id) {
    if (old_id == kPassiveIdentifier && new_id != kPassiveIdentifier) {
      live_holders_ += 1;
      peak_live_holders_ = std::max(peak_live_holders_, live_holders_);
    } else if (old_id != kPassiveIdentifier && new_id == kPassiveIdentifier) {
      live_holders_ -= 1;
    }
  }

  // Arguments are already on the argument stream.
  void finish_statement(Identifier& lhs, std::size_t arg_count) {
    const Identifier old = lhs;
    manager_.assign_index(lhs);
    track_holder(old, lhs);
    arg_counts_.push_back(static_cast<std::int8_t>(arg_count));
    if constexpr (!kCapabilities.handles_lhs_implicitly) {
      lhs_ids_.push_back(lhs);
    }
    counters_.args_total += arg_count;
  }

  // More active arguments than a statement can hold: accumulate chunks into
  // a hidden temporary, carry = carry + sum(chunk), then lhs = carry + rest.
  void store_split_statement(Identifier& lhs, std::span<const double> partials, std::span<const Identifier> rhs) {
    Identifier carry = kPassiveIdentifier;
    std::size_t in_statement = 0;
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      if (rhs[j] == kPassiveIdentifier) {
        continue;
      }
      if (in_statement == kMaxStatementArguments) {
        finish_statement(carry, in_statement);
        counters_.s_a += 1;
        partials_.push_back(1.0);
        rhs_ids_.push_back(carry);
        in_statement = 1;
      }
      partials_.push_back(partials[j]);
      rhs_ids_.push_back(rhs[j]);
      in_statement += 1;
    }
    finish_statement(lhs, in_statement);
    counters_.s_a += 1;
    release(carry);
  }

  template <bool kZero, bool kScalar>
  void reverse_sweep(AdjointVector& adjoints) const {
    const std::size_t lanes = adjoints.lanes();
    double* adj = adjoints.data();
    std::size_t arg_pos = partials_.size();
    Identifier implicit_lhs = static_cast<Identifier>(arg_counts_.size());
    std::array<double, 16> small_buffer{};
    std::vector<double> large_buffer;
    double* lhs_value = small_buffer.data();
    if (lanes > small_buffer.size()) {
      large_buffer.resize(lanes);
      lhs_value = large_buffer.data();
    }

    for (std::size_t s = arg_counts_.size(); s-- > 0;) {
      Identifier lhs;
      if constexpr (kCapabilities.handles_lhs_implicitly) {
        lhs = implicit_lhs;
        implicit_lhs -= 1;
      } else {
        lhs = lhs_ids_[s];
      }
      const std::int8_t count = arg_counts_[s];
      if (count == kInputStatementTag) {
        continue;
      }
      const std::size_t n = static_cast<std::size_t>(count);
      arg_pos -= n;
      if constexpr (kScalar) {
        const double w = adj[lhs];
        if constexpr (kZero) {
          adj[lhs] = 0.0;
        }
        if (w == 0.0) {
          continue;
        }
        for (std::size_t j = arg_pos; j < arg_pos + n; ++j) {
          adj[rhs_ids_[j]] += partials_[j] * w;
        }
      } else {
        double* lhs_slot = adj + static_cast<std::size_t>(lhs) * lanes;
        std::copy(lhs_slot, lhs_slot + lanes, lhs_value);
        if constexpr (kZero) {
          std::fill(lhs_slot, lhs_slot + lanes, 0.0);
        }
        for (std::size_t j = arg_pos; j < arg_pos + n; ++j) {
          double* rhs_slot = adj + static_cast<std::size_t>(rhs_ids_[j]) * lanes;
          const double partial = partials_[j];
          for (std::size_t l = 0; l < lanes; ++l) {
            rhs_slot[l] += partial * lhs_value[l];
          }
        }
      }
    }
  }

  static inline thread_local JacobianTape* current_ = nullptr;
  JacobianTape* previous_ = nullptr;

  Manager manager_;
  TapeOptions options_;
  bool recording_ = false;

  std::vector<std::int8_t> arg_counts_;
  std::vector<Identifier> lhs_ids_;
  std::vector<double> partials_;
  std::vector<Identifier> rhs_ids_;

  RecordingCounters counters_;
  AdjointVector adjoints_;
  std::int64_t live_holders_ = 0;
  std::int64_t peak_live_holders_ = 0;
};

using LinearTape = JacobianTape<LinearIndexManager>;
using ReuseTape = JacobianTape<ReuseIndexManager>;
using UseCountTape = JacobianTape<UseCountIndexManager>;

}  // namespace adix
