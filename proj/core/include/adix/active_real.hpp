#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "adix/expressions.hpp"
#include "adix/identifier.hpp"
#include "adix/jacobian_tape.hpp"

namespace adix {

template <class Tape>
class ActiveReal;

namespace detail {
template <class Tape>
struct IsLeaf<ActiveReal<Tape>> : std::true_type {};
}  // namespace detail

/// Real number type that records onto the current `Tape` of its thread.
/// Holds the primal value and the identifier of its adjoint slot; identifier 0
/// means the value does not depend on any registered input.
template <class Tape>
class ActiveReal {
 public:
  using expression_tag = void;
  using tape_type = Tape;
  static constexpr std::size_t kLeafCount = 1;

  ActiveReal() = default;
  ActiveReal(double value) : value_(value) {}  // NOLINT: implicit like double

  ActiveReal(const ActiveReal& other) : value_(other.value_) {
    if (other.id_ != kPassiveIdentifier) {
      tape().store_copy(id_, other.id_);
    }
  }

  // Moves hand the identifier over; no statement and no manager call.
  ActiveReal(ActiveReal&& other) noexcept : value_(other.value_), id_(std::exchange(other.id_, kPassiveIdentifier)) {}

  template <Expression E>
    requires(!std::same_as<E, ActiveReal>)
  ActiveReal(const E& expr) {  // NOLINT: expressions convert implicitly
    assign_expression(expr);
  }

  ~ActiveReal() {
    // An active value that outlives its tape has nothing left to return its
    // identifier to.
    if (id_ != kPassiveIdentifier) {
      if (Tape* current = Tape::current()) {
        current->release(id_);
      }
    }
  }

  ActiveReal& operator=(const ActiveReal& other) {
    if (this != &other) {
      value_ = other.value_;
      if (other.id_ != kPassiveIdentifier || id_ != kPassiveIdentifier) {
        tape().store_copy(id_, other.id_);
      }
    }
    return *this;
  }

  ActiveReal& operator=(ActiveReal&& other) noexcept {
    if (this != &other) {
      release();
      value_ = other.value_;
      id_ = std::exchange(other.id_, kPassiveIdentifier);
    }
    return *this;
  }

  template <Expression E>
    requires(!std::same_as<E, ActiveReal>)
  ActiveReal& operator=(const E& expr) {
    assign_expression(expr);
    return *this;
  }

  ActiveReal& operator=(double value) {
    release();
    value_ = value;
    return *this;
  }

  template <class Rhs>
  ActiveReal& operator+=(const Rhs& rhs) { return *this = *this + rhs; }
  template <class Rhs>
  ActiveReal& operator-=(const Rhs& rhs) { return *this = *this - rhs; }
  template <class Rhs>
  ActiveReal& operator*=(const Rhs& rhs) { return *this = *this * rhs; }
  template <class Rhs>
  ActiveReal& operator/=(const Rhs& rhs) { return *this = *this / rhs; }

  double value() const { return value_; }
  Identifier identifier() const { return id_; }
  bool is_active() const { return id_ != kPassiveIdentifier; }

  /// Direct access to the identifier slot for tape registration calls.
  Identifier& identifier_slot() { return id_; }

  /// Same as destruction, except the object stays usable as a passive value.
  void release() {
    if (id_ != kPassiveIdentifier) {
      tape().release(id_);
    }
  }

  template <class Sink>
  void push_leaves(Sink& sink, double multiplier) const {
    if (id_ != kPassiveIdentifier) {
      sink.push(multiplier, id_);
    }
  }

  static Tape& tape() {
    Tape* current = Tape::current();
    if (current == nullptr) {
      throw std::logic_error("active real: no tape is alive on this thread");
    }
    return *current;
  }

  /// Field-wise duplicate without any manager interaction.
  static ActiveReal bitwise_copy(const ActiveReal& source) {
    ActiveReal copy;
    copy.value_ = source.value_;
    copy.id_ = source.id_;
    return copy;
  }

 private:
  template <Expression E>
  void assign_expression(const E& expr) {
    // Gather every leaf before the lhs identifier may change (a = a * a).
    detail::LeafBuffer<E::kLeafCount> leaves;
    expr.push_leaves(leaves, 1.0);
    const double value = expr.value();
    if (leaves.size != 0 || id_ != kPassiveIdentifier) {
      tape().store_statement(id_, std::span<const double>(leaves.partials.data(), leaves.size),
                             std::span<const Identifier>(leaves.ids.data(), leaves.size));
    }
    value_ = value;
  }

  double value_ = 0.0;
  Identifier id_ = kPassiveIdentifier;
};

template <class Tape>
void register_input(ActiveReal<Tape>& x) {
  ActiveReal<Tape>::tape().register_input(x.identifier_slot());
}

template <class Tape>
void register_output(ActiveReal<Tape>& y) {
  ActiveReal<Tape>::tape().register_output(y.identifier_slot());
}

template <class Tape>
double get_gradient(const ActiveReal<Tape>& x, std::size_t lane = 0) {
  return ActiveReal<Tape>::tape().get_adjoint(x.identifier(), lane);
}

template <class Tape>
void set_gradient(const ActiveReal<Tape>& x, double value, std::size_t lane = 0) {
  ActiveReal<Tape>::tape().set_adjoint(x.identifier(), lane, value);
}

/// memcpy-style duplication of an array of values. Only identifier schemes
/// without per-identifier bookkeeping (the linear one) allow it.
template <class Tape>
std::vector<ActiveReal<Tape>> bulk_copy(std::span<const ActiveReal<Tape>> source) {
  if constexpr (!Tape::capabilities().bulk_copy_safe) {
    throw std::logic_error("bulk_copy: the index manager of this tape does not support memcpy-like copies");
  } else {
    std::vector<ActiveReal<Tape>> copy;
    copy.reserve(source.size());
    std::size_t active = 0;
    for (const auto& x : source) {
      copy.push_back(ActiveReal<Tape>::bitwise_copy(x));
      active += x.is_active() ? 1 : 0;
    }
    if (active != 0) {
      ActiveReal<Tape>::tape().note_bulk_holders(active);
    }
    return copy;
  }
}

using LinearReal = ActiveReal<LinearTape>;
using ReuseReal = ActiveReal<ReuseTape>;
using UseCountReal = ActiveReal<UseCountTape>;

}  // namespace adix
