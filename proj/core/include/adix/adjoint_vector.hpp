#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "adix/identifier.hpp"

namespace adix {

/// Adjoint storage indexed by identifier, with `lanes` values per slot for
/// vector mode. Slot 0 belongs to passive values and always reads zero.
class AdjointVector {
 public:
  explicit AdjointVector(std::size_t lanes = 1, std::size_t slots = 1) : lanes_(lanes) {
    if (lanes == 0) {
      throw std::invalid_argument("adjoint vector: lane count must be positive");
    }
    resize(slots);
  }

  std::size_t lanes() const { return lanes_; }
  std::size_t size() const { return data_.size() / lanes_; }

  /// Exactly `slots` slots (at least the passive one); new slots are zero.
  void resize(std::size_t slots) { data_.resize(std::max<std::size_t>(slots, 1) * lanes_, 0.0); }

  void grow_to(std::size_t slots) {
    if (slots > size()) {
      resize(slots);
    }
  }

  void clear() { std::fill(data_.begin(), data_.end(), 0.0); }

  double get(Identifier id, std::size_t lane = 0) const {
    check(id, lane);
    return data_[static_cast<std::size_t>(id) * lanes_ + lane];
  }

  void set(Identifier id, std::size_t lane, double value) {
    check(id, lane);
    if (id != kPassiveIdentifier) {
      data_[static_cast<std::size_t>(id) * lanes_ + lane] = value;
    }
  }

  std::span<double> slot(Identifier id) { return {data_.data() + static_cast<std::size_t>(id) * lanes_, lanes_}; }
  std::span<const double> slot(Identifier id) const {
    return {data_.data() + static_cast<std::size_t>(id) * lanes_, lanes_};
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

 private:
  void check(Identifier id, std::size_t lane) const {
    if (id < 0 || static_cast<std::size_t>(id) >= size()) {
      throw std::out_of_range("adjoint vector: identifier out of range");
    }
    if (lane >= lanes_) {
      throw std::out_of_range("adjoint vector: lane out of range");
    }
  }

  std::size_t lanes_;
  std::vector<double> data_;
};

}  // namespace adix
