#include "bayestomo/lattice.hpp"

#include <cstdint>
#include <limits>

#include "bayestomo/errors.hpp"

namespace bayestomo {

std::size_t MultisetLattice::size_for(std::span<const std::size_t> bounds) {
  std::size_t size = 1;
  for (std::size_t b : bounds) {
    if (b + 1 == 0 || size > std::numeric_limits<std::size_t>::max() / (b + 1)) {
      return std::numeric_limits<std::size_t>::max();
    }
    size *= b + 1;
  }
  return size;
}

MultisetLattice::MultisetLattice(std::vector<std::size_t> bounds) : bounds_(std::move(bounds)) {
  size_ = size_for(bounds_);
  if (size_ == std::numeric_limits<std::size_t>::max()) {
    throw GuardLimitExceeded("lattice size", std::numeric_limits<std::size_t>::max(), size_);
  }
  strides_.resize(bounds_.size());
  std::size_t stride = 1;
  for (std::size_t k = 0; k < bounds_.size(); ++k) {
    strides_[k] = stride;
    stride *= bounds_[k] + 1;
  }
  degree_.assign(size_, 0);
  std::vector<std::size_t> m(bounds_.size(), 0);
  std::size_t deg = 0;
  for (std::size_t i = 0; i < size_; ++i) {
    degree_[i] = deg;
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (++m[k] <= bounds_[k]) {
        ++deg;
        break;
      }
      deg -= m[k] - 1;
      m[k] = 0;
    }
  }
}

std::size_t MultisetLattice::index(std::span<const std::size_t> m) const {
  if (m.size() != bounds_.size()) throw InputError("MultisetLattice: class count mismatch");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m[k] > bounds_[k]) throw InputError("MultisetLattice: multiplicity above bound");
    idx += m[k] * strides_[k];
  }
  return idx;
}

std::vector<std::size_t> MultisetLattice::decode(std::size_t index) const {
  std::vector<std::size_t> m(bounds_.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    m[k] = index % (bounds_[k] + 1);
    index /= bounds_[k] + 1;
  }
  return m;
}

}  // namespace bayestomo
