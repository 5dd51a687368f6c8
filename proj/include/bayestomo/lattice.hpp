#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bayestomo {

// The sub-multisets m <= n of a multiplicity vector n, indexed in mixed radix
// with class 0 varying fastest. index(m - m') == index(m) - index(m') for
// m' <= m.
class MultisetLattice {
 public:
  explicit MultisetLattice(std::vector<std::size_t> bounds);

  std::size_t classes() const noexcept { return bounds_.size(); }
  std::size_t size() const noexcept { return size_; }
  const std::vector<std::size_t>& bounds() const noexcept { return bounds_; }
  std::size_t stride(std::size_t k) const { return strides_[k]; }

  std::size_t index(std::span<const std::size_t> m) const;
  std::vector<std::size_t> decode(std::size_t index) const;
  std::size_t degree(std::size_t index) const { return degree_[index]; }

  // Lattice size for the given bounds or SIZE_MAX on overflow.
  static std::size_t size_for(std::span<const std::size_t> bounds);

 private:
  std::vector<std::size_t> bounds_;
  std::vector<std::size_t> strides_;
  std::vector<std::size_t> degree_;
  std::size_t size_ = 1;
};

// Calls fn(index_of_sub, degree_of_sub) for every m' <= m (given by index),
// in increasing index order.
template <class Fn>
void for_each_submultiset(const MultisetLattice& lattice, std::size_t index, Fn&& fn) {
  const std::vector<std::size_t> top = lattice.decode(index);
  const std::size_t k_count = top.size();
  std::vector<std::size_t> cur(k_count, 0);
  std::size_t idx = 0;
  std::size_t deg = 0;
  while (true) {
    fn(idx, deg);
    std::size_t k = 0;
    for (; k < k_count; ++k) {
      if (cur[k] < top[k]) {
        ++cur[k];
        idx += lattice.stride(k);
        ++deg;
        break;
      }
      idx -= cur[k] * lattice.stride(k);
      deg -= cur[k];
      cur[k] = 0;
    }
    if (k == k_count) return;
  }
}

}  // namespace bayestomo
