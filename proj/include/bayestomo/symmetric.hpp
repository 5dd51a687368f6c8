#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "bayestomo/coloring.hpp"
#include "bayestomo/core_types.hpp"
#include "bayestomo/scaled_value.hpp"

namespace bayestomo {

// A vector in the degree-t symmetric subspace of (C^d)^{(x)t}, expanded in the
// orthonormal monomial basis |m> (m a composition of t into d parts) and held
// as exp(log_scale) * sum_m amp[rank(m)] |m>.
//
// Starting from the vacuum, raise(phi) applies the linear form
// <phi|psi> = sum_i conj(phi_i) psi_i. After raising by x_1..x_N:
//   norm_squared()   = per(<x_a|x_b>)                     (the Gram permanent),
//   one_body()(i,j)  = per of that Gram matrix bordered by row <e_i| and
//                      column |e_j>.
// All terms are nonnegative in norm_squared, so no cancellation occurs.
// Cost of raise at degree t is O(d^2 C(t+d-1, d-1)).
class SymmetricTensor {
 public:
  explicit SymmetricTensor(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t degree() const noexcept { return degree_; }
  double log_scale() const noexcept { return log_scale_; }
  const std::vector<Complex>& amplitudes() const noexcept { return amp_; }

  void raise(const ComplexVector& phi);
  ScaledValue norm_squared() const;
  // Matrix part; the full value is matrix * exp(2 * log_scale()).
  ComplexMatrix one_body() const;

  // Number of compositions of `degree` into `dim` parts, SIZE_MAX on overflow.
  static std::size_t basis_size(std::size_t dim, std::size_t degree);

 private:
  std::size_t dim_;
  std::size_t degree_ = 0;
  std::vector<Complex> amp_;
  double log_scale_ = 0.0;
};

// mult[k] copies of each class k, ordered so every prefix has counts close to
// proportional to mult. Grouped order is badly conditioned for large totals.
std::vector<std::size_t> interleaved_order(std::span<const std::size_t> mult);

// Raises t by every vector with its multiplicity, in interleaved order.
void raise_interleaved(SymmetricTensor& t, std::span<const ComplexVector> vectors,
                       std::span<const std::size_t> mult);

// per(Gram[n|n]) of the given vectors with multiplicities.
ScaledValue gram_permanent_symmetric(std::span<const ComplexVector> vectors,
                                     std::span<const std::size_t> mult);

// Block permanents from outcome vectors through the symmetric-subspace
// expansion; the whole multiplicity lattice is precomputed once.
class SymmetricBlockSource final : public BlockPermanentSource {
 public:
  SymmetricBlockSource(std::vector<ComplexVector> vectors, std::vector<std::size_t> bounds,
                       const PermanentLimits& limits = {});
  std::size_t classes() const override { return vectors_.size(); }
  ScaledValue diagonal(std::span<const std::size_t> m) const override;
  ScaledValue bordered(std::span<const std::size_t> m, std::size_t k,
                       std::size_t l) const override;

  // Rough number of floating point operations the precomputation needs.
  static double cost_estimate(std::size_t dim, std::span<const std::size_t> bounds);

 private:
  std::vector<ComplexVector> vectors_;
  MultisetLattice lattice_;
  std::vector<ScaledValue> permanent_;
  std::vector<ComplexMatrix> one_body_;
  std::vector<double> one_body_log_scale_;
};

}  // namespace bayestomo
