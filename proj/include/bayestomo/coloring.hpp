#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "bayestomo/core_types.hpp"
#include "bayestomo/lattice.hpp"
#include "bayestomo/permanent.hpp"
#include "bayestomo/scaled_value.hpp"

namespace bayestomo {

// Supplies ordinary permanents of single-colour blocks of a repeated Gram
// matrix: diagonal(m) = per(base[m|m]) and bordered(m, k, l) =
// per(base[m + e_k | m + e_l]).
class BlockPermanentSource {
 public:
  virtual ~BlockPermanentSource() = default;
  virtual std::size_t classes() const = 0;
  virtual ScaledValue diagonal(std::span<const std::size_t> m) const = 0;
  virtual ScaledValue bordered(std::span<const std::size_t> m, std::size_t k,
                               std::size_t l) const = 0;
};

// Blocks evaluated with permanent_multiplicity on a Gram base matrix.
class MultiplicityBlockSource final : public BlockPermanentSource {
 public:
  explicit MultiplicityBlockSource(ComplexMatrix base,
                                   MultiplicityKernel kernel = MultiplicityKernel::glynn,
                                   PermanentLimits limits = {});
  std::size_t classes() const override { return static_cast<std::size_t>(base_.rows()); }
  ScaledValue diagonal(std::span<const std::size_t> m) const override;
  ScaledValue bordered(std::span<const std::size_t> m, std::size_t k,
                       std::size_t l) const override;

 private:
  ComplexMatrix base_;
  MultiplicityKernel kernel_;
  PermanentLimits limits_;
};

// Values stored per degree: entry i is value[i] * exp(log_scale[degree(i)]).
// Used for lattice tables whose magnitude grows with the total multiplicity.
struct DegreeScaledTable {
  std::vector<Complex> value;
  std::vector<double> log_scale;

  ScaledValue at(const MultisetLattice& lattice, std::size_t index) const {
    return ScaledValue(value[index]) * ScaledValue::from_log(log_scale[lattice.degree(index)]);
  }
};

// per_d(A[n|n]) and its single-row/column minors by the colouring
// decomposition. Each of the d ancilla colours induces a block-diagonal
// matrix; rows of the same outcome class are exchangeable, so the sum over
// colourings collapses to a d-fold convolution over the multiset lattice of
// P(m) = per(base[m|m]) / m!:
//   per_d(A[n|n]) = n! Q_d(n),  Q_c = P * Q_{c-1},  Q_0 = delta_0.
class AlphaPermanentTable {
 public:
  AlphaPermanentTable(std::vector<std::size_t> mult, unsigned d,
                      std::shared_ptr<const BlockPermanentSource> source,
                      const PermanentLimits& limits = {});

  unsigned colors() const noexcept { return d_; }
  const std::vector<std::size_t>& multiplicities() const noexcept { return mult_; }

  // per_d(A[n|n]).
  ScaledValue full() const;
  // per_d of A[n|n] with one row of class l and one column of class k struck,
  // paired as described for alpha_permanent_minor.
  ScaledValue minor(std::size_t struck_row, std::size_t struck_col) const;

  // Ratios used by the mixed-state estimator, free of factorials:
  // n_k (n_k - 1 + d) per_d(A(k,k)) / per_d(A)       for k == l,
  // n_k n_l per_d(A(l,k)) / per_d(A)                   for k != l.
  Complex estimator_coefficient(std::size_t k, std::size_t l) const;

 private:
  // Sum over m <= top of R_kl(m) Q_{d-1}(top - m), R_kl(m) = bordered(m,k,l)/m!.
  ScaledValue bordered_convolution(std::size_t k, std::size_t l) const;

  std::vector<std::size_t> mult_;
  unsigned d_;
  std::shared_ptr<const BlockPermanentSource> source_;
  MultisetLattice lattice_;
  std::vector<double> log_factorial_;      // log m! per lattice index
  DegreeScaledTable single_;               // P
  std::vector<DegreeScaledTable> powers_;  // powers_[c] = Q_c for c = 0..d
};

}  // namespace bayestomo
