#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bayestomo/core_types.hpp"
#include "bayestomo/scaled_value.hpp"

namespace bayestomo {

// Size guards for the exponential-time algorithms. These are practicality
// limits, not mathematical ones.
struct PermanentLimits {
  std::size_t naive_max = 10;
  std::size_t ryser_max = 30;
  std::size_t cyclecover_max = 18;
  // Number of sub-multisets m <= n visited by the coloring decomposition.
  std::size_t lattice_max = 4'000'000;
  // Terms in the multiplicity inclusion-exclusion sum.
  std::size_t multiplicity_terms_max = 200'000'000;
  // Record size for SymmetricBlockSource, which raises class by class.
  std::size_t symmetric_lattice_total_max = 256;
  // Evaluation points of the qubit quadrature route.
  std::size_t cubature_nodes_max = 1'000'000'000;
};

// Weight of a cycle in an alpha-permanent. Production estimators use
// positive integers (the ancilla dimension); tests also use -1 and reals.
class AlphaParam {
 public:
  explicit AlphaParam(double value) : value_(value) {}
  double value() const noexcept { return value_; }
  bool is_positive_integer() const noexcept;
  // Throws InputError unless the value is an integer >= 1.
  unsigned as_positive_integer() const;

 private:
  double value_;
};

// Number of disjoint cycles of a permutation given in one-line notation.
// Throws InputError if `perm` is not a permutation of 0..n-1.
std::size_t cycle_count(std::span<const std::size_t> perm);

// Brute-force sum over all d^N index tuples j of prod_a [j_a == j_perm(a)].
std::uint64_t ancilla_assignment_sum(std::span<const std::size_t> perm, unsigned d);

// Sum over all permutations of prod_i a(i, sigma(i)).
ScaledValue permanent_naive(const ComplexMatrix& a, const PermanentLimits& limits = {});

// Ryser inclusion-exclusion over column subsets in binary-reflected Gray-code
// order, O(N 2^N).
ScaledValue permanent_ryser(const ComplexMatrix& a, const PermanentLimits& limits = {});

enum class MultiplicityKernel {
  // Sign-vector (Glynn) form: column multiplicity c_k contributes a binomial
  // distribution of -1 signs. Far less cancellation than the subset form.
  glynn,
  // Bounded multi-subset (Ryser) form with weights C(c_k, t_k) (-1)^(N - sum t).
  ryser,
};

// Permanent of expand(spec) evaluated on the multiplicity lattice in
// O(M^2 prod_k (c_k + 1)) without expanding. Iterates over whichever side
// (rows or columns) has the smaller lattice.
ScaledValue permanent_multiplicity(const GramSpec& spec,
                                   MultiplicityKernel kernel = MultiplicityKernel::glynn,
                                   const PermanentLimits& limits = {});

// Relative residual between per(A) and its averaged Laplace expansion
// (1/N) sum_{l,k} r_l c_k per(A with one row of class l and one column of
// class k struck) base(l, k).
double laplace_expand_check(const GramSpec& spec);

// Sum over permutations of alpha^cyc(sigma) prod_i a(i, sigma(i)).
ScaledValue alpha_permanent_naive(const ComplexMatrix& a, AlphaParam alpha,
                                  const PermanentLimits& limits = {});

// Cycle-cover subset DP: f(S) = sum over cycles C containing min(S) of
// alpha * w(C) * f(S \ C). O(3^N) time, O(N 2^N) memory.
ScaledValue alpha_permanent_cyclecover(const ComplexMatrix& a, AlphaParam alpha,
                                       const PermanentLimits& limits = {});

// per_d(expand(spec)) for integer d >= 1 via the ancilla-colouring
// decomposition; requires row_mult == col_mult.
ScaledValue alpha_permanent_coloring(const GramSpec& spec, unsigned d,
                                     const PermanentLimits& limits = {});

// per_d of expand(spec) with one row of class `struck_row` and one column of
// class `struck_col` removed. The alpha-permanent is only invariant under
// simultaneous row/column permutations, so the pairing matters: the row of
// class `struck_col` whose column was struck is paired with the column of
// class `struck_row` whose row was struck (see expand_alpha_minor).
ScaledValue alpha_permanent_minor(const GramSpec& spec, std::size_t struck_row,
                                  std::size_t struck_col, unsigned d,
                                  const PermanentLimits& limits = {});

// Explicit matrix whose alpha-permanent alpha_permanent_minor computes:
// expand(spec) with row `a` (first copy of class struck_row) and column `b`
// (first copy of class struck_col) removed, the surviving column `a` taking
// the slot of column `b`.
ComplexMatrix expand_alpha_minor(const GramSpec& spec, std::size_t struck_row,
                                 std::size_t struck_col);

// per_d of the (N+1) x (N+1) matrix [[expand(spec), border_col], [border_row, corner]]
// using only the M^2 distinct minors of the repeated block.
ScaledValue alpha_laplace_border_expand(const GramSpec& spec,
                                        std::span<const Complex> border_row,
                                        std::span<const Complex> border_col, Complex corner,
                                        unsigned d, const PermanentLimits& limits = {});

}  // namespace bayestomo
