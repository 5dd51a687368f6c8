#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bayestomo/errors.hpp"
#include "bayestomo/scaled_value.hpp"

namespace bayestomo {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kStateNormTolerance = 1e-12;
inline constexpr double kPovmTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;

// Throws InputError if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, const char* what);

// Unit vector in a d-dimensional Hilbert space.
class PureState {
 public:
  // Throws InputError unless sum |psi_k|^2 == 1 within kStateNormTolerance.
  explicit PureState(ComplexVector amplitudes);
  // Normalizes a nonzero vector.
  static PureState normalized(const ComplexVector& v);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  ComplexVector amplitudes_;
};

struct PovmReport {
  std::vector<double> group_deviation;  // max entrywise |sum |phi><phi| - I| per group
  double max_deviation = 0.0;
  bool validated = false;
};

// Pooled list of rank-1 POVM outcome vectors |phi_k>, k = 0..M-1, with their
// grouping into s POVMs. Outcome k of group g is at a fixed pooled index; the
// pooled order is group-major.
class MeasurementModel {
 public:
  // Throws InputError if any vector length differs from dim, dim == 0, or a
  // group is empty.
  MeasurementModel(std::size_t dim, std::vector<std::vector<ComplexVector>> groups);
  // One group holding all vectors.
  static MeasurementModel single_group(std::size_t dim, std::vector<ComplexVector> outcomes);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t outcome_count() const noexcept { return outcomes_.size(); }
  std::size_t group_count() const noexcept { return group_offsets_.size() - 1; }
  const std::vector<ComplexVector>& outcomes() const noexcept { return outcomes_; }
  const ComplexVector& outcome(std::size_t k) const { return outcomes_.at(k); }
  // Pooled indices [begin, end) of group g.
  std::size_t group_begin(std::size_t g) const { return group_offsets_.at(g); }
  std::size_t group_end(std::size_t g) const { return group_offsets_.at(g + 1); }

  const PovmReport& povm_report() const noexcept { return report_; }
  // Every group resolves the identity within kPovmTolerance.
  bool validated() const noexcept { return report_.validated; }

  // Same grouping with |phi_k> -> op * |phi_k>.
  MeasurementModel transformed(const ComplexMatrix& op) const;
  // Same grouping with |phi_k> -> scale[k] * |phi_k>.
  MeasurementModel rescaled(std::span<const Complex> scale) const;
  std::vector<std::vector<ComplexVector>> groups() const;

 private:
  std::size_t dim_;
  std::vector<ComplexVector> outcomes_;
  std::vector<std::size_t> group_offsets_;
  PovmReport report_;
};

// Frequencies n_0..n_{M-1} of the pooled outcomes. The multinomial factor is
// never stored; all consumers treat the record as unordered counts.
class OutcomeRecord {
 public:
  OutcomeRecord() = default;
  explicit OutcomeRecord(std::vector<std::uint64_t> counts);

  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept { return total_; }
  std::size_t size() const noexcept { return counts_.size(); }
  std::uint64_t operator[](std::size_t k) const { return counts_.at(k); }

  // Throws InputError unless size() == model.outcome_count().
  void require_matches(const MeasurementModel& model) const;

  friend bool operator==(const OutcomeRecord&, const OutcomeRecord&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// The matrix A[row_mult | col_mult]: row l of `base` repeated row_mult[l]
// times and column k repeated col_mult[k] times, held without expansion.
// Expanded index order is class-major (all copies of class 0 first).
struct GramSpec {
  ComplexMatrix base;
  std::vector<std::size_t> row_mult;
  std::vector<std::size_t> col_mult;

  // Throws InputError on shape mismatch or non-finite entries.
  void validate() const;
  std::size_t expanded_rows() const;
  std::size_t expanded_cols() const;
  bool is_square() const { return expanded_rows() == expanded_cols(); }
  bool is_symmetric_multiplicity() const { return row_mult == col_mult; }
  // Largest |base - base^dagger| entry.
  double hermitian_deviation() const;
};

// Materializes the repeated matrix.
ComplexMatrix expand(const GramSpec& spec);

// d x d Hermitian positive semidefinite unit-trace matrix.
class DensityMatrix {
 public:
  // Throws InvariantViolation if the matrix fails check_density_matrix with
  // the default tolerances.
  explicit DensityMatrix(ComplexMatrix entries);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return entries_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  ComplexMatrix entries_;
};

struct DensityCheck {
  double trace_error = 0.0;        // |Tr rho - 1|
  double hermitian_error = 0.0;    // max |rho - rho^dagger|
  double min_eigenvalue = 0.0;     // of the Hermitian part
  bool ok = false;
};

// The single checker for density-matrix invariants. `eigenvalue_floor` is the
// lower bound asserted on the smallest eigenvalue, less kPsdTolerance.
DensityCheck check_density_matrix(const ComplexMatrix& rho, double eigenvalue_floor = 0.0);

// Eigenvalues of the Hermitian part, ascending.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m);

// (1/2) * sum of singular values of (a - b).
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// Per-group maximum entrywise deviation of sum |phi><phi| from the identity.
PovmReport validate_povm(const MeasurementModel& model);

// base(l, k) = <phi_l|phi_k> (conjugate-linear in the first slot) over all M
// outcomes; row_mult = col_mult = counts.
GramSpec gram_from_outcomes(const MeasurementModel& model, const OutcomeRecord& record);

}  // namespace bayestomo
