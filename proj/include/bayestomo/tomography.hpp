#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "bayestomo/core_types.hpp"
#include "bayestomo/permanent.hpp"
#include "bayestomo/scaled_value.hpp"

namespace bayestomo {

// Which exact kernel evaluates the Gram permanents behind an estimate.
enum class PermanentRoute {
  // Cheaper of multiplicity and symmetric by operation-count estimate.
  automatic,
  // Inclusion-exclusion on the multiplicity lattice (permanent_multiplicity).
  multiplicity,
  // Symmetric-subspace expansion of the outcome vectors (SymmetricTensor).
  // Polynomial in N for fixed d; the only feasible route for large records.
  symmetric,
  // Qubit pure-state estimates only: product quadrature on the Bloch sphere,
  // exact for the degree-N likelihood, all terms nonnegative. O(N^2 M).
  cubature,
};

struct EstimatorOptions {
  PermanentRoute route = PermanentRoute::automatic;
  MultiplicityKernel kernel = MultiplicityKernel::glynn;
  PermanentLimits limits{};
};

struct PureEstimateRequest {
  MeasurementModel model;
  OutcomeRecord record;
};

struct MixedEstimateRequest {
  MeasurementModel model;
  OutcomeRecord record;
  // Ancilla (Schmidt) dimension, >= 1. Values above model.dim() are accepted.
  unsigned ancilla_dim = 1;
};

// rho = (I + v . sigma) / 2.
struct BlochVector {
  std::array<double, 3> v{0.0, 0.0, 0.0};
  // Largest |Im v_j| before the imaginary parts were dropped.
  double max_imaginary = 0.0;

  double norm() const;
  ComplexMatrix to_density() const;
};

// Pauli matrices sigma_x, sigma_y, sigma_z.
const std::array<ComplexMatrix, 3>& pauli_matrices();

// Posterior mean of |psi><psi| under the Haar prior:
//   rho = (I + sum_{k,l} n_k n_l per(A(l,k)) / per(A) |phi_k><phi_l|) / (N + d).
// Throws InputError on a record/model size mismatch, DegenerateLikelihood if
// the record has zero probability, InvariantViolation if the result fails
// the density-matrix checks.
DensityMatrix estimate_pure(const PureEstimateRequest& req, const EstimatorOptions& opts = {});

// Posterior mean of the reduced state under the Haar prior on the purified
// system+ancilla state:
//   rho = (d_A I + sum_{k,l} n_k (n_l + (d_A - 1) delta_kl)
//                  per_dA(A(l,k)) / per_dA(A) |phi_k><phi_l|) / (N + d_S d_A).
DensityMatrix estimate_mixed(const MixedEstimateRequest& req, const EstimatorOptions& opts = {});

// Probability of one ordered outcome sequence with the given counts:
// (d-1)!/(N+d-1)! per(A).
ScaledValue total_probability_pure(const MeasurementModel& model, const OutcomeRecord& record,
                                   const EstimatorOptions& opts = {});

// (d_S d_A - 1)!/(N + d_S d_A - 1)! per_dA(A).
ScaledValue total_probability_mixed(const MeasurementModel& model, const OutcomeRecord& record,
                                    unsigned ancilla_dim, const EstimatorOptions& opts = {});

// Bloch vector of estimate_pure for d = 2; throws InputError otherwise.
BlochVector bloch_estimate_qubit(const PureEstimateRequest& req, const EstimatorOptions& opts = {});

// sum_k (n_k + d_A) / (N + d_S d_A) |phi_k><phi_k| for an orthonormal basis.
// Throws InputError if the basis is not orthonormal within kPovmTolerance or
// does not match the record.
DensityMatrix estimate_vonneumann_closedform(const OutcomeRecord& record,
                                             const std::vector<ComplexVector>& basis,
                                             unsigned ancilla_dim);

struct AncillaScanEntry {
  unsigned ancilla_dim = 1;
  // log P(n_1..n_M) for the ordered sequence, from total_probability_mixed.
  double log_marginal_likelihood = 0.0;
};

// total_probability_mixed for d_A = 1..max_ancilla_dim. A report only; no
// choice of d_A is made here.
std::vector<AncillaScanEntry> scan_ancilla_dimension(const MeasurementModel& model,
                                                     const OutcomeRecord& record,
                                                     unsigned max_ancilla_dim,
                                                     const EstimatorOptions& opts = {});

}  // namespace bayestomo
