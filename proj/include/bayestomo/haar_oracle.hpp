#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

#include "bayestomo/core_types.hpp"

namespace bayestomo {

struct McConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  // Reduction blocks; each has its own RNG stream derived from (seed, block)
  // and doubles as a batch for the batch-means error estimate.
  std::size_t batches = 100;
};

struct McEstimate {
  ComplexMatrix mean;
  Eigen::MatrixXd stderr_real;
  Eigen::MatrixXd stderr_imag;

  // Largest |mean - reference| / stderr over real and imaginary parts of all
  // entries. Entries with zero stderr count only if they differ by > 1e-12.
  double sigma_distance(const ComplexMatrix& reference) const;
};

// Independent standard complex Gaussian components, normalized. The law is
// invariant under every unitary.
PureState sample_haar_state(std::size_t dim, std::mt19937_64& rng);

// RNG for reduction block `block` of a run seeded with `seed`.
std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t block);

// Self-normalized importance average of |psi><psi| with weights
// prod_k |<phi_k|psi>|^{2 n_k} over Haar samples. Throws DegenerateLikelihood
// if all weights vanish.
McEstimate mc_posterior_pure(const MeasurementModel& model, const OutcomeRecord& record,
                             const McConfig& cfg);

// Same over Haar samples in dimension d_S d_A (system index major) with
// weights prod_k <Psi|phi_k><phi_k| (x) I_A|Psi>^{n_k}; averages Tr_A.
McEstimate mc_posterior_mixed(const MeasurementModel& model, const OutcomeRecord& record,
                              unsigned ancilla_dim, const McConfig& cfg);

// Haar average of (|psi><psi|)^{(x) order}, a d^order square matrix.
McEstimate mc_haar_moment(std::size_t dim, unsigned order, const McConfig& cfg);

// Projector onto the symmetric subspace of (C^d)^{(x) order}.
ComplexMatrix symmetric_projector(std::size_t dim, unsigned order);

struct IdentityCheck {
  Complex analytic;
  Complex mc_mean;
  double stderr_real = 0.0;
  double stderr_imag = 0.0;
  double sigma_distance = 0.0;
};

// Monte Carlo estimate of the Haar integral of prod_a <x_a|psi><psi|y_a>
// against (d-1)!/(N+d-1)! per(<x_a|y_b>). N <= 4.
IdentityCheck verify_main_identity(std::span<const ComplexVector> xs,
                                   std::span<const ComplexVector> ys, const McConfig& cfg);

}  // namespace bayestomo
