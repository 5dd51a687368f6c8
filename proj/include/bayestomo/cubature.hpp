#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "bayestomo/core_types.hpp"
#include "bayestomo/permanent.hpp"
#include "bayestomo/scaled_value.hpp"

namespace bayestomo {

struct GaussLegendreRule {
  std::vector<double> nodes;    // ascending in (-1, 1)
  std::vector<double> weights;  // sum to 2
};

// n-point Gauss-Legendre rule, exact for polynomials of degree 2n - 1.
GaussLegendreRule gauss_legendre(std::size_t n);

// Posterior integrals for a qubit under the Haar prior on purifications with
// an ancilla of dimension d_A. The likelihood prod_k <phi_k|rho|phi_k>^{n_k}
// is a degree-N polynomial in the Bloch vector r. For d_A = 1 the prior is
// uniform on the Bloch sphere; for d_A >= 2 the reduced state has density
// proportional to (1 - |r|^2)^(d_A - 2) on the Bloch ball. Product
// Gauss-Legendre / trapezoid rules exact for the degree involved are used;
// every term is nonnegative.
struct QubitHaarIntegrals {
  // Prior expectation of the likelihood: the probability of one ordered
  // outcome sequence.
  ScaledValue evidence;
  // Posterior mean Bloch vector.
  std::array<double, 3> mean_bloch{0.0, 0.0, 0.0};
  ComplexMatrix posterior_mean() const;
};

// Throws InputError unless every vector has length 2 and sizes match,
// DegenerateLikelihood if the likelihood vanishes identically,
// GuardLimitExceeded above limits.cubature_nodes_max evaluation points.
QubitHaarIntegrals qubit_haar_integrals(const std::vector<ComplexVector>& vectors,
                                        const std::vector<std::size_t>& counts, unsigned ancilla_dim = 1,
                                        const PermanentLimits& limits = {});

// Evaluation points of the rule for N outcomes: about N^2 / 2 on the sphere,
// about N^3 / 4 on the ball.
double qubit_cubature_cost(std::size_t total, unsigned ancilla_dim = 1);

}  // namespace bayestomo
