#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "bayestomo/core_types.hpp"

namespace bayestomo {

using TrueState = std::variant<PureState, DensityMatrix>;

std::size_t state_dim(const TrueState& state);
ComplexMatrix state_matrix(const TrueState& state);

// p_k = <phi_k|rho|phi_k> for the outcomes of one group. Rounding negatives
// are clamped to zero and the vector renormalized; deviations beyond 1e-8
// (negative or in the sum) throw InvariantViolation. Throws InputError for an
// unvalidated model, a bad group index or a dimension mismatch.
std::vector<double> born_probabilities(const TrueState& state, const MeasurementModel& model,
                                       std::size_t group);

// Multinomial draws per group, pooled into one count vector. Group g uses its
// own stream block_rng(seed, g).
OutcomeRecord sample_record(const TrueState& state, const MeasurementModel& model,
                            std::span<const std::uint64_t> shots_per_group, std::uint64_t seed);

}  // namespace bayestomo
