#include "bayestomo/simulator.hpp"

#include <cmath>
#include <random>
#include <string>

#include "bayestomo/haar_oracle.hpp"

namespace bayestomo {

std::size_t state_dim(const TrueState& state) {
  return std::visit([](const auto& s) { return s.dim(); }, state);
}

ComplexMatrix state_matrix(const TrueState& state) {
  if (const auto* p = std::get_if<PureState>(&state)) return p->projector();
  return std::get<DensityMatrix>(state).matrix();
}

std::vector<double> born_probabilities(const TrueState& state, const MeasurementModel& model,
                                       std::size_t group) {
  if (!model.validated()) throw InputError("born_probabilities: model groups do not resolve the identity");
  if (group >= model.group_count()) throw InputError("born_probabilities: group index out of range");
  if (state_dim(state) != model.dim()) throw InputError("born_probabilities: state dimension mismatch");

  const ComplexMatrix rho = state_matrix(state);
  std::vector<double> p;
  double sum = 0.0;
  for (std::size_t k = model.group_begin(group); k < model.group_end(group); ++k) {
    const ComplexVector& phi = model.outcome(k);
    double v = phi.dot(rho * phi).real();
    if (v < 0.0) {
      if (v < -1e-8) throw InvariantViolation("born_probabilities: negative probability " + std::to_string(v));
      v = 0.0;
    }
    p.push_back(v);
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-8) {
    throw InvariantViolation("born_probabilities: probabilities sum to " + std::to_string(sum));
  }
  for (double& v : p) v /= sum;
  return p;
}

OutcomeRecord sample_record(const TrueState& state, const MeasurementModel& model,
                            std::span<const std::uint64_t> shots_per_group, std::uint64_t seed) {
  if (shots_per_group.size() != model.group_count()) {
    throw InputError("sample_record: need one shot count per group");
  }
  std::vector<std::uint64_t> counts(model.outcome_count(), 0);
  for (std::size_t g = 0; g < model.group_count(); ++g) {
    const std::vector<double> p = born_probabilities(state, model, g);
    std::mt19937_64 rng = block_rng(seed, g);
    std::uint64_t left = shots_per_group[g];
    double mass = 1.0;
    const std::size_t begin = model.group_begin(g);
    for (std::size_t i = 0; i < p.size() && left > 0; ++i) {
      if (i + 1 == p.size()) {
        counts[begin + i] += left;
        break;
      }
      const double q = mass > 0.0 ? std::min(1.0, p[i] / mass) : 0.0;
      std::binomial_distribution<std::uint64_t> draw(left, q);
      const std::uint64_t c = draw(rng);
      counts[begin + i] += c;
      left -= c;
      mass -= p[i];
    }
  }
  return OutcomeRecord(std::move(counts));
}

}  // namespace bayestomo
