#include <cmath>
#include <random>

#include "doctest.h"

#include "bayestomo/simulator.hpp"
#include "bayestomo/tomography.hpp"
#include "oracles.hpp"

using namespace bayestomo;

namespace {

MeasurementModel basis2() {
  return MeasurementModel::single_group(2, {ComplexVector::Unit(2, 0), ComplexVector::Unit(2, 1)});
}

ComplexVector vec2(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  return v;
}

// Three Pauli bases, one group each.
MeasurementModel pauli_groups() {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  return MeasurementModel(2, {{vec2(1, 0), vec2(0, 1)}, {vec2(s, s), vec2(s, -s)}, {vec2(s, s * i), vec2(s, -s * i)}});
}

}  // namespace

TEST_CASE("born_probabilities examples") {
  const TrueState e1 = PureState(ComplexVector::Unit(2, 0));
  auto p = born_probabilities(e1, basis2(), 0);
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == 0.0);

  const TrueState mixed = DensityMatrix::maximally_mixed(2);
  for (std::size_t g = 0; g < 3; ++g) {
    p = born_probabilities(mixed, pauli_groups(), g);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-12));
  }

  const double s = 1.0 / std::sqrt(2.0);
  const TrueState plus = PureState(vec2(s, s));
  p = born_probabilities(plus, basis2(), 0);
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("born_probabilities sum to one and reject bad input") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 20; ++t) {
    const TrueState psi = PureState::normalized(oracle::random_vector(rng, 2));
    for (std::size_t g = 0; g < 3; ++g) {
      const auto p = born_probabilities(psi, pauli_groups(), g);
      CHECK(std::abs(p[0] + p[1] - 1.0) <= 1e-10);
      CHECK(p[0] >= 0.0);
      CHECK(p[1] >= 0.0);
    }
  }
  const auto unvalidated = MeasurementModel::single_group(2, {ComplexVector::Unit(2, 0)});
  const TrueState e1 = PureState(ComplexVector::Unit(2, 0));
  CHECK_THROWS_AS(born_probabilities(e1, unvalidated, 0), InputError);
  CHECK_THROWS_AS(born_probabilities(e1, basis2(), 1), InputError);
  const TrueState e3 = PureState(ComplexVector::Unit(3, 0));
  CHECK_THROWS_AS(born_probabilities(e3, basis2(), 0), InputError);
}

TEST_CASE("sample_record examples") {
  const TrueState e1 = PureState(ComplexVector::Unit(2, 0));
  const std::vector<std::uint64_t> zero{0};
  CHECK(sample_record(e1, basis2(), zero, 1).counts() == std::vector<std::uint64_t>{0, 0});
  const std::vector<std::uint64_t> hundred{100};
  CHECK(sample_record(e1, basis2(), hundred, 1).counts() == std::vector<std::uint64_t>{100, 0});

  const TrueState mixed = DensityMatrix::maximally_mixed(2);
  const std::vector<std::uint64_t> many{10'000};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const OutcomeRecord r = sample_record(mixed, basis2(), many, seed);
    CHECK(r.total() == 10'000);
    // Binomial(10^4, 1/2): sigma = 50.
    CHECK(std::abs(static_cast<double>(r[0]) - 5000.0) <= 4.0 * 50.0);
  }
}

TEST_CASE("sample_record is deterministic and pools groups") {
  const TrueState psi = PureState::normalized(vec2(Complex(0.3, 0.1), Complex(-0.5, 0.8)));
  const std::vector<std::uint64_t> shots{30, 40, 50};
  const OutcomeRecord a = sample_record(psi, pauli_groups(), shots, 77);
  const OutcomeRecord b = sample_record(psi, pauli_groups(), shots, 77);
  CHECK(a == b);
  CHECK(a.size() == 6);
  CHECK(a[0] + a[1] == 30);
  CHECK(a[2] + a[3] == 40);
  CHECK(a[4] + a[5] == 50);
  const std::vector<std::uint64_t> short_plan{30, 40};
  CHECK_THROWS_AS(sample_record(psi, pauli_groups(), short_plan, 1), InputError);
}

TEST_CASE("sampled frequencies follow the Born rule") {
  const TrueState psi = PureState::normalized(vec2(Complex(0.3, 0.1), Complex(-0.5, 0.8)));
  const std::vector<std::uint64_t> shots{100'000, 100'000, 100'000};
  const OutcomeRecord r = sample_record(psi, pauli_groups(), shots, 3);
  for (std::size_t g = 0; g < 3; ++g) {
    const auto p = born_probabilities(psi, pauli_groups(), g);
    const double f = static_cast<double>(r[2 * g]) / 100'000.0;
    CHECK(std::abs(f - p[0]) <= 4.0 * std::sqrt(p[0] * (1 - p[0]) / 100'000.0) + 1e-12);
  }
}

TEST_CASE("closed loop: estimates approach the true state") {
  double prev = 1.0;
  for (std::uint64_t n : {30u, 300u, 3000u}) {
    double mean = 0.0;
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
      std::mt19937_64 state_rng(1000 + static_cast<unsigned>(s));
      const PureState truth = PureState::normalized(oracle::random_vector(state_rng, 2));
      const std::vector<std::uint64_t> shots(3, n / 3);
      const OutcomeRecord rec = sample_record(truth, pauli_groups(), shots, 500 + static_cast<unsigned>(s));
      mean += trace_distance(estimate_pure({pauli_groups(), rec}).matrix(), truth.projector()) / seeds;
    }
    CHECK(mean < prev);
    prev = mean;
  }
}

TEST_CASE("closed loop: mixed estimates approach a rank-2 state") {
  double prev = 1.0;
  for (std::uint64_t n : {30u, 100u, 300u}) {
    double mean = 0.0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
      std::mt19937_64 state_rng(2000 + static_cast<unsigned>(s));
      const ComplexMatrix g = oracle::random_matrix(state_rng, 2, 2);
      const ComplexMatrix rho = g * g.adjoint() / (g * g.adjoint()).trace().real();
      const TrueState truth = DensityMatrix(rho);
      const std::vector<std::uint64_t> shots(3, n / 3);
      const OutcomeRecord rec = sample_record(truth, pauli_groups(), shots, 600 + static_cast<unsigned>(s));
      mean += trace_distance(estimate_mixed({pauli_groups(), rec, 2}).matrix(), rho) / seeds;
    }
    CAPTURE(n);
    CHECK(mean < prev);
    prev = mean;
  }
}
