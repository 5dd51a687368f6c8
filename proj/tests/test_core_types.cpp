#include <cmath>
#include <random>

#include "doctest.h"

#include "bayestomo/core_types.hpp"
#include "oracles.hpp"

using namespace bayestomo;

namespace {

ComplexVector vec2(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  return v;
}

std::vector<ComplexVector> pauli_eigenvectors_scaled() {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  std::vector<ComplexVector> vs{vec2(1, 0), vec2(0, 1), vec2(s, s), vec2(s, -s), vec2(s, s * i), vec2(s, -s * i)};
  for (auto& v : vs) v /= std::sqrt(3.0);
  return vs;
}

}  // namespace

TEST_CASE("validate_povm: standard basis resolves the identity") {
  const auto model = MeasurementModel::single_group(2, {vec2(1, 0), vec2(0, 1)});
  const PovmReport r = validate_povm(model);
  CHECK(r.max_deviation == 0.0);
  CHECK(r.validated);
  CHECK(model.validated());
}

TEST_CASE("validate_povm: six scaled Pauli eigenvectors") {
  const auto model = MeasurementModel::single_group(2, pauli_eigenvectors_scaled());
  CHECK(validate_povm(model).max_deviation < 1e-15);
  CHECK(model.validated());
}

TEST_CASE("validate_povm: repeated vector misses e2 by one") {
  const auto model = MeasurementModel::single_group(2, {vec2(1, 0), vec2(1, 0)});
  const PovmReport r = validate_povm(model);
  CHECK(r.max_deviation == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(r.validated);
  ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
  for (const auto& v : model.outcomes()) sum += v * v.adjoint();
  const ComplexMatrix dev = (sum - ComplexMatrix::Identity(2, 2)).cwiseAbs().cast<Complex>();
  CHECK(std::abs(dev(1, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(dev(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("validate_povm: per-group report and unitary invariance") {
  std::mt19937_64 rng(11);
  const auto basis = std::vector<ComplexVector>{vec2(1, 0), vec2(0, 1)};
  const MeasurementModel model(2, {basis, pauli_eigenvectors_scaled(), {vec2(1, 0), vec2(1, 0)}});
  const PovmReport r = validate_povm(model);
  REQUIRE(r.group_deviation.size() == 3);
  CHECK(r.group_deviation[0] == 0.0);
  CHECK(r.group_deviation[1] < 1e-15);
  CHECK(r.group_deviation[2] == doctest::Approx(1.0));
  CHECK_FALSE(r.validated);

  const MeasurementModel good(2, {basis, pauli_eigenvectors_scaled()});
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix u = oracle::random_unitary(rng, 2);
    const PovmReport ru = validate_povm(good.transformed(u));
    CHECK(ru.validated);
    CHECK(ru.max_deviation < 1e-14);
  }
}

TEST_CASE("validate_povm: dimension mismatch is rejected") {
  ComplexVector v3 = ComplexVector::Zero(3);
  CHECK_THROWS_AS(MeasurementModel::single_group(2, {vec2(1, 0), v3}), InputError);
  CHECK_THROWS_AS(MeasurementModel(2, {{}}), InputError);
}

TEST_CASE("gram_from_outcomes: orthonormal basis") {
  const auto model = MeasurementModel::single_group(2, {vec2(1, 0), vec2(0, 1)});
  const GramSpec g = gram_from_outcomes(model, OutcomeRecord({2, 1}));
  CHECK(g.base.isApprox(ComplexMatrix::Identity(2, 2)));
  CHECK(g.row_mult == std::vector<std::size_t>{2, 1});
  CHECK(g.col_mult == std::vector<std::size_t>{2, 1});
  CHECK(g.expanded_rows() == 3);
}

TEST_CASE("gram_from_outcomes: single outcome") {
  const auto model = MeasurementModel::single_group(2, {vec2(0.6, Complex(0, 0.8))});
  const GramSpec g = gram_from_outcomes(model, OutcomeRecord({7}));
  REQUIRE(g.base.rows() == 1);
  CHECK(std::abs(g.base(0, 0) - 1.0) < 1e-15);
  CHECK(g.row_mult == std::vector<std::size_t>{7});
}

TEST_CASE("gram_from_outcomes: overlap orientation is conjugate-linear in the first slot") {
  const ComplexVector a = vec2(1, 0);
  const ComplexVector b2 = vec2(Complex(0.0, 0.6), Complex(0.8, 0.0));
  const auto model = MeasurementModel::single_group(2, {a, b2});
  const GramSpec g = gram_from_outcomes(model, OutcomeRecord({1, 1}));
  // <a|b2> = conj(a) . b2 = 0.6 i
  const Complex c(0.0, 0.6);
  CHECK(std::abs(g.base(0, 1) - c) < 1e-15);
  CHECK(std::abs(g.base(1, 0) - std::conj(c)) < 1e-15);
  CHECK(g.hermitian_deviation() < 1e-15);
}

TEST_CASE("gram base is Hermitian with a nonnegative diagonal") {
  std::mt19937_64 rng(3);
  std::vector<ComplexVector> vs;
  for (int k = 0; k < 5; ++k) vs.push_back(oracle::random_vector(rng, 3));
  const auto model = MeasurementModel::single_group(3, vs);
  const GramSpec g = gram_from_outcomes(model, OutcomeRecord({1, 0, 2, 3, 1}));
  CHECK(g.hermitian_deviation() < 1e-12);
  for (Eigen::Index i = 0; i < 5; ++i) {
    CHECK(g.base(i, i).real() >= 0.0);
    CHECK(std::abs(g.base(i, i).imag()) < 1e-15);
  }
}

TEST_CASE("GramSpec expansion and validation") {
  GramSpec s{ComplexMatrix::Identity(2, 2), {2, 1}, {1, 2}};
  const ComplexMatrix e = expand(s);
  CHECK(e.rows() == 3);
  CHECK(e.cols() == 3);
  CHECK(e.isApprox(oracle::repeat(s.base, s.row_mult, s.col_mult)));
  CHECK(s.is_square());
  CHECK_FALSE(s.is_symmetric_multiplicity());
  GramSpec bad{ComplexMatrix::Identity(2, 2), {1}, {1, 1}};
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("OutcomeRecord totals and model matching") {
  const OutcomeRecord r({3, 0, 4});
  CHECK(r.total() == 7);
  CHECK(r.size() == 3);
  const auto model = MeasurementModel::single_group(2, {vec2(1, 0), vec2(0, 1)});
  CHECK_THROWS_AS(r.require_matches(model), InputError);
  CHECK_NOTHROW(OutcomeRecord({1, 1}).require_matches(model));
  CHECK(OutcomeRecord().total() == 0);
}

TEST_CASE("PureState normalization") {
  CHECK_NOTHROW(PureState(vec2(0.6, Complex(0, 0.8))));
  CHECK_THROWS_AS(PureState(vec2(1, 1)), InputError);
  const PureState p = PureState::normalized(vec2(1, 1));
  CHECK(std::abs(p.amplitudes().norm() - 1.0) < 1e-15);
  CHECK(std::abs(p.projector().trace() - 1.0) < 1e-15);
}

TEST_CASE("density matrix checker") {
  CHECK(check_density_matrix(ComplexMatrix::Identity(3, 3) / 3.0).ok);
  CHECK_NOTHROW(DensityMatrix::maximally_mixed(4));
  ComplexMatrix not_unit = ComplexMatrix::Identity(2, 2);
  DensityCheck c = check_density_matrix(not_unit);
  CHECK_FALSE(c.ok);
  CHECK(c.trace_error == doctest::Approx(1.0));
  CHECK_THROWS_AS(DensityMatrix{not_unit}, InvariantViolation);

  ComplexMatrix non_herm = ComplexMatrix::Identity(2, 2) / 2.0;
  non_herm(0, 1) = 0.1;
  c = check_density_matrix(non_herm);
  CHECK_FALSE(c.ok);
  CHECK(c.hermitian_error == doctest::Approx(0.1));

  ComplexMatrix negative(2, 2);
  negative << 1.2, 0.0, 0.0, -0.2;
  c = check_density_matrix(negative);
  CHECK_FALSE(c.ok);
  CHECK(c.min_eigenvalue == doctest::Approx(-0.2));

  // Floor: 1/3 smallest eigenvalue passes a floor of 1/3, fails 0.34.
  const ComplexMatrix third = ComplexMatrix::Identity(3, 3) / 3.0;
  CHECK(check_density_matrix(third, 1.0 / 3.0).ok);
  CHECK_FALSE(check_density_matrix(third, 0.34).ok);

  ComplexMatrix nan = third;
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(require_finite(nan, "test"), InputError);
}

TEST_CASE("trace distance") {
  ComplexMatrix a(2, 2), b(2, 2);
  a << 1, 0, 0, 0;
  b << 0, 0, 0, 1;
  CHECK(trace_distance(a, b) == doctest::Approx(1.0));
  CHECK(trace_distance(a, a) == doctest::Approx(0.0));
  const ComplexMatrix half = ComplexMatrix::Identity(2, 2) / 2.0;
  CHECK(trace_distance(a, half) == doctest::Approx(0.5));
}

TEST_CASE("ScaledValue arithmetic keeps factorial-sized values") {
  ScaledValue f = ScaledValue::one();
  for (int k = 2; k <= 300; ++k) f *= ScaledValue(Complex(k, 0));
  CHECK(f.log_abs() == doctest::Approx(std::lgamma(301.0)).epsilon(1e-13));
  CHECK(std::isinf(f.to_complex().real()));
  const double m = std::abs(f.mantissa());
  CHECK(m >= 1.0);
  CHECK(m < std::exp(1.0));

  ScaledValue g = f / ScaledValue(Complex(300, 0));
  CHECK(std::abs(ratio(f, g) - Complex(300, 0)) < 1e-9);
  CHECK(relative_difference(f, f) == 0.0);

  const ScaledValue z = ScaledValue::zero();
  CHECK(z.is_zero());
  CHECK(z.log_scale() == 0.0);
  CHECK((ScaledValue(Complex(2, 0)) - ScaledValue(Complex(2, 0))).is_zero());
  CHECK(std::abs((ScaledValue(Complex(1, 2)) + ScaledValue(Complex(3, -1))).to_complex() - Complex(4, 1)) < 1e-15);
  CHECK(std::abs((ScaledValue(Complex(1, 2)) * ScaledValue(Complex(0, 1))).to_complex() - Complex(-2, 1)) < 1e-15);
  CHECK(std::abs(ScaledValue(Complex(1, 2)).conj().to_complex() - Complex(1, -2)) < 1e-15);
  CHECK(std::abs(ScaledValue::from_log(std::log(5.0)).to_complex() - 5.0) < 1e-14);
}
