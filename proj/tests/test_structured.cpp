#include <cmath>
#include <memory>
#include <random>
#include <set>

#include "doctest.h"

#include "bayestomo/coloring.hpp"
#include "bayestomo/lattice.hpp"
#include "bayestomo/symmetric.hpp"
#include "oracles.hpp"

using namespace bayestomo;

namespace {

std::vector<ComplexVector> random_vectors(std::mt19937_64& rng, std::size_t m, Eigen::Index d) {
  std::vector<ComplexVector> vs;
  for (std::size_t k = 0; k < m; ++k) vs.push_back(oracle::random_vector(rng, d));
  return vs;
}

ComplexMatrix gram(const std::vector<ComplexVector>& vs) {
  const auto m = static_cast<Eigen::Index>(vs.size());
  ComplexMatrix g(m, m);
  for (Eigen::Index l = 0; l < m; ++l)
    for (Eigen::Index k = 0; k < m; ++k) g(l, k) = vs[static_cast<std::size_t>(l)].dot(vs[static_cast<std::size_t>(k)]);
  return g;
}

std::vector<std::size_t> plus(std::vector<std::size_t> m, std::size_t k) {
  ++m[k];
  return m;
}

}  // namespace

TEST_CASE("multiset lattice indexing") {
  const MultisetLattice lat({2, 0, 3});
  CHECK(lat.size() == 3 * 1 * 4);
  CHECK(MultisetLattice::size_for(std::vector<std::size_t>{2, 0, 3}) == 12);
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const auto m = lat.decode(i);
    CHECK(lat.index(m) == i);
    CHECK(lat.degree(i) == m[0] + m[1] + m[2]);
    seen.insert(i);
  }
  CHECK(seen.size() == lat.size());
  const std::vector<std::size_t> top{2, 0, 2};
  std::size_t visits = 0;
  for_each_submultiset(lat, lat.index(top), [&](std::size_t sub, std::size_t deg) {
    const auto m = lat.decode(sub);
    CHECK(m[0] <= 2);
    CHECK(m[1] == 0);
    CHECK(m[2] <= 2);
    CHECK(deg == m[0] + m[2]);
    const std::vector<std::size_t> rest{2 - m[0], 0, 2 - m[2]};
    CHECK(lat.index(rest) == lat.index(top) - sub);
    ++visits;
  });
  CHECK(visits == 9);
  const std::vector<std::size_t> huge(8, std::size_t{1} << 20);
  CHECK(MultisetLattice::size_for(huge) == SIZE_MAX);
}

TEST_CASE("symmetric basis sizes are binomial coefficients") {
  CHECK(SymmetricTensor::basis_size(2, 5) == 6);
  CHECK(SymmetricTensor::basis_size(3, 4) == 15);
  CHECK(SymmetricTensor::basis_size(4, 0) == 1);
  CHECK(SymmetricTensor::basis_size(1, 9) == 1);
}

TEST_CASE("symmetric tensor gives Gram permanents and bordered permanents") {
  std::mt19937_64 rng(31);
  for (Eigen::Index d = 1; d <= 3; ++d) {
    const auto xs = random_vectors(rng, 5, d);
    SymmetricTensor t(static_cast<std::size_t>(d));
    for (const auto& x : xs) t.raise(x);
    CHECK(t.degree() == 5);
    const ComplexMatrix g = gram(xs);
    CHECK(oracle::rel(t.norm_squared().to_complex(), oracle::permanent(g)) <= 1e-10);

    const ComplexMatrix k = t.one_body() * std::exp(2.0 * t.log_scale());
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        ComplexMatrix b(6, 6);
        b.topLeftCorner(5, 5) = g;
        for (Eigen::Index r = 0; r < 5; ++r) {
          b(r, 5) = std::conj(xs[static_cast<std::size_t>(r)](j));
          b(5, r) = xs[static_cast<std::size_t>(r)](i);
        }
        b(5, 5) = i == j ? 1.0 : 0.0;
        CHECK(oracle::rel(k(i, j), oracle::permanent(b)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("symmetric Gram permanent matches the multiplicity kernel") {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 10; ++t) {
    const auto vs = random_vectors(rng, 3, 2);
    const std::vector<std::size_t> mult{3, static_cast<std::size_t>(t % 4), 2};
    GramSpec s{gram(vs), mult, mult};
    CHECK(relative_difference(gram_permanent_symmetric(vs, mult), permanent_multiplicity(s)) <= 1e-9);
  }
}

TEST_CASE("block sources agree") {
  std::mt19937_64 rng(33);
  const auto vs = random_vectors(rng, 3, 2);
  const std::vector<std::size_t> bounds{2, 1, 2};
  const MultiplicityBlockSource mult_src(gram(vs));
  const SymmetricBlockSource sym_src(vs, bounds);
  CHECK(mult_src.classes() == 3);
  CHECK(sym_src.classes() == 3);
  const MultisetLattice lat(bounds);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const auto m = lat.decode(i);
    const ComplexMatrix g = gram(vs);
    CHECK(oracle::rel(mult_src.diagonal(m).to_complex(), oracle::permanent(oracle::repeat(g, m, m))) <= 1e-10);
    CHECK(relative_difference(sym_src.diagonal(m), mult_src.diagonal(m)) <= 1e-10);
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t l = 0; l < 3; ++l) {
        const Complex ref = oracle::permanent(oracle::repeat(g, plus(m, k), plus(m, l)));
        CHECK(oracle::rel(mult_src.bordered(m, k, l).to_complex(), ref) <= 1e-10);
        CHECK(oracle::rel(sym_src.bordered(m, k, l).to_complex(), ref) <= 1e-10);
      }
    }
  }
}

TEST_CASE("alpha-permanent table: totals, minors, estimator coefficients") {
  std::mt19937_64 rng(34);
  const auto vs = random_vectors(rng, 3, 2);
  const std::vector<std::size_t> mult{2, 1, 2};
  const ComplexMatrix g = gram(vs);
  GramSpec spec{g, mult, mult};
  for (unsigned d = 1; d <= 3; ++d) {
    const std::vector<std::shared_ptr<const BlockPermanentSource>> sources{
        std::make_shared<MultiplicityBlockSource>(g), std::make_shared<SymmetricBlockSource>(vs, mult)};
    for (const auto& src : sources) {
      const AlphaPermanentTable table(mult, d, src);
      CHECK(table.colors() == d);
      const Complex full = oracle::alpha_permanent(expand(spec), d);
      CHECK(oracle::rel(table.full().to_complex(), full) <= 1e-10);
      for (std::size_t l = 0; l < 3; ++l) {
        for (std::size_t k = 0; k < 3; ++k) {
          const Complex minor = oracle::alpha_permanent(expand_alpha_minor(spec, l, k), d);
          CHECK(oracle::rel(table.minor(l, k).to_complex(), minor) <= 1e-10);
        }
      }
      for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t l = 0; l < 3; ++l) {
          const double nk = static_cast<double>(mult[k]);
          const double nl = static_cast<double>(mult[l]) + (k == l ? d - 1.0 : 0.0);
          const Complex minor = oracle::alpha_permanent(expand_alpha_minor(spec, l, k), d);
          const Complex expected = nk * nl * minor / full;
          CHECK(std::abs(table.estimator_coefficient(k, l) - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
        }
      }
    }
  }
}

TEST_CASE("symmetric block source enforces its storage guard") {
  std::mt19937_64 rng(35);
  const auto vs = random_vectors(rng, 2, 2);
  PermanentLimits tight;
  tight.lattice_max = 10;
  CHECK_THROWS_AS(SymmetricBlockSource(vs, {5, 5}, tight), GuardLimitExceeded);
  CHECK_THROWS_AS(SymmetricBlockSource(vs, {200, 57}), GuardLimitExceeded);
  CHECK_NOTHROW(SymmetricBlockSource(vs, {200, 56}));
}
