// Slow reference implementations used only by the tests. Nothing here calls
// into the library's permanent engine.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Permanent by recursive first-row Laplace expansion.
inline Complex permanent(const Matrix& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 1.0;
  if (n == 1) return a(0, 0);
  Complex sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (a(0, j) == Complex(0.0)) continue;
    Matrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index c2 = 0;
      for (Eigen::Index c = 0; c < n; ++c)
        if (c != j) minor(r - 1, c2++) = a(r, c);
    }
    sum += a(0, j) * permanent(minor);
  }
  return sum;
}

// Cycle-weighted permanent by depth-first construction of the permutation,
// tracking cycles as they close.
inline Complex alpha_permanent(const Matrix& a, double alpha) {
  const auto n = static_cast<std::size_t>(a.rows());
  if (n == 0) return 1.0;
  std::vector<int> image(n, -1);
  std::vector<bool> used(n, false);
  Complex total = 0.0;
  std::function<void(std::size_t, Complex)> rec = [&](std::size_t row, Complex prod) {
    if (row == n) {
      std::vector<bool> seen(n, false);
      int cycles = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (seen[i]) continue;
        ++cycles;
        for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(image[j])) seen[j] = true;
      }
      total += prod * std::pow(alpha, cycles);
      return;
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c]) continue;
      used[c] = true;
      image[row] = static_cast<int>(c);
      rec(row + 1, prod * a(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)));
      used[c] = false;
    }
  };
  rec(0, 1.0);
  return total;
}

// Row l of base repeated rows[l] times, column k repeated cols[k] times.
inline Matrix repeat(const Matrix& base, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  std::vector<Eigen::Index> ri, ci;
  for (std::size_t l = 0; l < rows.size(); ++l)
    for (std::size_t t = 0; t < rows[l]; ++t) ri.push_back(static_cast<Eigen::Index>(l));
  for (std::size_t k = 0; k < cols.size(); ++k)
    for (std::size_t t = 0; t < cols[k]; ++t) ci.push_back(static_cast<Eigen::Index>(k));
  Matrix out(static_cast<Eigen::Index>(ri.size()), static_cast<Eigen::Index>(ci.size()));
  for (std::size_t i = 0; i < ri.size(); ++i)
    for (std::size_t j = 0; j < ci.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = base(ri[i], ci[j]);
  return out;
}

inline double rel(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n) { return random_matrix(rng, n, 1).col(0); }

inline Matrix random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, n));
  return qr.householderQ();
}

// Posterior mean of the reduced state from the bordered-Gram identity:
// rho_ij = per_dA(B^(i,j)) / ((N + d dA) per_dA(A)), where A is the Gram
// matrix of the flattened outcome sequence and B^(i,j) borders it with the
// basis vectors e_i (row) and e_j (column).
inline Matrix posterior_by_bordering(const std::vector<Vector>& outcomes, const std::vector<std::size_t>& counts,
                                     double ancilla) {
  std::vector<Vector> seq;
  for (std::size_t k = 0; k < counts.size(); ++k)
    for (std::size_t t = 0; t < counts[k]; ++t) seq.push_back(outcomes[k]);
  const auto n = static_cast<Eigen::Index>(seq.size());
  const Eigen::Index d = outcomes.front().size();
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = seq[static_cast<std::size_t>(i)].dot(seq[static_cast<std::size_t>(j)]);
  const Complex den = alpha_permanent(a, ancilla);
  Matrix rho(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Matrix b(n + 1, n + 1);
      b.topLeftCorner(n, n) = a;
      for (Eigen::Index r = 0; r < n; ++r) {
        b(r, n) = std::conj(seq[static_cast<std::size_t>(r)](j));
        b(n, r) = seq[static_cast<std::size_t>(r)](i);
      }
      b(n, n) = i == j ? 1.0 : 0.0;
      rho(i, j) = alpha_permanent(b, ancilla) / ((static_cast<double>(n) + static_cast<double>(d) * ancilla) * den);
    }
  }
  return rho;
}

}  // namespace oracle
