#include "bayestomo/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "bayestomo/coloring.hpp"
#include "bayestomo/parallel.hpp"

namespace bayestomo {
namespace {

std::size_t require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw InputError(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + ", not square");
  }
  require_finite(a, what);
  return static_cast<std::size_t>(a.rows());
}

// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(Complex x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  Complex value() const { return {re_.value(), im_.value()}; }

 private:
  struct Real {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
      const double t = sum + x;
      if (std::abs(sum) >= std::abs(x))
        comp += (sum - t) + x;
      else
        comp += (x - t) + sum;
      sum = t;
    }
    double value() const { return sum + comp; }
  };
  Real re_;
  Real im_;
};

Complex ipow(Complex base, std::size_t exp) {
  Complex result(1.0, 0.0);
  while (exp > 0) {
    if (exp & 1u) result *= base;
    exp >>= 1u;
    if (exp > 0) base *= base;
  }
  return result;
}

// Divides each row by its largest magnitude; returns log of the product of
// the scales, or -inf if some row is zero.
double normalize_rows(ComplexMatrix& b) {
  double log_scale = 0.0;
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    const double s = b.row(i).cwiseAbs().maxCoeff();
    if (s == 0.0) return -INFINITY;
    b.row(i) /= s;
    log_scale += std::log(s);
  }
  return log_scale;
}

ScaledValue permutation_sum(const ComplexMatrix& a, double alpha, bool weighted) {
  const auto n = static_cast<std::size_t>(a.rows());
  if (n == 0) return ScaledValue::one();
  ComplexMatrix b = a;
  const double log_scale = normalize_rows(b);
  if (std::isinf(log_scale)) return ScaledValue::zero();

  std::vector<double> alpha_pow(n + 1, 1.0);
  for (std::size_t c = 1; c <= n; ++c) alpha_pow[c] = alpha_pow[c - 1] * alpha;

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  CompensatedSum total;
  do {
    Complex prod(1.0, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      prod *= b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(perm[i]));
    if (weighted) prod *= alpha_pow[cycle_count(perm)];
    total.add(prod);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return ScaledValue(total.value(), log_scale);
}

}  // namespace

bool AlphaParam::is_positive_integer() const noexcept {
  return std::isfinite(value_) && value_ >= 1.0 && std::floor(value_) == value_;
}

unsigned AlphaParam::as_positive_integer() const {
  if (!is_positive_integer()) {
    throw InputError("alpha must be an integer >= 1, got " + std::to_string(value_));
  }
  return static_cast<unsigned>(value_);
}

std::size_t cycle_count(std::span<const std::size_t> perm) {
  const std::size_t n = perm.size();
  std::vector<char> seen(n, 0);
  std::size_t cycles = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (perm[i] >= n) throw InputError("cycle_count: entry out of range");
    if (seen[i]) continue;
    ++cycles;
    std::size_t j = i;
    while (!seen[j]) {
      seen[j] = 1;
      j = perm[j];
    }
    if (j != i) throw InputError("cycle_count: not a permutation");
  }
  return cycles;
}

std::uint64_t ancilla_assignment_sum(std::span<const std::size_t> perm, unsigned d) {
  const std::size_t n = perm.size();
  if (d == 0) return n == 0 ? 1 : 0;
  std::vector<unsigned> j(n, 0);
  std::uint64_t count = 0;
  while (true) {
    bool all = true;
    for (std::size_t a = 0; a < n && all; ++a) all = j[a] == j[perm[a]];
    if (all) ++count;
    std::size_t pos = 0;
    for (; pos < n; ++pos) {
      if (++j[pos] < d) break;
      j[pos] = 0;
    }
    if (pos == n) break;
  }
  return count;
}

ScaledValue permanent_naive(const ComplexMatrix& a, const PermanentLimits& limits) {
  const std::size_t n = require_square(a, "permanent_naive");
  if (n > limits.naive_max) throw GuardLimitExceeded("naive_max", limits.naive_max, n);
  return permutation_sum(a, 1.0, false);
}

ScaledValue alpha_permanent_naive(const ComplexMatrix& a, AlphaParam alpha,
                                  const PermanentLimits& limits) {
  const std::size_t n = require_square(a, "alpha_permanent_naive");
  if (n > limits.naive_max) throw GuardLimitExceeded("naive_max", limits.naive_max, n);
  return permutation_sum(a, alpha.value(), true);
}

ScaledValue permanent_ryser(const ComplexMatrix& a, const PermanentLimits& limits) {
  const std::size_t n = require_square(a, "permanent_ryser");
  if (n > limits.ryser_max) throw GuardLimitExceeded("ryser_max", limits.ryser_max, n);
  if (n == 0) return ScaledValue::one();

  // Row sums stay bounded by 1 in magnitude.
  ComplexMatrix b = a;
  double log_scale = 0.0;
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    const double s = b.row(i).cwiseAbs().sum();
    if (s == 0.0) return ScaledValue::zero();
    b.row(i) /= s;
    log_scale += std::log(s);
  }

  const std::uint64_t total_steps = std::uint64_t{1} << n;
  const std::size_t chunks = n >= 12 ? 64 : 1;
  const std::uint64_t per_chunk = total_steps / chunks;
  const bool compensated = n > 20;
  std::vector<Complex> partial(chunks);

  parallel_for_chunks(chunks, [&](std::size_t c) {
    const std::uint64_t begin = std::max<std::uint64_t>(1, c * per_chunk);
    const std::uint64_t end = (c + 1) * per_chunk;
    std::uint64_t gray = (begin - 1) ^ ((begin - 1) >> 1);
    ComplexVector row_sum = ComplexVector::Zero(static_cast<Eigen::Index>(n));
    int popcount = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (gray >> j & 1u) {
        row_sum += b.col(static_cast<Eigen::Index>(j));
        ++popcount;
      }
    }
    CompensatedSum kahan;
    Complex plain(0.0, 0.0);
    for (std::uint64_t step = begin; step < end; ++step) {
      const auto j = static_cast<unsigned>(std::countr_zero(step));
      const auto col = static_cast<Eigen::Index>(j);
      gray ^= std::uint64_t{1} << j;
      if (gray >> j & 1u) {
        row_sum += b.col(col);
        ++popcount;
      } else {
        row_sum -= b.col(col);
        --popcount;
      }
      Complex prod = row_sum.prod();
      if (popcount & 1) prod = -prod;
      if (compensated)
        kahan.add(prod);
      else
        plain += prod;
    }
    partial[c] = compensated ? kahan.value() : plain;
  });

  CompensatedSum total;
  for (const Complex& p : partial) total.add(p);
  Complex value = total.value();
  if (n & 1u) value = -value;
  return ScaledValue(value, log_scale);
}

ScaledValue permanent_multiplicity(const GramSpec& spec, MultiplicityKernel kernel,
                                   const PermanentLimits& limits) {
  spec.validate();
  const std::size_t n = spec.expanded_rows();
  if (n != spec.expanded_cols()) {
    throw InputError("permanent_multiplicity: row multiplicities sum to " + std::to_string(n) +
                     ", column multiplicities to " + std::to_string(spec.expanded_cols()));
  }
  if (n == 0) return ScaledValue::one();

  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  for (std::size_t k = 0; k < spec.row_mult.size(); ++k) {
    if (spec.row_mult[k] > 0) rows.push_back(k);
    if (spec.col_mult[k] > 0) cols.push_back(k);
  }
  auto lattice_of = [](const std::vector<std::size_t>& idx, const std::vector<std::size_t>& mult) {
    std::vector<std::size_t> b;
    for (std::size_t k : idx) b.push_back(mult[k]);
    return b;
  };
  std::vector<std::size_t> row_m = lattice_of(rows, spec.row_mult);
  std::vector<std::size_t> col_m = lattice_of(cols, spec.col_mult);

  // The permanent is transpose invariant: enumerate over the smaller side.
  ComplexMatrix b(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          spec.base(static_cast<Eigen::Index>(rows[r]), static_cast<Eigen::Index>(cols[c]));
  if (MultisetLattice::size_for(row_m) < MultisetLattice::size_for(col_m)) {
    b.transposeInPlace();
    std::swap(row_m, col_m);
  }
  const auto nr = static_cast<std::size_t>(b.rows());
  const auto nc = static_cast<std::size_t>(b.cols());

  // Fixed column for the Glynn form: the smallest class, which shrinks the
  // lattice the most.
  std::size_t fixed = 0;
  for (std::size_t k = 1; k < nc; ++k)
    if (col_m[k] < col_m[fixed]) fixed = k;
  std::vector<std::size_t> free_m = col_m;
  if (kernel == MultiplicityKernel::glynn) free_m[fixed] -= 1;

  const std::size_t terms = MultisetLattice::size_for(free_m);
  if (terms > limits.multiplicity_terms_max) {
    throw GuardLimitExceeded("multiplicity_terms_max", limits.multiplicity_terms_max, terms);
  }

  // Binomial(f, t) / 2^f per class, so every weight is at most 1.
  std::vector<std::vector<double>> weight(nc);
  for (std::size_t k = 0; k < nc; ++k) {
    const double f = static_cast<double>(free_m[k]);
    for (std::size_t t = 0; t <= free_m[k]; ++t) {
      const double td = static_cast<double>(t);
      weight[k].push_back(
          std::exp(std::lgamma(f + 1) - std::lgamma(td + 1) - std::lgamma(f - td + 1) - f * M_LN2));
    }
  }

  std::vector<double> inv_scale(nr);
  double log_scale = 0.0;
  for (std::size_t r = 0; r < nr; ++r) {
    double s = 0.0;
    for (std::size_t k = 0; k < nc; ++k)
      s += static_cast<double>(col_m[k]) * std::abs(b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)));
    if (s == 0.0) return ScaledValue::zero();
    inv_scale[r] = 1.0 / s;
    log_scale += static_cast<double>(row_m[r]) * std::log(s);
  }
  if (kernel == MultiplicityKernel::ryser) log_scale += static_cast<double>(n) * M_LN2;

  const MultisetLattice lattice(free_m);
  const std::size_t chunks = terms >= 4096 ? 32 : 1;
  std::vector<Complex> partial(chunks);
  parallel_for_chunks(chunks, [&](std::size_t c) {
    const std::size_t begin = terms * c / chunks;
    const std::size_t end = terms * (c + 1) / chunks;
    std::vector<std::size_t> t = lattice.decode(begin);
    std::vector<Complex> coeff(nc);
    CompensatedSum sum;
    for (std::size_t idx = begin; idx < end; ++idx) {
      double w = 1.0;
      std::size_t negatives = 0;
      for (std::size_t k = 0; k < nc; ++k) {
        w *= weight[k][t[k]];
        negatives += t[k];
        coeff[k] = kernel == MultiplicityKernel::glynn
                       ? Complex(static_cast<double>(col_m[k]) - 2.0 * static_cast<double>(t[k]), 0.0)
                       : Complex(static_cast<double>(t[k]), 0.0);
      }
      const bool negative = kernel == MultiplicityKernel::glynn ? (negatives & 1u)
                                                                : ((n - negatives) & 1u);
      Complex term(negative ? -w : w, 0.0);
      for (std::size_t r = 0; r < nr && term != Complex(0.0, 0.0); ++r) {
        Complex s(0.0, 0.0);
        for (std::size_t k = 0; k < nc; ++k)
          s += coeff[k] * b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k));
        term *= ipow(s * inv_scale[r], row_m[r]);
      }
      sum.add(term);
      for (std::size_t k = 0; k < nc; ++k) {
        if (++t[k] <= free_m[k]) break;
        t[k] = 0;
      }
    }
    partial[c] = sum.value();
  });
  CompensatedSum total;
  for (const Complex& p : partial) total.add(p);
  return ScaledValue(total.value(), log_scale);
}

double laplace_expand_check(const GramSpec& spec) {
  spec.validate();
  const std::size_t n = spec.expanded_rows();
  if (n == 0 || n != spec.expanded_cols()) {
    throw InputError("laplace_expand_check: needs a square, non-empty repeated matrix");
  }
  const ScaledValue direct = permanent_multiplicity(spec);
  ScaledValue expanded;
  for (std::size_t l = 0; l < spec.row_mult.size(); ++l) {
    if (spec.row_mult[l] == 0) continue;
    for (std::size_t k = 0; k < spec.col_mult.size(); ++k) {
      if (spec.col_mult[k] == 0) continue;
      GramSpec minor = spec;
      minor.row_mult[l] -= 1;
      minor.col_mult[k] -= 1;
      const double count = static_cast<double>(spec.row_mult[l] * spec.col_mult[k]);
      expanded += permanent_multiplicity(minor) *
                  ScaledValue(count * spec.base(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)));
    }
  }
  expanded /= ScaledValue(Complex(static_cast<double>(n), 0.0));
  if (direct.is_zero()) return expanded.is_zero() ? 0.0 : std::exp(expanded.log_abs());
  return std::exp((direct - expanded).log_abs() - direct.log_abs());
}

ScaledValue alpha_permanent_cyclecover(const ComplexMatrix& a, AlphaParam alpha,
                                       const PermanentLimits& limits) {
  const std::size_t n = require_square(a, "alpha_permanent_cyclecover");
  if (n > limits.cyclecover_max) throw GuardLimitExceeded("cyclecover_max", limits.cyclecover_max, n);
  if (n == 0) return ScaledValue::one();
  ComplexMatrix b = a;
  const double log_scale = normalize_rows(b);
  if (std::isinf(log_scale)) return ScaledValue::zero();

  const std::size_t subsets = std::size_t{1} << n;
  const std::size_t full = subsets - 1;
  // path[T * n + v]: weight of paths from min(T) through exactly T ending at v.
  std::vector<Complex> path(subsets * n, Complex(0.0, 0.0));
  std::vector<Complex> cycle(subsets, Complex(0.0, 0.0));
  for (std::size_t t = 1; t < subsets; ++t) {
    const auto s = static_cast<std::size_t>(std::countr_zero(t));
    if (t == (std::size_t{1} << s)) path[t * n + s] = 1.0;
    Complex w(0.0, 0.0);
    for (std::size_t v = s; v < n; ++v) {
      if (!(t >> v & 1u)) continue;
      const Complex h = path[t * n + v];
      if (h == Complex(0.0, 0.0)) continue;
      w += h * b(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(s));
      for (std::size_t u = s + 1; u < n; ++u) {
        if (t >> u & 1u) continue;
        path[(t | (std::size_t{1} << u)) * n + u] +=
            h * b(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u));
      }
    }
    cycle[t] = alpha.value() * w;
  }
  path.clear();
  path.shrink_to_fit();

  std::vector<Complex> cover(subsets, Complex(0.0, 0.0));
  cover[0] = 1.0;
  for (std::size_t s_set = 1; s_set < subsets; ++s_set) {
    const std::size_t low = s_set & (~s_set + 1);
    const std::size_t rest = s_set ^ low;
    Complex f(0.0, 0.0);
    // Every sub-multiset r of rest, including empty.
    for (std::size_t r = rest;; r = (r - 1) & rest) {
      const std::size_t cyc = r | low;
      f += cycle[cyc] * cover[s_set ^ cyc];
      if (r == 0) break;
    }
    cover[s_set] = f;
  }
  return ScaledValue(cover[full], log_scale);
}

ScaledValue alpha_permanent_coloring(const GramSpec& spec, unsigned d, const PermanentLimits& limits) {
  spec.validate();
  if (d < 1) throw InputError("alpha_permanent_coloring: d must be >= 1");
  if (!spec.is_symmetric_multiplicity()) {
    throw InputError("alpha_permanent_coloring: row and column multiplicities must agree");
  }
  auto source = std::make_shared<MultiplicityBlockSource>(spec.base, MultiplicityKernel::glynn, limits);
  return AlphaPermanentTable(spec.row_mult, d, source, limits).full();
}

ScaledValue alpha_permanent_minor(const GramSpec& spec, std::size_t struck_row, std::size_t struck_col,
                                  unsigned d, const PermanentLimits& limits) {
  spec.validate();
  if (d < 1) throw InputError("alpha_permanent_minor: d must be >= 1");
  if (!spec.is_symmetric_multiplicity()) {
    throw InputError("alpha_permanent_minor: row and column multiplicities must agree");
  }
  if (struck_row >= spec.row_mult.size() || struck_col >= spec.row_mult.size() ||
      spec.row_mult[struck_row] == 0 || spec.row_mult[struck_col] == 0) {
    throw InputError("alpha_permanent_minor: struck class has no copies");
  }
  auto source = std::make_shared<MultiplicityBlockSource>(spec.base, MultiplicityKernel::glynn, limits);
  return AlphaPermanentTable(spec.row_mult, d, source, limits).minor(struck_row, struck_col);
}

ComplexMatrix expand_alpha_minor(const GramSpec& spec, std::size_t struck_row, std::size_t struck_col) {
  if (!spec.is_symmetric_multiplicity()) {
    throw InputError("expand_alpha_minor: row and column multiplicities must agree");
  }
  const ComplexMatrix full = expand(spec);
  auto first_of = [&](std::size_t cls) {
    if (cls >= spec.row_mult.size() || spec.row_mult[cls] == 0) {
      throw InputError("expand_alpha_minor: struck class has no copies");
    }
    return static_cast<Eigen::Index>(
        std::accumulate(spec.row_mult.begin(), spec.row_mult.begin() + static_cast<std::ptrdiff_t>(cls),
                        std::size_t{0}));
  };
  const Eigen::Index a = first_of(struck_row);
  const Eigen::Index b = first_of(struck_col);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < full.rows(); ++i)
    if (i != a) keep.push_back(i);
  ComplexMatrix out(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    for (std::size_t c = 0; c < keep.size(); ++c) {
      const Eigen::Index src_col = keep[c] == b ? a : keep[c];
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = full(keep[r], src_col);
    }
  }
  return out;
}

ScaledValue alpha_laplace_border_expand(const GramSpec& spec, std::span<const Complex> border_row,
                                        std::span<const Complex> border_col, Complex corner, unsigned d,
                                        const PermanentLimits& limits) {
  spec.validate();
  if (d < 1) throw InputError("alpha_laplace_border_expand: d must be >= 1");
  if (!spec.is_symmetric_multiplicity()) {
    throw InputError("alpha_laplace_border_expand: row and column multiplicities must agree");
  }
  const std::size_t n = spec.expanded_rows();
  if (border_row.size() != n || border_col.size() != n) {
    throw InputError("alpha_laplace_border_expand: border length " + std::to_string(border_row.size()) +
                     "/" + std::to_string(border_col.size()) + " for expanded size " + std::to_string(n));
  }
  const double dd = static_cast<double>(d);
  auto source = std::make_shared<MultiplicityBlockSource>(spec.base, MultiplicityKernel::glynn, limits);
  const AlphaPermanentTable table(spec.row_mult, d, source, limits);

  ScaledValue result = ScaledValue(dd * corner) * table.full();
  const std::size_t m = spec.row_mult.size();
  std::vector<Complex> col_sum(m, 0.0), row_sum(m, 0.0), diag_sum(m, 0.0);
  std::size_t pos = 0;
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t c = 0; c < spec.row_mult[k]; ++c, ++pos) {
      col_sum[k] += border_col[pos];
      row_sum[k] += border_row[pos];
      diag_sum[k] += border_col[pos] * border_row[pos];
    }
  }
  for (std::size_t l = 0; l < m; ++l) {
    if (spec.row_mult[l] == 0) continue;
    for (std::size_t k = 0; k < m; ++k) {
      if (spec.row_mult[k] == 0) continue;
      Complex factor = col_sum[l] * row_sum[k];
      if (k == l) factor += (dd - 1.0) * diag_sum[l];
      if (factor == Complex(0.0, 0.0)) continue;
      result += ScaledValue(factor) * table.minor(l, k);
    }
  }
  return result;
}

}  // namespace bayestomo
