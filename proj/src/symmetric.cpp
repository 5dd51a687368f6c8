#include "bayestomo/symmetric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace bayestomo {
namespace {

constexpr std::size_t kMaxBasis = 50'000'000;
constexpr std::size_t kMaxStoredMatrices = 20'000'000;

std::size_t binom(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t num = n - k + i;
    if (r > std::numeric_limits<std::size_t>::max() / num) return std::numeric_limits<std::size_t>::max();
    r = r * num / i;
  }
  return r;
}

// Colex rank of the bar positions of a composition.
class CompositionRanker {
 public:
  CompositionRanker(std::size_t dim, std::size_t degree) : dim_(dim), cap_(degree + dim + 1) {
    if (dim_ < 2) return;
    table_.resize((dim_ - 1) * cap_);
    for (std::size_t j = 0; j + 1 < dim_; ++j)
      for (std::size_t p = 0; p < cap_; ++p) table_[j * cap_ + p] = binom(p, j + 1);
  }

  std::size_t rank(const std::vector<std::size_t>& m) const {
    std::size_t r = 0;
    std::size_t prefix = 0;
    for (std::size_t j = 0; j + 1 < dim_; ++j) {
      prefix += m[j];
      r += table_[j * cap_ + prefix + j];
    }
    return r;
  }

  // rank(m + e_i) given the prefix sums of m.
  std::size_t rank_raised(const std::vector<std::size_t>& m, std::size_t i) const {
    std::size_t r = 0;
    std::size_t prefix = 0;
    for (std::size_t j = 0; j + 1 < dim_; ++j) {
      prefix += m[j] + (j == i ? 1 : 0);
      r += table_[j * cap_ + prefix + j];
    }
    return r;
  }

 private:
  std::size_t dim_;
  std::size_t cap_;
  std::vector<std::size_t> table_;
};

// Steps m through all compositions of sum(m) into m.size() parts, starting
// from (t, 0, ..., 0).
bool next_composition(std::vector<std::size_t>& m) {
  const std::size_t d = m.size();
  if (d < 2) return false;
  std::size_t i = d - 1;
  while (i > 0 && m[i - 1] == 0) --i;
  if (i == 0) return false;
  --i;
  const std::size_t tail = m[d - 1];
  m[i] -= 1;
  m[d - 1] = 0;
  m[i + 1] = tail + 1;
  return true;
}

}  // namespace

std::size_t SymmetricTensor::basis_size(std::size_t dim, std::size_t degree) {
  if (dim == 0) return degree == 0 ? 1 : 0;
  return binom(degree + dim - 1, dim - 1);
}

SymmetricTensor::SymmetricTensor(std::size_t dim) : dim_(dim), amp_(1, Complex(1.0, 0.0)) {
  if (dim == 0) throw InputError("SymmetricTensor: dim must be >= 1");
}

namespace {

// Plain product; std::complex operator* goes through the Annex G NaN path.
inline Complex mul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void raise_general(const CompositionRanker& ranker, const std::vector<Complex>& coeff,
                   const std::vector<double>& root, const std::vector<Complex>& amp, std::size_t degree,
                   std::vector<Complex>& next) {
  const std::size_t dim = coeff.size();
  std::vector<std::size_t> m(dim, 0);
  m[0] = degree;
  do {
    const Complex a = amp[ranker.rank(m)];
    if (a == Complex(0.0, 0.0)) continue;
    for (std::size_t i = 0; i < dim; ++i) {
      if (coeff[i] == Complex(0.0, 0.0)) continue;
      next[ranker.rank_raised(m, i)] += mul(coeff[i], root[m[i] + 1] * a);
    }
  } while (next_composition(m));
}

}  // namespace

void SymmetricTensor::raise(const ComplexVector& phi) {
  if (static_cast<std::size_t>(phi.size()) != dim_) throw InputError("SymmetricTensor: vector length mismatch");
  const std::size_t next_size = basis_size(dim_, degree_ + 1);
  if (next_size > kMaxBasis) throw GuardLimitExceeded("symmetric basis size", kMaxBasis, next_size);

  std::vector<Complex> next(next_size, Complex(0.0, 0.0));
  std::vector<Complex> coeff(dim_);
  for (std::size_t i = 0; i < dim_; ++i) coeff[i] = std::conj(phi(static_cast<Eigen::Index>(i)));
  thread_local std::vector<double> root;
  while (root.size() < degree_ + 2) root.push_back(std::sqrt(static_cast<double>(root.size())));

  if (dim_ == 2) {
    // rank(m) == m[0]
    const std::size_t t = degree_;
    for (std::size_t m0 = 0; m0 <= t; ++m0) {
      const Complex a = amp_[m0];
      next[m0 + 1] += mul(coeff[0], root[m0 + 1] * a);
      next[m0] += mul(coeff[1], root[t - m0 + 1] * a);
    }
  } else {
    raise_general(CompositionRanker(dim_, degree_ + 1), coeff, root, amp_, degree_, next);
  }

  double peak2 = 0.0;
  for (const Complex& c : next) peak2 = std::max(peak2, std::norm(c));
  const double peak = std::sqrt(peak2);
  if (peak > 0.0) {
    const double inv = 1.0 / peak;
    for (Complex& c : next) c *= inv;
    log_scale_ += std::log(peak);
  }
  amp_ = std::move(next);
  ++degree_;
}

ScaledValue SymmetricTensor::norm_squared() const {
  double s = 0.0;
  for (const Complex& c : amp_) s += std::norm(c);
  return ScaledValue(Complex(s, 0.0), 2.0 * log_scale_);
}

ComplexMatrix SymmetricTensor::one_body() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  ComplexMatrix k = ComplexMatrix::Zero(d, d);
  const CompositionRanker ranker(dim_, degree_ + 1);
  ComplexVector u(d);
  std::vector<std::size_t> m(dim_, 0);
  m[0] = degree_ + 1;
  do {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (m[i] == 0) {
        u(static_cast<Eigen::Index>(i)) = 0.0;
        continue;
      }
      m[i] -= 1;
      u(static_cast<Eigen::Index>(i)) = std::sqrt(static_cast<double>(m[i] + 1)) * amp_[ranker.rank(m)];
      m[i] += 1;
    }
    k.noalias() += u * u.adjoint();
  } while (next_composition(m));
  return k;
}

ScaledValue gram_permanent_symmetric(std::span<const ComplexVector> vectors,
                                     std::span<const std::size_t> mult) {
  if (vectors.size() != mult.size()) throw InputError("gram_permanent_symmetric: size mismatch");
  if (vectors.empty()) return ScaledValue::one();
  SymmetricTensor t(static_cast<std::size_t>(vectors.front().size()));
  raise_interleaved(t, vectors, mult);
  return t.norm_squared();
}

std::vector<std::size_t> interleaved_order(std::span<const std::size_t> mult) {
  std::size_t total = 0;
  for (std::size_t n : mult) total += n;
  std::vector<std::size_t> order;
  order.reserve(total);
  std::vector<std::size_t> done(mult.size(), 0);
  const double nd = static_cast<double>(total);
  for (std::size_t t = 1; t <= total; ++t) {
    // Class furthest behind its share of the first t raises.
    std::size_t best = 0;
    double best_deficit = -1e300;
    for (std::size_t k = 0; k < mult.size(); ++k) {
      if (done[k] == mult[k]) continue;
      const double deficit = static_cast<double>(t) * static_cast<double>(mult[k]) / nd - static_cast<double>(done[k]);
      if (deficit > best_deficit) {
        best_deficit = deficit;
        best = k;
      }
    }
    done[best] += 1;
    order.push_back(best);
  }
  return order;
}

void raise_interleaved(SymmetricTensor& t, std::span<const ComplexVector> vectors,
                       std::span<const std::size_t> mult) {
  if (vectors.size() != mult.size()) throw InputError("raise_interleaved: size mismatch");
  for (std::size_t k : interleaved_order(mult)) t.raise(vectors[k]);
}

double SymmetricBlockSource::cost_estimate(std::size_t dim, std::span<const std::size_t> bounds) {
  std::size_t total = 0;
  for (std::size_t b : bounds) total += b;
  const double lattice = static_cast<double>(MultisetLattice::size_for(bounds));
  const double basis = static_cast<double>(SymmetricTensor::basis_size(dim, total + 1));
  return lattice * basis * static_cast<double>(dim * dim + dim);
}

SymmetricBlockSource::SymmetricBlockSource(std::vector<ComplexVector> vectors,
                                           std::vector<std::size_t> bounds, const PermanentLimits& limits)
    : vectors_(std::move(vectors)), lattice_([&] {
        std::size_t total = 0;
        for (std::size_t b : bounds) total += b;
        if (total > limits.symmetric_lattice_total_max) {
          throw GuardLimitExceeded("symmetric_lattice_total_max", limits.symmetric_lattice_total_max, total);
        }
        const std::size_t size = MultisetLattice::size_for(bounds);
        if (size > limits.lattice_max) throw GuardLimitExceeded("lattice_max", limits.lattice_max, size);
        return MultisetLattice(bounds);
      }()) {
  if (vectors_.size() != lattice_.classes()) throw InputError("SymmetricBlockSource: size mismatch");
  if (vectors_.empty()) throw InputError("SymmetricBlockSource: no outcome vectors");
  const std::size_t dim = static_cast<std::size_t>(vectors_.front().size());
  if (lattice_.size() * dim * dim > kMaxStoredMatrices) {
    throw GuardLimitExceeded("symmetric lattice storage", kMaxStoredMatrices, lattice_.size() * dim * dim);
  }
  permanent_.resize(lattice_.size());
  one_body_.resize(lattice_.size());
  one_body_log_scale_.resize(lattice_.size());

  // Depth-first over classes from the last one down, so each lattice point is
  // one raise away from a tensor already on the stack.
  std::vector<std::size_t> m(lattice_.classes(), 0);
  std::function<void(std::size_t, const SymmetricTensor&)> visit = [&](std::size_t level,
                                                                      const SymmetricTensor& base) {
    if (level == 0) {
      const std::size_t idx = lattice_.index(m);
      permanent_[idx] = base.norm_squared();
      one_body_[idx] = base.one_body();
      one_body_log_scale_[idx] = 2.0 * base.log_scale();
      return;
    }
    const std::size_t k = level - 1;
    SymmetricTensor t = base;
    for (std::size_t c = 0;; ++c) {
      m[k] = c;
      visit(level - 1, t);
      if (c == lattice_.bounds()[k]) break;
      t.raise(vectors_[k]);
    }
    m[k] = 0;
  };
  visit(lattice_.classes(), SymmetricTensor(dim));
}

ScaledValue SymmetricBlockSource::diagonal(std::span<const std::size_t> m) const {
  return permanent_[lattice_.index(m)];
}

ScaledValue SymmetricBlockSource::bordered(std::span<const std::size_t> m, std::size_t k,
                                           std::size_t l) const {
  const std::size_t idx = lattice_.index(m);
  const Complex v = vectors_.at(k).dot(one_body_[idx] * vectors_.at(l));
  return ScaledValue(v, one_body_log_scale_[idx]);
}

}  // namespace bayestomo
