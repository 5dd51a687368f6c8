#include "bayestomo/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bayestomo {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Rewrites per-entry scaled values into one scale per degree.
DegreeScaledTable to_degree_table(const MultisetLattice& lattice, const std::vector<ScaledValue>& v,
                                  std::size_t max_degree) {
  DegreeScaledTable t;
  t.value.assign(v.size(), Complex(0.0, 0.0));
  t.log_scale.assign(max_degree + 1, kNegInf);
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto& ls = t.log_scale[lattice.degree(i)];
    ls = std::max(ls, v[i].log_abs());
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double ls = t.log_scale[lattice.degree(i)];
    if (!v[i].is_zero()) t.value[i] = v[i].mantissa() * std::exp(v[i].log_scale() - ls);
  }
  for (auto& ls : t.log_scale)
    if (ls == kNegInf) ls = 0.0;
  return t;
}

// out(m) = sum_{m' <= m} a(m') b(m - m').
DegreeScaledTable convolve(const MultisetLattice& lattice, const DegreeScaledTable& a,
                           const DegreeScaledTable& b, std::size_t max_degree) {
  const std::size_t dn = max_degree + 1;
  std::vector<double> ref(dn, kNegInf);
  for (std::size_t i = 0; i < dn; ++i)
    for (std::size_t j = 0; i + j < dn; ++j) ref[i + j] = std::max(ref[i + j], a.log_scale[i] + b.log_scale[j]);
  std::vector<double> factor(dn * dn, 0.0);
  for (std::size_t i = 0; i < dn; ++i)
    for (std::size_t j = 0; i + j < dn; ++j)
      factor[i * dn + j] = std::exp(a.log_scale[i] + b.log_scale[j] - ref[i + j]);

  DegreeScaledTable out;
  out.value.assign(lattice.size(), Complex(0.0, 0.0));
  for (std::size_t idx = 0; idx < lattice.size(); ++idx) {
    const std::size_t deg = lattice.degree(idx);
    Complex acc(0.0, 0.0);
    for_each_submultiset(lattice, idx, [&](std::size_t sub, std::size_t sub_deg) {
      const Complex x = a.value[sub];
      if (x == Complex(0.0, 0.0)) return;
      acc += x * b.value[idx - sub] * factor[sub_deg * dn + (deg - sub_deg)];
    });
    out.value[idx] = acc;
  }
  out.log_scale = ref;
  std::vector<double> peak(dn, 0.0);
  for (std::size_t idx = 0; idx < lattice.size(); ++idx) {
    auto& p = peak[lattice.degree(idx)];
    p = std::max(p, std::abs(out.value[idx]));
  }
  for (std::size_t t = 0; t < dn; ++t) {
    if (peak[t] == 0.0 || ref[t] == kNegInf) {
      out.log_scale[t] = 0.0;
      peak[t] = 1.0;
    } else {
      out.log_scale[t] = ref[t] + std::log(peak[t]);
    }
  }
  for (std::size_t idx = 0; idx < lattice.size(); ++idx) out.value[idx] /= peak[lattice.degree(idx)];
  return out;
}

}  // namespace

MultiplicityBlockSource::MultiplicityBlockSource(ComplexMatrix base, MultiplicityKernel kernel,
                                                 PermanentLimits limits)
    : base_(std::move(base)), kernel_(kernel), limits_(limits) {
  if (base_.rows() != base_.cols()) throw InputError("MultiplicityBlockSource: base must be square");
}

ScaledValue MultiplicityBlockSource::diagonal(std::span<const std::size_t> m) const {
  GramSpec spec{base_, {m.begin(), m.end()}, {m.begin(), m.end()}};
  return permanent_multiplicity(spec, kernel_, limits_);
}

ScaledValue MultiplicityBlockSource::bordered(std::span<const std::size_t> m, std::size_t k,
                                              std::size_t l) const {
  GramSpec spec{base_, {m.begin(), m.end()}, {m.begin(), m.end()}};
  spec.row_mult.at(k) += 1;
  spec.col_mult.at(l) += 1;
  return permanent_multiplicity(spec, kernel_, limits_);
}

AlphaPermanentTable::AlphaPermanentTable(std::vector<std::size_t> mult, unsigned d,
                                         std::shared_ptr<const BlockPermanentSource> source,
                                         const PermanentLimits& limits)
    : mult_(std::move(mult)), d_(d), source_(std::move(source)), lattice_([&] {
        const std::size_t size = MultisetLattice::size_for(mult_);
        if (size > limits.lattice_max) throw GuardLimitExceeded("lattice_max", limits.lattice_max, size);
        return MultisetLattice(mult_);
      }()) {
  if (d_ < 1) throw InputError("AlphaPermanentTable: d must be >= 1");
  if (source_ == nullptr || source_->classes() != mult_.size()) {
    throw InputError("AlphaPermanentTable: block source class count mismatch");
  }
  std::size_t max_degree = 0;
  for (std::size_t m : mult_) max_degree += m;

  log_factorial_.resize(lattice_.size());
  std::vector<ScaledValue> single(lattice_.size());
  for (std::size_t idx = 0; idx < lattice_.size(); ++idx) {
    const std::vector<std::size_t> m = lattice_.decode(idx);
    double lf = 0.0;
    for (std::size_t x : m) lf += std::lgamma(static_cast<double>(x) + 1.0);
    log_factorial_[idx] = lf;
    single[idx] = source_->diagonal(m) / ScaledValue::from_log(lf);
  }
  single_ = to_degree_table(lattice_, single, max_degree);

  DegreeScaledTable delta;
  delta.value.assign(lattice_.size(), Complex(0.0, 0.0));
  delta.value[0] = 1.0;
  delta.log_scale.assign(max_degree + 1, 0.0);
  powers_.push_back(std::move(delta));
  for (unsigned c = 1; c <= d_; ++c) powers_.push_back(convolve(lattice_, single_, powers_.back(), max_degree));
}

ScaledValue AlphaPermanentTable::full() const {
  const std::size_t top = lattice_.size() - 1;
  return powers_[d_].at(lattice_, top) * ScaledValue::from_log(log_factorial_[top]);
}

ScaledValue AlphaPermanentTable::bordered_convolution(std::size_t k, std::size_t l) const {
  std::vector<std::size_t> reduced = mult_;
  reduced[k] -= 1;
  reduced[l] -= 1;
  const std::size_t top = lattice_.index(reduced);
  const DegreeScaledTable& rest = powers_[d_ - 1];
  ScaledValue sum;
  for_each_submultiset(lattice_, top, [&](std::size_t sub, std::size_t) {
    const ScaledValue q = rest.at(lattice_, top - sub);
    if (q.is_zero()) return;
    const std::vector<std::size_t> m = lattice_.decode(sub);
    sum += source_->bordered(m, k, l) / ScaledValue::from_log(log_factorial_[sub]) * q;
  });
  return sum;
}

ScaledValue AlphaPermanentTable::minor(std::size_t struck_row, std::size_t struck_col) const {
  if (struck_row >= mult_.size() || struck_col >= mult_.size() || mult_[struck_row] == 0 ||
      mult_[struck_col] == 0) {
    throw InputError("AlphaPermanentTable::minor: struck class has no copies");
  }
  const std::size_t top = lattice_.size() - 1;
  if (struck_row == struck_col) {
    const std::size_t idx = top - lattice_.stride(struck_row);
    return powers_[d_].at(lattice_, idx) * ScaledValue::from_log(log_factorial_[idx]);
  }
  const std::size_t reduced = top - lattice_.stride(struck_row) - lattice_.stride(struck_col);
  return ScaledValue(static_cast<double>(d_)) * bordered_convolution(struck_col, struck_row) *
         ScaledValue::from_log(log_factorial_[reduced]);
}

Complex AlphaPermanentTable::estimator_coefficient(std::size_t k, std::size_t l) const {
  if (mult_.at(k) == 0 || mult_.at(l) == 0) return Complex(0.0, 0.0);
  const std::size_t top = lattice_.size() - 1;
  const ScaledValue denom = powers_[d_].at(lattice_, top);
  if (k == l) {
    const double weight = static_cast<double>(mult_[k]) - 1.0 + static_cast<double>(d_);
    return weight * ratio(powers_[d_].at(lattice_, top - lattice_.stride(k)), denom);
  }
  return static_cast<double>(d_) * ratio(bordered_convolution(k, l), denom);
}

}  // namespace bayestomo
