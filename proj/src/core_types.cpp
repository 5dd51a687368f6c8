#include "bayestomo/core_types.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace bayestomo {

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw InputError(std::string(what) + ": non-finite entry");
}

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw InputError("PureState: dimension must be >= 1");
  require_finite(amplitudes_, "PureState");
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kStateNormTolerance) {
    throw InputError("PureState: squared norm " + std::to_string(norm2) + " is not 1");
  }
}

PureState PureState::normalized(const ComplexVector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InputError("PureState: cannot normalize zero vector");
  return PureState(v / n);
}

MeasurementModel::MeasurementModel(std::size_t dim, std::vector<std::vector<ComplexVector>> groups)
    : dim_(dim) {
  if (dim == 0) throw InputError("MeasurementModel: dim must be >= 1");
  if (groups.empty()) throw InputError("MeasurementModel: no POVM groups");
  group_offsets_.push_back(0);
  for (auto& group : groups) {
    if (group.empty()) throw InputError("MeasurementModel: empty POVM group");
    for (auto& v : group) {
      if (static_cast<std::size_t>(v.size()) != dim) {
        throw InputError("MeasurementModel: outcome vector of length " + std::to_string(v.size()) +
                         " in dimension " + std::to_string(dim));
      }
      require_finite(v, "MeasurementModel");
      outcomes_.push_back(std::move(v));
    }
    group_offsets_.push_back(outcomes_.size());
  }
  report_ = validate_povm(*this);
}

MeasurementModel MeasurementModel::single_group(std::size_t dim, std::vector<ComplexVector> outcomes) {
  std::vector<std::vector<ComplexVector>> groups;
  groups.push_back(std::move(outcomes));
  return MeasurementModel(dim, std::move(groups));
}

std::vector<std::vector<ComplexVector>> MeasurementModel::groups() const {
  std::vector<std::vector<ComplexVector>> out;
  for (std::size_t g = 0; g < group_count(); ++g) {
    out.emplace_back(outcomes_.begin() + static_cast<std::ptrdiff_t>(group_begin(g)),
                     outcomes_.begin() + static_cast<std::ptrdiff_t>(group_end(g)));
  }
  return out;
}

MeasurementModel MeasurementModel::transformed(const ComplexMatrix& op) const {
  if (static_cast<std::size_t>(op.rows()) != dim_ || static_cast<std::size_t>(op.cols()) != dim_) {
    throw InputError("MeasurementModel::transformed: operator shape mismatch");
  }
  auto gs = groups();
  for (auto& g : gs)
    for (auto& v : g) v = op * v;
  return MeasurementModel(dim_, std::move(gs));
}

MeasurementModel MeasurementModel::rescaled(std::span<const Complex> scale) const {
  if (scale.size() != outcomes_.size()) throw InputError("MeasurementModel::rescaled: size mismatch");
  auto gs = groups();
  std::size_t k = 0;
  for (auto& g : gs)
    for (auto& v : g) v *= scale[k++];
  return MeasurementModel(dim_, std::move(gs));
}

OutcomeRecord::OutcomeRecord(std::vector<std::uint64_t> counts)
    : counts_(std::move(counts)),
      total_(std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0})) {}

void OutcomeRecord::require_matches(const MeasurementModel& model) const {
  if (counts_.size() != model.outcome_count()) {
    throw InputError("OutcomeRecord: " + std::to_string(counts_.size()) + " counts for " +
                     std::to_string(model.outcome_count()) + " outcomes");
  }
}

void GramSpec::validate() const {
  if (base.rows() != base.cols()) throw InputError("GramSpec: base must be square");
  const auto m = static_cast<std::size_t>(base.rows());
  if (row_mult.size() != m || col_mult.size() != m) {
    throw InputError("GramSpec: multiplicity length differs from base size");
  }
  require_finite(base, "GramSpec");
}

std::size_t GramSpec::expanded_rows() const {
  return std::accumulate(row_mult.begin(), row_mult.end(), std::size_t{0});
}

std::size_t GramSpec::expanded_cols() const {
  return std::accumulate(col_mult.begin(), col_mult.end(), std::size_t{0});
}

double GramSpec::hermitian_deviation() const {
  if (base.size() == 0) return 0.0;
  return (base - base.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix expand(const GramSpec& spec) {
  spec.validate();
  std::vector<Eigen::Index> rows;
  std::vector<Eigen::Index> cols;
  for (std::size_t k = 0; k < spec.row_mult.size(); ++k)
    rows.insert(rows.end(), spec.row_mult[k], static_cast<Eigen::Index>(k));
  for (std::size_t k = 0; k < spec.col_mult.size(); ++k)
    cols.insert(cols.end(), spec.col_mult[k], static_cast<Eigen::Index>(k));
  ComplexMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = spec.base(rows[i], cols[j]);
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

DensityCheck check_density_matrix(const ComplexMatrix& rho, double eigenvalue_floor) {
  DensityCheck c;
  if (rho.rows() == 0 || rho.rows() != rho.cols() || !rho.allFinite()) return c;
  c.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  c.hermitian_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  c.min_eigenvalue = hermitian_eigenvalues(rho).minCoeff();
  c.ok = c.trace_error <= kTraceTolerance && c.hermitian_error <= kHermitianTolerance &&
         c.min_eigenvalue >= eigenvalue_floor - kPsdTolerance;
  return c;
}

DensityMatrix::DensityMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
  const DensityCheck c = check_density_matrix(entries_);
  if (!c.ok) {
    throw InvariantViolation("DensityMatrix: trace error " + std::to_string(c.trace_error) +
                             ", Hermitian error " + std::to_string(c.hermitian_error) +
                             ", min eigenvalue " + std::to_string(c.min_eigenvalue));
  }
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(dim));
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(a - b);
  return 0.5 * ev.cwiseAbs().sum();
}

PovmReport validate_povm(const MeasurementModel& model) {
  PovmReport r;
  const auto d = static_cast<Eigen::Index>(model.dim());
  for (std::size_t g = 0; g < model.group_count(); ++g) {
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (std::size_t k = model.group_begin(g); k < model.group_end(g); ++k) {
      const ComplexVector& v = model.outcome(k);
      sum += v * v.adjoint();
    }
    const double dev = (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    r.group_deviation.push_back(dev);
    r.max_deviation = std::max(r.max_deviation, dev);
  }
  r.validated = r.max_deviation <= kPovmTolerance;
  return r;
}

GramSpec gram_from_outcomes(const MeasurementModel& model, const OutcomeRecord& record) {
  record.require_matches(model);
  const auto m = static_cast<Eigen::Index>(model.outcome_count());
  GramSpec spec;
  spec.base.resize(m, m);
  for (Eigen::Index l = 0; l < m; ++l)
    for (Eigen::Index k = 0; k < m; ++k)
      spec.base(l, k) = model.outcome(static_cast<std::size_t>(l))
                            .dot(model.outcome(static_cast<std::size_t>(k)));
  spec.row_mult.assign(record.counts().begin(), record.counts().end());
  spec.col_mult = spec.row_mult;
  return spec;
}

}  // namespace bayestomo
