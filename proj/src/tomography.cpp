#include "bayestomo/tomography.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>

#include "bayestomo/coloring.hpp"
#include "bayestomo/cubature.hpp"
#include "bayestomo/lattice.hpp"
#include "bayestomo/symmetric.hpp"

namespace bayestomo {
namespace {

// Outcomes that were observed at least once; the others never enter A.
struct ActiveOutcomes {
  std::vector<std::size_t> index;
  std::vector<ComplexVector> vectors;
  std::vector<std::size_t> counts;
  std::size_t total = 0;

  ActiveOutcomes(const MeasurementModel& model, const OutcomeRecord& record) {
    record.require_matches(model);
    for (std::size_t k = 0; k < record.size(); ++k) {
      if (record[k] == 0) continue;
      index.push_back(k);
      vectors.push_back(model.outcome(k));
      counts.push_back(static_cast<std::size_t>(record[k]));
      total += counts.back();
    }
  }

  std::size_t size() const { return index.size(); }

  ComplexMatrix gram() const {
    const auto m = static_cast<Eigen::Index>(size());
    ComplexMatrix g(m, m);
    for (Eigen::Index l = 0; l < m; ++l)
      for (Eigen::Index k = 0; k < m; ++k)
        g(l, k) = vectors[static_cast<std::size_t>(l)].dot(vectors[static_cast<std::size_t>(k)]);
    return g;
  }
};

double pure_multiplicity_cost(const ActiveOutcomes& act) {
  const double a = static_cast<double>(act.size());
  return (a * a + 1.0) * static_cast<double>(MultisetLattice::size_for(act.counts)) * a * a;
}

double pure_symmetric_cost(std::size_t dim, std::size_t total) {
  const double d = static_cast<double>(dim);
  return static_cast<double>(SymmetricTensor::basis_size(dim + 1, total + 1)) * d * d;
}

double mixed_multiplicity_cost(const ActiveOutcomes& act) {
  double lattice_work = 1.0;
  for (std::size_t n : act.counts) lattice_work *= static_cast<double>((n + 1) * (n + 2) / 2);
  const double a = static_cast<double>(act.size());
  return lattice_work * a * a * (1.0 + a * a);
}

PermanentRoute resolve(PermanentRoute requested, double multiplicity_cost, double symmetric_cost) {
  if (requested != PermanentRoute::automatic) return requested;
  return symmetric_cost < multiplicity_cost ? PermanentRoute::symmetric : PermanentRoute::multiplicity;
}

void require_qubit_route(std::size_t dim, const char* what) {
  if (dim != 2) {
    throw InputError(std::string(what) + ": cubature route needs dimension 2, got " + std::to_string(dim));
  }
}

ScaledValue gram_permanent(const ActiveOutcomes& act, std::size_t dim, const EstimatorOptions& opts) {
  const PermanentRoute route =
      resolve(opts.route, pure_multiplicity_cost(act) / (static_cast<double>(act.size() * act.size()) + 1.0),
              pure_symmetric_cost(dim, act.total));
  if (route == PermanentRoute::symmetric) return gram_permanent_symmetric(act.vectors, act.counts);
  return permanent_multiplicity(GramSpec{act.gram(), act.counts, act.counts}, opts.kernel, opts.limits);
}

std::shared_ptr<const BlockPermanentSource> block_source(const ActiveOutcomes& act, std::size_t dim,
                                                         const EstimatorOptions& opts) {
  PermanentRoute route = resolve(opts.route, mixed_multiplicity_cost(act),
                                 SymmetricBlockSource::cost_estimate(dim, act.counts));
  if (opts.route == PermanentRoute::automatic && act.total > opts.limits.symmetric_lattice_total_max) {
    route = PermanentRoute::multiplicity;
  }
  if (route == PermanentRoute::symmetric) {
    return std::make_shared<SymmetricBlockSource>(act.vectors, act.counts, opts.limits);
  }
  return std::make_shared<MultiplicityBlockSource>(act.gram(), opts.kernel, opts.limits);
}

bool mixed_uses_cubature(const ActiveOutcomes& act, std::size_t dim, unsigned da, const EstimatorOptions& opts,
                         const char* what) {
  if (opts.route == PermanentRoute::cubature) {
    require_qubit_route(dim, what);
    return true;
  }
  if (opts.route != PermanentRoute::automatic || dim != 2) return false;
  const double cubature = qubit_cubature_cost(act.total, da) * static_cast<double>(act.size());
  if (cubature > static_cast<double>(opts.limits.cubature_nodes_max)) return false;
  double lattice = mixed_multiplicity_cost(act);
  if (act.total <= opts.limits.symmetric_lattice_total_max)
    lattice = std::min(lattice, SymmetricBlockSource::cost_estimate(dim, act.counts));
  return cubature < lattice;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

DensityMatrix finish(const ComplexMatrix& rho, double floor, const char* what) {
  const DensityCheck c = check_density_matrix(rho, floor);
  if (!c.ok) {
    throw InvariantViolation(std::string(what) + ": trace error " + sci(c.trace_error) +
                             ", Hermitian error " + sci(c.hermitian_error) + ", min eigenvalue " +
                             sci(c.min_eigenvalue) + " (floor " + sci(floor) + ")");
  }
  return DensityMatrix(rho);
}

unsigned require_ancilla(unsigned ancilla_dim) {
  if (ancilla_dim < 1) throw InputError("ancilla dimension must be >= 1");
  return ancilla_dim;
}

}  // namespace

double BlochVector::norm() const { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

ComplexMatrix BlochVector::to_density() const {
  ComplexMatrix rho = ComplexMatrix::Identity(2, 2);
  const auto& s = pauli_matrices();
  for (std::size_t j = 0; j < 3; ++j) rho += v[j] * s[j];
  return 0.5 * rho;
}

const std::array<ComplexMatrix, 3>& pauli_matrices() {
  static const std::array<ComplexMatrix, 3> s = [] {
    std::array<ComplexMatrix, 3> out;
    for (auto& m : out) m = ComplexMatrix::Zero(2, 2);
    out[0](0, 1) = 1.0;
    out[0](1, 0) = 1.0;
    out[1](0, 1) = Complex(0.0, -1.0);
    out[1](1, 0) = Complex(0.0, 1.0);
    out[2](0, 0) = 1.0;
    out[2](1, 1) = -1.0;
    return out;
  }();
  return s;
}

DensityMatrix estimate_pure(const PureEstimateRequest& req, const EstimatorOptions& opts) {
  const ActiveOutcomes act(req.model, req.record);
  const std::size_t d = req.model.dim();
  const auto dd = static_cast<Eigen::Index>(d);
  if (act.total == 0) return DensityMatrix::maximally_mixed(d);
  const double norm = static_cast<double>(act.total + d);

  const PermanentRoute route =
      resolve(opts.route, pure_multiplicity_cost(act), pure_symmetric_cost(d, act.total));
  ComplexMatrix rho;
  if (route == PermanentRoute::cubature) {
    require_qubit_route(d, "estimate_pure");
    rho = qubit_haar_integrals(act.vectors, act.counts, 1, opts.limits).posterior_mean();
  } else if (route == PermanentRoute::symmetric) {
    SymmetricTensor t(d);
    raise_interleaved(t, act.vectors, act.counts);
    const ScaledValue per = t.norm_squared();
    if (per.is_zero()) throw DegenerateLikelihood("estimate_pure: record has zero probability");
    // per and one_body share the scale exp(2 log_scale).
    const double s = per.mantissa().real() * std::exp(per.log_scale() - 2.0 * t.log_scale());
    rho = t.one_body() / (s * norm);
  } else {
    const GramSpec spec{act.gram(), act.counts, act.counts};
    const ScaledValue per = permanent_multiplicity(spec, opts.kernel, opts.limits);
    if (per.is_zero()) throw DegenerateLikelihood("estimate_pure: record has zero probability");
    rho = ComplexMatrix::Identity(dd, dd);
    for (std::size_t k = 0; k < act.size(); ++k) {
      for (std::size_t l = 0; l < act.size(); ++l) {
        GramSpec minor = spec;
        minor.row_mult[l] -= 1;
        minor.col_mult[k] -= 1;
        const Complex coeff = static_cast<double>(act.counts[k] * act.counts[l]) *
                              ratio(permanent_multiplicity(minor, opts.kernel, opts.limits), per);
        rho.noalias() += coeff * act.vectors[k] * act.vectors[l].adjoint();
      }
    }
    rho /= norm;
  }
  return finish(rho, 1.0 / norm, "estimate_pure");
}

DensityMatrix estimate_mixed(const MixedEstimateRequest& req, const EstimatorOptions& opts) {
  const unsigned da = require_ancilla(req.ancilla_dim);
  const ActiveOutcomes act(req.model, req.record);
  const std::size_t d = req.model.dim();
  const auto dd = static_cast<Eigen::Index>(d);
  if (act.total == 0) return DensityMatrix::maximally_mixed(d);
  const double norm = static_cast<double>(act.total) + static_cast<double>(d) * da;
  if (mixed_uses_cubature(act, d, da, opts, "estimate_mixed")) {
    const ComplexMatrix rho = qubit_haar_integrals(act.vectors, act.counts, da, opts.limits).posterior_mean();
    return finish(rho, static_cast<double>(da) / norm, "estimate_mixed");
  }

  const AlphaPermanentTable table(act.counts, da, block_source(act, d, opts), opts.limits);
  if (table.full().is_zero()) throw DegenerateLikelihood("estimate_mixed: record has zero probability");
  ComplexMatrix rho = static_cast<double>(da) * ComplexMatrix::Identity(dd, dd);
  for (std::size_t k = 0; k < act.size(); ++k)
    for (std::size_t l = 0; l < act.size(); ++l)
      rho.noalias() += table.estimator_coefficient(k, l) * act.vectors[k] * act.vectors[l].adjoint();
  rho /= norm;
  return finish(rho, static_cast<double>(da) / norm, "estimate_mixed");
}

ScaledValue total_probability_pure(const MeasurementModel& model, const OutcomeRecord& record,
                                   const EstimatorOptions& opts) {
  const ActiveOutcomes act(model, record);
  if (act.total == 0) return ScaledValue::one();
  const double d = static_cast<double>(model.dim());
  if (opts.route == PermanentRoute::cubature) {
    require_qubit_route(model.dim(), "total_probability_pure");
    return qubit_haar_integrals(act.vectors, act.counts, 1, opts.limits).evidence;
  }
  const double n = static_cast<double>(act.total);
  return gram_permanent(act, model.dim(), opts) *
         ScaledValue::from_log(std::lgamma(d) - std::lgamma(n + d));
}

ScaledValue total_probability_mixed(const MeasurementModel& model, const OutcomeRecord& record,
                                    unsigned ancilla_dim, const EstimatorOptions& opts) {
  const unsigned da = require_ancilla(ancilla_dim);
  const ActiveOutcomes act(model, record);
  if (act.total == 0) return ScaledValue::one();
  if (mixed_uses_cubature(act, model.dim(), da, opts, "total_probability_mixed")) {
    return qubit_haar_integrals(act.vectors, act.counts, da, opts.limits).evidence;
  }
  const double dsa = static_cast<double>(model.dim()) * da;
  const double n = static_cast<double>(act.total);
  const AlphaPermanentTable table(act.counts, da, block_source(act, model.dim(), opts), opts.limits);
  return table.full() * ScaledValue::from_log(std::lgamma(dsa) - std::lgamma(n + dsa));
}

BlochVector bloch_estimate_qubit(const PureEstimateRequest& req, const EstimatorOptions& opts) {
  if (req.model.dim() != 2) {
    throw InputError("bloch_estimate_qubit: model dimension is " + std::to_string(req.model.dim()) +
                     ", not 2");
  }
  const DensityMatrix rho = estimate_pure(req, opts);
  BlochVector b;
  const auto& s = pauli_matrices();
  for (std::size_t j = 0; j < 3; ++j) {
    const Complex v = (s[j] * rho.matrix()).trace();
    b.v[j] = v.real();
    b.max_imaginary = std::max(b.max_imaginary, std::abs(v.imag()));
  }
  return b;
}

DensityMatrix estimate_vonneumann_closedform(const OutcomeRecord& record,
                                             const std::vector<ComplexVector>& basis,
                                             unsigned ancilla_dim) {
  const unsigned da = require_ancilla(ancilla_dim);
  if (basis.empty() || record.size() != basis.size()) {
    throw InputError("estimate_vonneumann_closedform: record/basis size mismatch");
  }
  const auto d = static_cast<Eigen::Index>(basis.size());
  for (const auto& v : basis)
    if (v.size() != d) throw InputError("estimate_vonneumann_closedform: basis is not square");
  double dev = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      dev = std::max(dev, std::abs(basis[static_cast<std::size_t>(i)].dot(basis[static_cast<std::size_t>(j)]) -
                                   Complex(i == j ? 1.0 : 0.0, 0.0)));
  if (dev > kPovmTolerance) {
    throw InputError("estimate_vonneumann_closedform: basis deviates from orthonormal by " +
                     std::to_string(dev));
  }
  const double norm = static_cast<double>(record.total()) + static_cast<double>(d) * da;
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < basis.size(); ++k)
    rho += (static_cast<double>(record[k]) + da) / norm * basis[k] * basis[k].adjoint();
  return DensityMatrix(rho);
}

std::vector<AncillaScanEntry> scan_ancilla_dimension(const MeasurementModel& model,
                                                     const OutcomeRecord& record, unsigned max_ancilla_dim,
                                                     const EstimatorOptions& opts) {
  std::vector<AncillaScanEntry> out;
  for (unsigned da = 1; da <= max_ancilla_dim; ++da) {
    out.push_back({da, total_probability_mixed(model, record, da, opts).log_abs()});
  }
  return out;
}

}  // namespace bayestomo
