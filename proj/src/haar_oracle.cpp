#include "bayestomo/haar_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "bayestomo/parallel.hpp"
#include "bayestomo/permanent.hpp"

namespace bayestomo {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct BlockResult {
  double max_log_weight = kNegInf;
  double weight = 0.0;  // relative to exp(max_log_weight)
  ComplexMatrix weighted;
};

using LogWeightFn = std::function<double(const ComplexVector&)>;
using ObservableFn = std::function<void(const ComplexVector&, ComplexMatrix&)>;

// Self-normalized importance average of an observable over Haar samples in
// `dim`, with batch-means errors over the reduction blocks.
McEstimate weighted_haar_average(std::size_t dim, Eigen::Index rows, Eigen::Index cols,
                                 const McConfig& cfg, const LogWeightFn& log_weight,
                                 const ObservableFn& observable) {
  if (cfg.samples < 1) throw InputError("McConfig: samples must be >= 1");
  const std::size_t batches = std::max<std::size_t>(1, std::min<std::uint64_t>(cfg.batches, cfg.samples));
  std::vector<BlockResult> blocks(batches);

  parallel_for_chunks(batches, [&](std::size_t b) {
    const std::uint64_t count = cfg.samples / batches + (b < cfg.samples % batches ? 1 : 0);
    std::mt19937_64 rng = block_rng(cfg.seed, b);
    BlockResult& r = blocks[b];
    r.weighted = ComplexMatrix::Zero(rows, cols);
    ComplexMatrix obs(rows, cols);
    for (std::uint64_t s = 0; s < count; ++s) {
      const PureState psi = sample_haar_state(dim, rng);
      const double lw = log_weight ? log_weight(psi.amplitudes()) : 0.0;
      if (lw == kNegInf) continue;
      if (lw > r.max_log_weight) {
        if (r.max_log_weight != kNegInf) {
          const double shrink = std::exp(r.max_log_weight - lw);
          r.weight *= shrink;
          r.weighted *= shrink;
        }
        r.max_log_weight = lw;
      }
      const double w = std::exp(lw - r.max_log_weight);
      observable(psi.amplitudes(), obs);
      r.weight += w;
      r.weighted += w * obs;
    }
  });

  double global_max = kNegInf;
  for (const auto& r : blocks) global_max = std::max(global_max, r.max_log_weight);
  if (global_max == kNegInf) throw DegenerateLikelihood("Monte Carlo: every sample has zero weight");

  double total_weight = 0.0;
  ComplexMatrix total = ComplexMatrix::Zero(rows, cols);
  for (const auto& r : blocks) {
    if (r.max_log_weight == kNegInf) continue;
    const double f = std::exp(r.max_log_weight - global_max);
    total_weight += f * r.weight;
    total += f * r.weighted;
  }
  McEstimate est;
  est.mean = total / total_weight;

  Eigen::MatrixXd var_re = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::MatrixXd var_im = Eigen::MatrixXd::Zero(rows, cols);
  std::size_t used = 0;
  for (const auto& r : blocks) {
    if (r.max_log_weight == kNegInf || r.weight == 0.0) continue;
    const ComplexMatrix diff = r.weighted / r.weight - est.mean;
    var_re += diff.real().cwiseAbs2();
    var_im += diff.imag().cwiseAbs2();
    ++used;
  }
  const double denom = used > 1 ? static_cast<double>(used) * static_cast<double>(used - 1) : 1.0;
  est.stderr_real = (var_re / denom).cwiseSqrt();
  est.stderr_imag = (var_im / denom).cwiseSqrt();
  if (used <= 1) {
    est.stderr_real.setConstant(std::numeric_limits<double>::infinity());
    est.stderr_imag.setConstant(std::numeric_limits<double>::infinity());
  }
  return est;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::size_t ipow_size(std::size_t base, unsigned e) {
  std::size_t r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

double McEstimate::sigma_distance(const ComplexMatrix& reference) const {
  if (reference.rows() != mean.rows() || reference.cols() != mean.cols()) {
    throw InputError("McEstimate::sigma_distance: shape mismatch");
  }
  double worst = 0.0;
  auto score = [](double diff, double se) {
    if (se > 0.0) return diff / se;
    return diff > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  for (Eigen::Index i = 0; i < mean.rows(); ++i) {
    for (Eigen::Index j = 0; j < mean.cols(); ++j) {
      worst = std::max(worst, score(std::abs(mean(i, j).real() - reference(i, j).real()), stderr_real(i, j)));
      worst = std::max(worst, score(std::abs(mean(i, j).imag() - reference(i, j).imag()), stderr_imag(i, j)));
    }
  }
  return worst;
}

std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

PureState sample_haar_state(std::size_t dim, std::mt19937_64& rng) {
  if (dim < 1) throw InputError("sample_haar_state: dim must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(static_cast<Eigen::Index>(dim));
  while (true) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      v(i) = Complex(re, im);
    }
    const double n = v.norm();
    if (n > 0.0) return PureState(v / n);
  }
}

McEstimate mc_posterior_pure(const MeasurementModel& model, const OutcomeRecord& record, const McConfig& cfg) {
  record.require_matches(model);
  const auto d = static_cast<Eigen::Index>(model.dim());
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < record.size(); ++k)
    if (record[k] > 0) active.push_back(k);
  auto log_weight = [&](const ComplexVector& psi) {
    double lw = 0.0;
    for (std::size_t k : active) {
      const double p = std::norm(model.outcome(k).dot(psi));
      if (p == 0.0) return kNegInf;
      lw += static_cast<double>(record[k]) * std::log(p);
    }
    return lw;
  };
  auto observable = [](const ComplexVector& psi, ComplexMatrix& out) { out.noalias() = psi * psi.adjoint(); };
  return weighted_haar_average(model.dim(), d, d, cfg, log_weight, observable);
}

McEstimate mc_posterior_mixed(const MeasurementModel& model, const OutcomeRecord& record,
                              unsigned ancilla_dim, const McConfig& cfg) {
  if (ancilla_dim < 1) throw InputError("mc_posterior_mixed: ancilla dimension must be >= 1");
  record.require_matches(model);
  const auto ds = static_cast<Eigen::Index>(model.dim());
  const auto da = static_cast<Eigen::Index>(ancilla_dim);
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < record.size(); ++k)
    if (record[k] > 0) active.push_back(k);
  // Psi is stored system-major: component (i, a) at i * d_A + a.
  auto as_matrix = [ds, da](const ComplexVector& psi) {
    return Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        psi.data(), ds, da);
  };
  auto log_weight = [&](const ComplexVector& psi) {
    const auto m = as_matrix(psi);
    double lw = 0.0;
    for (std::size_t k : active) {
      const double p = (model.outcome(k).adjoint() * m).squaredNorm();
      if (p == 0.0) return kNegInf;
      lw += static_cast<double>(record[k]) * std::log(p);
    }
    return lw;
  };
  auto observable = [&](const ComplexVector& psi, ComplexMatrix& out) {
    const auto m = as_matrix(psi);
    out.noalias() = m * m.adjoint();
  };
  return weighted_haar_average(model.dim() * ancilla_dim, ds, ds, cfg, log_weight, observable);
}

McEstimate mc_haar_moment(std::size_t dim, unsigned order, const McConfig& cfg) {
  if (order < 1) throw InputError("mc_haar_moment: order must be >= 1");
  const auto size = static_cast<Eigen::Index>(ipow_size(dim, order));
  auto observable = [order](const ComplexVector& psi, ComplexMatrix& out) {
    const ComplexMatrix p = psi * psi.adjoint();
    ComplexMatrix acc = p;
    for (unsigned i = 1; i < order; ++i) acc = kron(acc, p);
    out = acc;
  };
  return weighted_haar_average(dim, size, size, cfg, nullptr, observable);
}

ComplexMatrix symmetric_projector(std::size_t dim, unsigned order) {
  const std::size_t size = ipow_size(dim, order);
  ComplexMatrix s = ComplexMatrix::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  std::vector<std::size_t> perm(order);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double perms = 0.0;
  std::vector<std::size_t> digits(order);
  do {
    perms += 1.0;
    for (std::size_t idx = 0; idx < size; ++idx) {
      std::size_t rest = idx;
      for (unsigned p = 0; p < order; ++p) {
        digits[order - 1 - p] = rest % dim;
        rest /= dim;
      }
      std::size_t target = 0;
      for (unsigned p = 0; p < order; ++p) target = target * dim + digits[perm[p]];
      s(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(idx)) += 1.0;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return s / perms;
}

IdentityCheck verify_main_identity(std::span<const ComplexVector> xs, std::span<const ComplexVector> ys,
                                   const McConfig& cfg) {
  if (xs.size() != ys.size() || xs.empty()) throw InputError("verify_main_identity: need N >= 1 pairs");
  if (xs.size() > 4) throw GuardLimitExceeded("verify_main_identity N", 4, xs.size());
  const std::size_t n = xs.size();
  const auto d = xs.front().size();
  for (std::size_t a = 0; a < n; ++a)
    if (xs[a].size() != d || ys[a].size() != d) throw InputError("verify_main_identity: dimension mismatch");

  ComplexMatrix gram(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = xs[a].dot(ys[b]);
  const double dd = static_cast<double>(d);
  const ScaledValue analytic =
      permanent_naive(gram) * ScaledValue::from_log(std::lgamma(dd) - std::lgamma(static_cast<double>(n) + dd));

  auto observable = [&](const ComplexVector& psi, ComplexMatrix& out) {
    Complex prod(1.0, 0.0);
    for (std::size_t a = 0; a < n; ++a) prod *= xs[a].dot(psi) * psi.dot(ys[a]);
    out(0, 0) = prod;
  };
  const McEstimate est = weighted_haar_average(static_cast<std::size_t>(d), 1, 1, cfg, nullptr, observable);
  IdentityCheck r;
  r.analytic = analytic.to_complex();
  r.mc_mean = est.mean(0, 0);
  r.stderr_real = est.stderr_real(0, 0);
  r.stderr_imag = est.stderr_imag(0, 0);
  ComplexMatrix ref(1, 1);
  ref(0, 0) = r.analytic;
  r.sigma_distance = est.sigma_distance(ref);
  return r;
}

}  // namespace bayestomo
