#include "bayestomo/cubature.hpp"

#include <cmath>
#include <limits>

#include "bayestomo/errors.hpp"
#include "bayestomo/parallel.hpp"

namespace bayestomo {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct RowSums {
  double max_log = kNegInf;
  double s[4] = {0.0, 0.0, 0.0, 0.0};  // weight, weight * r_x, r_y, r_z
};

void rescale(RowSums& acc, double new_max) {
  if (acc.max_log != kNegInf) {
    const double f = std::exp(acc.max_log - new_max);
    for (double& v : acc.s) v *= f;
  }
  acc.max_log = new_max;
}

}  // namespace

GaussLegendreRule gauss_legendre(std::size_t n) {
  if (n < 1) throw InputError("gauss_legendre: n must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = nd * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kd = static_cast<double>(k);
      const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : nd * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double qubit_cubature_cost(std::size_t total, unsigned ancilla_dim) {
  const double n = static_cast<double>(total);
  const double radial = ancilla_dim <= 1 ? 1.0 : std::floor((n + 2.0 * ancilla_dim + 1.0) / 2.0);
  return radial * std::floor((n + 3.0) / 2.0) * (n + 2.0);
}

ComplexMatrix QubitHaarIntegrals::posterior_mean() const {
  ComplexMatrix rho(2, 2);
  const double x = mean_bloch[0], y = mean_bloch[1], z = mean_bloch[2];
  rho << Complex(0.5 * (1.0 + z), 0.0), Complex(0.5 * x, -0.5 * y), Complex(0.5 * x, 0.5 * y),
      Complex(0.5 * (1.0 - z), 0.0);
  return rho;
}

QubitHaarIntegrals qubit_haar_integrals(const std::vector<ComplexVector>& vectors,
                                        const std::vector<std::size_t>& counts, unsigned ancilla_dim,
                                        const PermanentLimits& limits) {
  if (vectors.size() != counts.size()) throw InputError("qubit_haar_integrals: size mismatch");
  if (ancilla_dim < 1) throw InputError("qubit_haar_integrals: ancilla dimension must be >= 1");
  // |<phi|psi>|^2 = (|phi|^2 + r . s) / 2 with s_j = <phi|sigma_j|phi>.
  struct Factor {
    double norm2, sx, sy, sz, power;
  };
  std::vector<Factor> factors;
  std::size_t total = 0;
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    const ComplexVector& v = vectors[k];
    if (v.size() != 2) throw InputError("qubit_haar_integrals: vectors must have length 2");
    if (counts[k] == 0) continue;
    const Complex a = v(0), b = v(1);
    const Complex ab = std::conj(a) * b;
    factors.push_back({std::norm(a) + std::norm(b), 2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b),
                       static_cast<double>(counts[k])});
    total += counts[k];
  }

  QubitHaarIntegrals out;
  if (total == 0) {
    out.evidence = ScaledValue::one();
    return out;
  }
  const double cost = qubit_cubature_cost(total, ancilla_dim);
  if (cost > static_cast<double>(limits.cubature_nodes_max)) {
    throw GuardLimitExceeded("cubature_nodes_max", limits.cubature_nodes_max, static_cast<std::size_t>(cost));
  }

  // Bloch vector r = t n. Angular part of degree N + 1: 2 n_u - 1 >= N + 1,
  // n_phi >= N + 2. For d_A >= 2 the prior on the ball has density
  // (1 - t^2)^(d_A - 2) t^2 dt dn, radial degree N + 2 d_A - 1.
  const std::size_t n_u = (total + 3) / 2;
  const std::size_t n_phi = total + 2;
  const GaussLegendreRule rule = gauss_legendre(n_u);
  std::vector<double> cos_phi(n_phi), sin_phi(n_phi);
  for (std::size_t j = 0; j < n_phi; ++j) {
    const double phi = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n_phi);
    cos_phi[j] = std::cos(phi);
    sin_phi[j] = std::sin(phi);
  }
  std::vector<double> radius{1.0}, radial_weight{1.0};
  if (ancilla_dim >= 2) {
    const GaussLegendreRule r = gauss_legendre((total + 2 * ancilla_dim + 1) / 2);
    radius.clear();
    radial_weight.clear();
    double norm = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const double t = 0.5 * (r.nodes[i] + 1.0);
      const double w = 0.5 * r.weights[i] * t * t * std::pow(1.0 - t * t, static_cast<double>(ancilla_dim) - 2.0);
      radius.push_back(t);
      radial_weight.push_back(w);
      norm += w;
    }
    for (double& w : radial_weight) w /= norm;
  }

  std::vector<RowSums> rows(n_u);
  parallel_for_chunks(n_u, [&](std::size_t i) {
    const double u = rule.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    std::vector<double> dots(factors.size());
    RowSums acc;
    for (std::size_t j = 0; j < n_phi; ++j) {
      const double nx = s * cos_phi[j], ny = s * sin_phi[j];
      for (std::size_t k = 0; k < factors.size(); ++k)
        dots[k] = nx * factors[k].sx + ny * factors[k].sy + u * factors[k].sz;
      for (std::size_t q = 0; q < radius.size(); ++q) {
        const double t = radius[q];
        double ell = 0.0;
        for (std::size_t k = 0; k < factors.size(); ++k) {
          const double p = 0.5 * (factors[k].norm2 + t * dots[k]);
          if (p <= 0.0) {
            ell = kNegInf;
            break;
          }
          ell += factors[k].power * std::log(p);
        }
        if (ell == kNegInf) continue;
        if (ell > acc.max_log) rescale(acc, ell);
        const double w = radial_weight[q] * std::exp(ell - acc.max_log);
        acc.s[0] += w;
        acc.s[1] += w * t * nx;
        acc.s[2] += w * t * ny;
        acc.s[3] += w * t * u;
      }
    }
    rows[i] = acc;
  });

  double global_max = kNegInf;
  for (const RowSums& r : rows) global_max = std::max(global_max, r.max_log);
  if (global_max == kNegInf) throw DegenerateLikelihood("qubit likelihood vanishes on every state");
  double sums[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n_u; ++i) {
    if (rows[i].max_log == kNegInf) continue;
    const double f = rule.weights[i] * std::exp(rows[i].max_log - global_max);
    for (int c = 0; c < 4; ++c) sums[c] += f * rows[i].s[c];
  }
  // Uniform measure on directions: du dphi / (4 pi); trapezoid step 2 pi / n_phi.
  const double measure = 1.0 / (2.0 * static_cast<double>(n_phi));
  out.evidence = ScaledValue(Complex(sums[0] * measure, 0.0)) * ScaledValue::from_log(global_max);
  for (int c = 0; c < 3; ++c) out.mean_bloch[static_cast<std::size_t>(c)] = sums[c + 1] / sums[0];
  return out;
}

}  // namespace bayestomo
