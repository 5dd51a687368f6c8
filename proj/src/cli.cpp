#include "bayestomo/cli.hpp"

#include <chrono>
#include <fstream>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "bayestomo/haar_oracle.hpp"
#include "bayestomo/parallel.hpp"
#include "bayestomo/permanent.hpp"
#include "bayestomo/simulator.hpp"
#include "bayestomo/tomography.hpp"

namespace bayestomo::cli {
namespace {

using json_io::Json;
using Clock = std::chrono::steady_clock;

struct Common {
  unsigned threads = 0;
  bool no_timing = false;
  std::string out_path;
};

void emit(const Json& doc, const Common& common, std::ostream& out) {
  if (common.out_path.empty()) {
    out << json_io::dump(doc);
  } else {
    json_io::write_file(common.out_path, doc);
  }
}

void finish(Json& doc, RunManifest manifest, Clock::time_point start, const Common& common) {
  if (!common.no_timing) manifest.duration_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  doc["manifest"] = manifest.to_json();
}

PermanentRoute parse_route(const std::string& s) {
  if (s == "auto") return PermanentRoute::automatic;
  if (s == "multiplicity") return PermanentRoute::multiplicity;
  if (s == "cubature") return PermanentRoute::cubature;
  return PermanentRoute::symmetric;
}

MultiplicityKernel parse_kernel(const std::string& s) {
  return s == "ryser" ? MultiplicityKernel::ryser : MultiplicityKernel::glynn;
}

ComplexMatrix random_complex_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

ComplexVector random_complex_vector(std::mt19937_64& rng, Eigen::Index n) {
  return random_complex_matrix(rng, n, 1).col(0);
}

// Gram matrix of `m` random vectors in dimension `d`.
ComplexMatrix random_gram(std::mt19937_64& rng, Eigen::Index m, Eigen::Index d) {
  const ComplexMatrix v = random_complex_matrix(rng, d, m);
  return v.adjoint() * v;
}

MeasurementModel trine_model() {
  std::vector<ComplexVector> vs;
  for (int k = 0; k < 3; ++k) {
    const double t = 2.0 * M_PI * k / 3.0;
    ComplexVector v(2);
    v << std::sqrt(2.0 / 3.0) * std::cos(t), std::sqrt(2.0 / 3.0) * std::sin(t);
    vs.push_back(v);
  }
  return MeasurementModel::single_group(2, std::move(vs));
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string model_path;
  std::string record_path;
  std::optional<unsigned> mixed;
  bool scan = false;
  bool bloch = false;
  std::string route = "auto";
  std::string kernel = "glynn";
};

int cmd_estimate(const EstimateArgs& a, const Common& common, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const MeasurementModel model = json_io::model_from_json(json_io::read_file(a.model_path));
  const OutcomeRecord record = json_io::record_from_json(json_io::read_file(a.record_path));
  EstimatorOptions opts;
  opts.route = parse_route(a.route);
  opts.kernel = parse_kernel(a.kernel);

  RunManifest manifest;
  manifest.command = "estimate";
  manifest.inputs = {a.model_path, a.record_path};
  manifest.overrides["route"] = a.route;
  manifest.overrides["kernel"] = a.kernel;

  const unsigned da = a.mixed.value_or(1);
  if (a.mixed) {
    if (da < 1) throw InputError("--mixed: ancilla dimension must be >= 1");
    manifest.overrides["mixed"] = std::to_string(da);
    if (da > model.dim()) {
      err << "warning: ancilla dimension " << da << " exceeds system dimension " << model.dim() << "\n";
    }
  }
  if (a.bloch && model.dim() != 2) throw InputError("--bloch requires a qubit model (dim 2)");

  const DensityMatrix rho = a.mixed ? estimate_mixed({model, record, da}, opts) : estimate_pure({model, record}, opts);
  Json doc = json_io::to_json(rho);
  doc["ancilla_dim"] = da;
  if (a.bloch) {
    manifest.overrides["bloch"] = "true";
    BlochVector b;
    const auto& sigma = pauli_matrices();
    for (int j = 0; j < 3; ++j) {
      const Complex v = (sigma[static_cast<std::size_t>(j)] * rho.matrix()).trace();
      b.v[static_cast<std::size_t>(j)] = v.real();
      b.max_imaginary = std::max(b.max_imaginary, std::abs(v.imag()));
    }
    if (!a.mixed) b = bloch_estimate_qubit({model, record}, opts);
    doc["bloch"] = json_io::to_json(b);
  }
  if (a.scan) {
    manifest.overrides["scan_da"] = "true";
    Json scan = Json::array();
    for (const auto& e : scan_ancilla_dimension(model, record, static_cast<unsigned>(model.dim()), opts)) {
      scan.push_back(Json{{"ancilla_dim", e.ancilla_dim}, {"log_marginal_likelihood", e.log_marginal_likelihood}});
    }
    doc["scan"] = std::move(scan);
  }
  finish(doc, manifest, start, common);
  emit(doc, common, out);
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string model_path;
  std::string state_path;
  std::vector<std::uint64_t> shots;
  std::uint64_t seed = 1;
};

int cmd_simulate(const SimulateArgs& a, const Common& common, std::ostream& out) {
  const auto start = Clock::now();
  const MeasurementModel model = json_io::model_from_json(json_io::read_file(a.model_path));
  const TrueState state = json_io::true_state_from_json(json_io::read_file(a.state_path));
  std::vector<std::uint64_t> shots = a.shots;
  if (shots.size() == 1 && model.group_count() > 1) shots.assign(model.group_count(), a.shots.front());
  if (shots.size() != model.group_count()) {
    throw InputError("--shots: give one value, or one per group (" + std::to_string(model.group_count()) + ")");
  }
  const OutcomeRecord record = sample_record(state, model, shots, a.seed);
  Json doc = json_io::to_json(record);
  doc["seed"] = a.seed;
  doc["shots"] = shots;
  RunManifest manifest;
  manifest.command = "simulate";
  manifest.inputs = {a.model_path, a.state_path};
  manifest.seed = a.seed;
  finish(doc, manifest, start, common);
  emit(doc, common, out);
  return kExitOk;
}

// ---------------------------------------------------------------- perm

struct PermArgs {
  std::string matrix_path;
  std::string gram_path;
  std::string alg;
  double alpha = 1.0;
  std::string kernel = "glynn";
};

ComplexMatrix matrix_file(const std::string& path) {
  const Json j = json_io::read_file(path);
  if (j.is_object()) {
    if (!j.contains("rows")) throw InputError(path + ": expected \"rows\"");
    return json_io::matrix_from_rows(j["rows"]);
  }
  return json_io::matrix_from_rows(j);
}

int cmd_perm(const PermArgs& a, const Common& common, std::ostream& out) {
  const auto start = Clock::now();
  GramSpec spec;
  const bool from_gram = !a.gram_path.empty();
  if (from_gram) {
    spec = json_io::gram_from_json(json_io::read_file(a.gram_path));
  } else {
    spec.base = matrix_file(a.matrix_path);
    if (spec.base.rows() != spec.base.cols()) throw InputError("perm: matrix must be square");
    spec.row_mult.assign(static_cast<std::size_t>(spec.base.rows()), 1);
    spec.col_mult = spec.row_mult;
  }
  if (!spec.is_square()) throw InputError("perm: expanded matrix must be square");
  const AlphaParam alpha(a.alpha);
  const bool plain = a.alpha == 1.0;
  std::string alg = a.alg;
  if (alg.empty()) alg = from_gram ? (plain ? "mult" : "coloring") : (plain ? "ryser" : "cyclecover");

  const MultiplicityKernel kernel = parse_kernel(a.kernel);
  ScaledValue value;
  if (alg == "naive") {
    value = alpha_permanent_naive(expand(spec), alpha);
  } else if (alg == "cyclecover") {
    value = alpha_permanent_cyclecover(expand(spec), alpha);
  } else if (alg == "ryser") {
    if (!plain) throw InputError("perm: --alg ryser computes the ordinary permanent only (alpha = 1)");
    value = permanent_ryser(expand(spec));
  } else if (alg == "mult") {
    if (!plain) throw InputError("perm: --alg mult computes the ordinary permanent only (alpha = 1)");
    value = permanent_multiplicity(spec, kernel);
  } else {
    value = alpha_permanent_coloring(spec, alpha.as_positive_integer());
  }

  Json doc = json_io::to_json(value);
  doc["algorithm"] = alg;
  doc["alpha"] = a.alpha;
  doc["n"] = spec.expanded_rows();
  RunManifest manifest;
  manifest.command = "perm";
  manifest.inputs = {from_gram ? a.gram_path : a.matrix_path};
  manifest.overrides["alg"] = alg;
  if (alg == "mult") manifest.overrides["kernel"] = a.kernel;
  finish(doc, manifest, start, common);
  emit(doc, common, out);
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite;
  std::uint64_t seed = 1;
  std::uint64_t samples = 100'000;
};

Json residual_check(const std::string& name, double residual, double tolerance) {
  return Json{{"name", name}, {"pass", residual <= tolerance}, {"residual", residual}, {"tolerance", tolerance}};
}

Json mc_entries(const McEstimate& est, const ComplexMatrix& analytic) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < analytic.rows(); ++i) {
    for (Eigen::Index j = 0; j < analytic.cols(); ++j) {
      McEstimate one;
      one.mean = est.mean.block(i, j, 1, 1);
      one.stderr_real = est.stderr_real.block(i, j, 1, 1);
      one.stderr_imag = est.stderr_imag.block(i, j, 1, 1);
      entries.push_back(Json{{"i", i},
                             {"j", j},
                             {"analytic", json_io::to_json(analytic(i, j))},
                             {"mc_mean", json_io::to_json(est.mean(i, j))},
                             {"mc_stderr", Json::array({est.stderr_real(i, j), est.stderr_imag(i, j)})},
                             {"sigma_distance", one.sigma_distance(analytic.block(i, j, 1, 1))}});
    }
  }
  return entries;
}

Json sigma_check(const std::string& name, const McEstimate& est, const ComplexMatrix& analytic) {
  const double sd = est.sigma_distance(analytic);
  return Json{{"name", name}, {"pass", sd < 3.0}, {"sigma_distance", sd}, {"tolerance", 3.0},
              {"entries", mc_entries(est, analytic)}};
}

GramSpec random_spec(std::mt19937_64& rng, std::size_t max_classes, std::size_t max_total) {
  std::uniform_int_distribution<std::size_t> classes_dist(1, max_classes);
  const std::size_t m = classes_dist(rng);
  std::uniform_int_distribution<std::size_t> dim_dist(1, 3);
  const auto d = static_cast<Eigen::Index>(dim_dist(rng));
  std::vector<std::size_t> mult(m, 1);
  std::uniform_int_distribution<std::size_t> total_dist(m, std::max(m, max_total));
  const std::size_t total = total_dist(rng);
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  for (std::size_t i = m; i < total; ++i) ++mult[pick(rng)];
  return GramSpec{random_gram(rng, static_cast<Eigen::Index>(m), d), mult, mult};
}

Json identities_suite(std::uint64_t seed) {
  Json checks = Json::array();
  std::mt19937_64 rng(seed);

  {
    double mismatches = 0.0;
    for (std::size_t n = 1; n <= 6; ++n) {
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      do {
        const std::size_t cyc = cycle_count(perm);
        for (unsigned d = 1; d <= 3; ++d) {
          std::uint64_t expected = 1;
          for (std::size_t c = 0; c < cyc; ++c) expected *= d;
          if (ancilla_assignment_sum(perm, d) != expected) mismatches += 1.0;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    checks.push_back(residual_check("ancilla_assignment_sum == d^cyc, N <= 6, d <= 3", mismatches, 0.0));
  }
  {
    double worst = 0.0;
    for (std::size_t d = 1; d <= 3; ++d) {
      for (unsigned n = 1; n <= 3; ++n) {
        const ComplexMatrix s = symmetric_projector(d, n);
        const double expected = std::round(std::exp(std::lgamma(double(n + d)) - std::lgamma(double(n + 1)) -
                                                    std::lgamma(double(d))));
        worst = std::max(worst, std::abs(s.trace() - Complex(expected, 0.0)));
        worst = std::max(worst, (s * s - s).cwiseAbs().maxCoeff());
      }
    }
    checks.push_back(residual_check("symmetric projector trace and idempotence", worst, 1e-12));
  }
  {
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) worst = std::max(worst, laplace_expand_check(random_spec(rng, 3, 8)));
    checks.push_back(residual_check("Laplace expansion of per(A), 50 random Gram specs", worst, 1e-9));
  }
  {
    double worst = 0.0;
    for (int t = 0; t < 30; ++t) {
      const GramSpec spec = random_spec(rng, 3, 5);
      const auto n = static_cast<Eigen::Index>(spec.expanded_rows());
      const ComplexVector row = random_complex_vector(rng, n);
      const ComplexVector col = random_complex_vector(rng, n);
      const Complex corner = random_complex_vector(rng, 1)(0);
      const ComplexMatrix a = expand(spec);
      ComplexMatrix b(n + 1, n + 1);
      b.topLeftCorner(n, n) = a;
      b.block(0, n, n, 1) = col;
      b.block(n, 0, 1, n) = row.transpose();
      b(n, n) = corner;
      for (unsigned d = 1; d <= 3; ++d) {
        const ScaledValue fast = alpha_laplace_border_expand(
            spec, std::span<const Complex>(row.data(), static_cast<std::size_t>(n)),
            std::span<const Complex>(col.data(), static_cast<std::size_t>(n)), corner, d);
        worst = std::max(worst, relative_difference(fast, alpha_permanent_naive(b, AlphaParam(d))));
      }
    }
    checks.push_back(residual_check("bordered alpha-permanent expansion vs naive", worst, 1e-9));
  }
  {
    double worst = 0.0;
    for (Eigen::Index n = 1; n <= 8; ++n) {
      const ComplexMatrix a = random_complex_matrix(rng, n, n);
      const ScaledValue det_signed((n % 2 == 0 ? 1.0 : -1.0) * a.determinant());
      worst = std::max(worst, relative_difference(alpha_permanent_cyclecover(a, AlphaParam(-1.0)), det_signed));
      worst = std::max(worst, relative_difference(alpha_permanent_cyclecover(a, AlphaParam(1.0)), permanent_ryser(a)));
    }
    checks.push_back(residual_check("per_-1 = (-1)^N det and per_1 = per, N <= 8", worst, 1e-9));
  }
  return checks;
}

Json mc_suite(std::uint64_t seed, std::uint64_t samples) {
  Json checks = Json::array();
  McConfig cfg;
  cfg.seed = seed;
  cfg.samples = samples;
  std::mt19937_64 rng(seed);

  {
    std::vector<ComplexVector> xs, ys;
    for (int a = 0; a < 2; ++a) {
      xs.push_back(random_complex_vector(rng, 2));
      ys.push_back(random_complex_vector(rng, 2));
    }
    const IdentityCheck r = verify_main_identity(xs, ys, cfg);
    checks.push_back(Json{{"name", "Haar integral identity, d = 2, N = 2, random vectors"},
                          {"pass", r.sigma_distance < 3.0},
                          {"analytic", json_io::to_json(r.analytic)},
                          {"mc_mean", json_io::to_json(r.mc_mean)},
                          {"mc_stderr", Json::array({r.stderr_real, r.stderr_imag})},
                          {"sigma_distance", r.sigma_distance},
                          {"tolerance", 3.0}});
  }
  {
    McConfig c = cfg;
    c.seed = seed + 1;
    const ComplexMatrix s2 = symmetric_projector(2, 2) / 3.0;
    checks.push_back(sigma_check("second Haar moment, d = 2", mc_haar_moment(2, 2, c), s2));
  }
  {
    McConfig c = cfg;
    c.seed = seed + 2;
    const MeasurementModel trine = trine_model();
    const OutcomeRecord rec({2, 1, 0});
    checks.push_back(sigma_check("pure posterior, trine, counts (2,1,0)", mc_posterior_pure(trine, rec, c),
                                 estimate_pure({trine, rec}).matrix()));
  }
  {
    McConfig c = cfg;
    c.seed = seed + 3;
    const MeasurementModel trine = trine_model();
    const OutcomeRecord rec({1, 1, 0});
    checks.push_back(sigma_check("mixed posterior, trine, counts (1,1,0), d_A = 2",
                                 mc_posterior_mixed(trine, rec, 2, c), estimate_mixed({trine, rec, 2}).matrix()));
  }
  return checks;
}

int cmd_verify(const VerifyArgs& a, const Common& common, std::ostream& out) {
  const auto start = Clock::now();
  Json checks = a.suite == "identities" ? identities_suite(a.seed) : mc_suite(a.seed, a.samples);
  bool all = true;
  for (const auto& c : checks) all = all && c["pass"].get<bool>();
  Json doc{{"suite", a.suite}, {"checks", std::move(checks)}, {"all_pass", all}};
  RunManifest manifest;
  manifest.command = "verify";
  manifest.seed = a.seed;
  manifest.overrides["suite"] = a.suite;
  if (a.suite == "mc") manifest.overrides["samples"] = std::to_string(a.samples);
  finish(doc, manifest, start, common);
  emit(doc, common, out);
  return all ? kExitOk : kExitInvariant;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::vector<std::size_t> sizes{16, 20, 24};
  std::vector<std::string> profiles{"2x40", "4x32", "2x24", "4x24"};
  std::optional<unsigned> alpha;
  std::size_t compare_max = 24;
  std::string format = "json";
  std::uint64_t seed = 1;
};

std::pair<std::size_t, std::size_t> parse_profile(const std::string& p) {
  const auto x = p.find('x');
  if (x == std::string::npos) throw InputError("bench: profile must look like MxN, got " + p);
  try {
    return {std::stoul(p.substr(0, x)), std::stoul(p.substr(x + 1))};
  } catch (const std::exception&) {
    throw InputError("bench: profile must look like MxN, got " + p);
  }
}

template <class F>
double time_it(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int cmd_bench(const BenchArgs& a, const Common& common, std::ostream& out) {
  const auto start = Clock::now();
  std::mt19937_64 rng(a.seed);
  Json rows = Json::array();
  auto add = [&](const std::string& alg, std::size_t m, std::size_t n, double seconds, const std::string& status) {
    rows.push_back(Json{{"algorithm", alg}, {"M", m}, {"N", n}, {"seconds", seconds}, {"status", status}});
  };

  for (std::size_t n : a.sizes) {
    const ComplexMatrix g = random_gram(rng, static_cast<Eigen::Index>(n), 3);
    try {
      add("ryser", n, n, time_it([&] { (void)permanent_ryser(g); }), "ok");
    } catch (const GuardLimitExceeded& e) {
      add("ryser", n, n, 0.0, std::string("refused: ") + e.what());
    }
  }
  {
    const ComplexMatrix g = random_gram(rng, 11, 3);
    try {
      add("naive", 11, 11, time_it([&] { (void)permanent_naive(g); }), "ok");
    } catch (const GuardLimitExceeded& e) {
      add("naive", 11, 11, 0.0, std::string("refused: ") + e.what());
    }
  }

  bool assertion = true;
  Json comparisons = Json::array();
  for (const auto& p : a.profiles) {
    const auto [m, n] = parse_profile(p);
    if (m < 1 || n < m) throw InputError("bench: profile needs 1 <= M <= N");
    std::vector<std::size_t> mult(m, n / m);
    for (std::size_t i = 0; i < n % m; ++i) ++mult[i];
    const GramSpec spec{random_gram(rng, static_cast<Eigen::Index>(m), 2), mult, mult};
    const double t_mult = time_it([&] { (void)permanent_multiplicity(spec); });
    add("mult", m, n, t_mult, "ok");
    if (a.alpha) {
      const unsigned d = *a.alpha;
      try {
        add("coloring(alpha=" + std::to_string(d) + ")", m, n,
            time_it([&] { (void)alpha_permanent_coloring(spec, d); }), "ok");
      } catch (const GuardLimitExceeded& e) {
        add("coloring(alpha=" + std::to_string(d) + ")", m, n, 0.0, std::string("refused: ") + e.what());
      }
    }
    if (n <= a.compare_max) {
      const ComplexMatrix full = expand(spec);
      const double t_ryser = time_it([&] { (void)permanent_ryser(full); });
      add("ryser(expanded)", m, n, t_ryser, "ok");
      const bool faster = t_mult < t_ryser;
      if (m <= 4 && n >= 24) assertion = assertion && faster;
      comparisons.push_back(Json{{"M", m}, {"N", n}, {"mult_seconds", t_mult}, {"ryser_seconds", t_ryser},
                                 {"speedup", t_mult > 0.0 ? t_ryser / t_mult : 0.0}, {"mult_faster", faster}});
    }
  }

  RunManifest manifest;
  manifest.command = "bench";
  manifest.seed = a.seed;
  if (a.alpha) manifest.overrides["alpha"] = std::to_string(*a.alpha);
  if (a.format == "csv") {
    std::ostringstream csv;
    csv << "algorithm,M,N,seconds,status\n";
    for (const auto& r : rows) {
      csv << r["algorithm"].get<std::string>() << ',' << r["M"].get<std::size_t>() << ','
          << r["N"].get<std::size_t>() << ',' << r["seconds"].get<double>() << ','
          << r["status"].get<std::string>() << '\n';
    }
    if (common.out_path.empty()) {
      out << csv.str();
    } else {
      std::ofstream f(common.out_path);
      if (!f) throw InputError("cannot write " + common.out_path);
      f << csv.str();
    }
  } else {
    Json doc{{"rows", std::move(rows)}, {"comparisons", std::move(comparisons)}, {"mult_beats_ryser", assertion}};
    finish(doc, manifest, start, common);
    emit(doc, common, out);
  }
  return assertion ? kExitOk : kExitInvariant;
}

}  // namespace

json_io::Json RunManifest::to_json() const {
  Json j{{"command", command}, {"inputs", inputs}};
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["overrides"] = overrides;
  j["threads"] = thread_count();
  j["version"] = version;
  if (duration_seconds) j["duration_seconds"] = *duration_seconds;
  return j;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian quantum state estimation under the Haar prior"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--threads", common.threads, "Worker threads (default: BAYESTOMO_THREADS or 1)");
  app.add_flag("--no-timing", common.no_timing, "Leave the duration out of the manifest");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Posterior mean density matrix");
  estimate->add_option("--model", est.model_path, "MeasurementModel JSON")->required()->check(CLI::ExistingFile);
  estimate->add_option("--record", est.record_path, "OutcomeRecord JSON")->required()->check(CLI::ExistingFile);
  estimate->add_option("--mixed", est.mixed, "Ancilla dimension d_A for the mixed-state estimate");
  estimate->add_flag("--scan-da", est.scan, "Report log marginal likelihood for d_A = 1..d_S");
  estimate->add_flag("--bloch", est.bloch, "Add the Bloch vector (qubits only)");
  estimate->add_option("--route", est.route, "Permanent route")->check(CLI::IsMember({"auto", "multiplicity", "symmetric", "cubature"}));
  estimate->add_option("--kernel", est.kernel, "Multiplicity kernel")->check(CLI::IsMember({"glynn", "ryser"}));
  estimate->add_option("--out", common.out_path, "Output file (default stdout)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Sample an outcome record from a true state");
  simulate->add_option("--model", sim.model_path, "MeasurementModel JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--state", sim.state_path, "True state JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--shots", sim.shots, "Shots per group (one value or one per group)")->required();
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--out", common.out_path, "Output file (default stdout)");

  PermArgs perm;
  auto* permc = app.add_subcommand("perm", "Permanent or alpha-permanent of a matrix");
  auto* mat_opt = permc->add_option("--matrix", perm.matrix_path, "Matrix JSON (rows)")->check(CLI::ExistingFile);
  auto* gram_opt = permc->add_option("--gram", perm.gram_path, "GramSpec JSON")->check(CLI::ExistingFile);
  mat_opt->excludes(gram_opt);
  permc->add_option("--alg", perm.alg, "Algorithm")
      ->check(CLI::IsMember({"naive", "ryser", "mult", "cyclecover", "coloring"}));
  permc->add_option("--alpha", perm.alpha, "Cycle weight alpha (default 1)");
  permc->add_option("--kernel", perm.kernel, "Multiplicity kernel")->check(CLI::IsMember({"glynn", "ryser"}));
  permc->add_option("--out", common.out_path, "Output file (default stdout)");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Run a consistency suite");
  verify->add_option("--suite", ver.suite, "identities | mc")->required()->check(CLI::IsMember({"identities", "mc"}));
  verify->add_option("--seed", ver.seed, "RNG seed");
  verify->add_option("--samples", ver.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  verify->add_option("--out", common.out_path, "Output file (default stdout)");

  BenchArgs bench;
  auto* benchc = app.add_subcommand("bench", "Timing table for the permanent kernels");
  benchc->add_option("--sizes", bench.sizes, "Ryser sizes N");
  benchc->add_option("--profiles", bench.profiles, "Multiplicity profiles MxN (balanced counts)");
  benchc->add_option("--alpha", bench.alpha, "Also time the alpha-permanent for each profile");
  benchc->add_option("--compare-max", bench.compare_max, "Largest N for which expanded Ryser is also timed");
  benchc->add_option("--format", bench.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  benchc->add_option("--seed", bench.seed, "RNG seed");
  benchc->add_option("--out", common.out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (common.threads > 0) set_thread_count(common.threads);
    if (*estimate) return cmd_estimate(est, common, out, err);
    if (*simulate) return cmd_simulate(sim, common, out);
    if (*permc) {
      if (perm.matrix_path.empty() && perm.gram_path.empty()) throw InputError("perm: give --matrix or --gram");
      return cmd_perm(perm, common, out);
    }
    if (*verify) return cmd_verify(ver, common, out);
    if (*benchc) return cmd_bench(bench, common, out);
  } catch (const GuardLimitExceeded& e) {
    err << "error: guard limit exceeded (" << e.limit_name() << "): " << e.what() << "\n";
    return kExitGuard;
  } catch (const InvariantViolation& e) {
    err << "error: result invariant violated: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DegenerateLikelihood& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitInput;
}

}  // namespace bayestomo::cli
