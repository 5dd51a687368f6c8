#include "bayestomo/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace bayestomo::json_io {
namespace {

const Json& require_key(const Json& j, const char* key, const char* what) {
  if (!j.is_object()) throw InputError(std::string(what) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string(what) + ": missing key \"" + key + "\"");
  return *it;
}

std::size_t size_from_json(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw InputError(std::string(what) + ": expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

std::vector<std::size_t> sizes_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array");
  std::vector<std::size_t> out;
  for (const auto& e : j) out.push_back(size_from_json(e, what));
  return out;
}

double real_from_json(const Json& j) {
  if (!j.is_number()) throw InputError("expected a number");
  return j.get<double>();
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InputError("complex scalar must be [re, im]");
  }
  const Complex z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InputError("complex scalar is not finite");
  return z;
}

Json to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

ComplexVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("vector must be an array of complex scalars");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

Json matrix_rows(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(ComplexVector(m.row(i).transpose())));
  return rows;
}

ComplexMatrix matrix_from_rows(const Json& rows) {
  if (!rows.is_array()) throw InputError("matrix must be an array of rows");
  const auto r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = r == 0 ? 0 : static_cast<Eigen::Index>(rows[0].is_array() ? rows[0].size() : 0);
  ComplexMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const ComplexVector row = vector_from_json(rows[static_cast<std::size_t>(i)]);
    if (row.size() != c) throw InputError("matrix rows have unequal lengths");
    m.row(i) = row.transpose();
  }
  return m;
}

Json to_json(const MeasurementModel& model) {
  Json groups = Json::array();
  for (const auto& g : model.groups()) {
    Json vs = Json::array();
    for (const auto& v : g) vs.push_back(to_json(v));
    groups.push_back(std::move(vs));
  }
  return Json{{"dim", model.dim()}, {"groups", std::move(groups)}};
}

MeasurementModel model_from_json(const Json& j) {
  const std::size_t dim = size_from_json(require_key(j, "dim", "model"), "model.dim");
  const Json& groups = require_key(j, "groups", "model");
  if (!groups.is_array()) throw InputError("model.groups must be an array");
  std::vector<std::vector<ComplexVector>> out;
  for (const auto& g : groups) {
    if (!g.is_array()) throw InputError("model.groups entries must be arrays of vectors");
    std::vector<ComplexVector> vs;
    for (const auto& v : g) vs.push_back(vector_from_json(v));
    out.push_back(std::move(vs));
  }
  return MeasurementModel(dim, std::move(out));
}

Json to_json(const OutcomeRecord& record) { return Json{{"counts", record.counts()}}; }

OutcomeRecord record_from_json(const Json& j) {
  const Json& counts = require_key(j, "counts", "record");
  if (!counts.is_array()) throw InputError("record.counts must be an array");
  std::vector<std::uint64_t> out;
  for (const auto& c : counts) {
    if (!c.is_number_integer() || c.get<long long>() < 0) {
      throw InputError("record.counts entries must be nonnegative integers");
    }
    out.push_back(c.get<std::uint64_t>());
  }
  return OutcomeRecord(std::move(out));
}

Json to_json(const DensityMatrix& rho) {
  return Json{{"dim", rho.dim()}, {"rows", matrix_rows(rho.matrix())}};
}

DensityMatrix density_from_json(const Json& j) {
  const std::size_t dim = size_from_json(require_key(j, "dim", "density matrix"), "density.dim");
  ComplexMatrix m = matrix_from_rows(require_key(j, "rows", "density matrix"));
  if (static_cast<std::size_t>(m.rows()) != dim || static_cast<std::size_t>(m.cols()) != dim) {
    throw InputError("density matrix rows do not match dim");
  }
  const DensityCheck check = check_density_matrix(m);
  if (!check.ok) throw InputError("density matrix fails trace/Hermiticity/positivity checks");
  return DensityMatrix(std::move(m));
}

Json to_json(const ScaledValue& v) {
  const Complex plain = v.to_complex();
  Json value = std::isfinite(plain.real()) && std::isfinite(plain.imag()) ? to_json(plain) : Json(nullptr);
  return Json{{"mantissa", to_json(v.mantissa())}, {"log_scale", v.log_scale()}, {"value", std::move(value)}};
}

ScaledValue scaled_from_json(const Json& j) {
  return ScaledValue(complex_from_json(require_key(j, "mantissa", "scaled value")),
                     real_from_json(require_key(j, "log_scale", "scaled value")));
}

Json to_json(const GramSpec& spec) {
  return Json{{"base", matrix_rows(spec.base)}, {"row_mult", spec.row_mult}, {"col_mult", spec.col_mult}};
}

GramSpec gram_from_json(const Json& j) {
  GramSpec spec;
  spec.base = matrix_from_rows(require_key(j, "base", "gram spec"));
  if (j.contains("mult")) {
    spec.row_mult = sizes_from_json(j["mult"], "gram.mult");
    spec.col_mult = spec.row_mult;
  } else {
    spec.row_mult = sizes_from_json(require_key(j, "row_mult", "gram spec"), "gram.row_mult");
    spec.col_mult = sizes_from_json(require_key(j, "col_mult", "gram spec"), "gram.col_mult");
  }
  spec.validate();
  return spec;
}

Json to_json(const TrueState& state) {
  if (const auto* p = std::get_if<PureState>(&state)) {
    return Json{{"dim", p->dim()}, {"amplitudes", to_json(p->amplitudes())}};
  }
  return to_json(std::get<DensityMatrix>(state));
}

TrueState true_state_from_json(const Json& j) {
  if (j.is_object() && j.contains("amplitudes")) {
    const std::size_t dim = size_from_json(require_key(j, "dim", "state"), "state.dim");
    ComplexVector v = vector_from_json(j["amplitudes"]);
    if (v.norm() == 0.0) throw InputError("state amplitudes are zero");
    if (static_cast<std::size_t>(v.size()) != dim) throw InputError("state amplitudes do not match dim");
    return PureState::normalized(v);
  }
  return density_from_json(j);
}

Json to_json(const BlochVector& b) {
  return Json{{"v", b.v}, {"norm", b.norm()}, {"max_imaginary", b.max_imaginary}};
}

Json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << dump(j);
  if (!out) throw InputError("write failed for " + path.string());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace bayestomo::json_io
