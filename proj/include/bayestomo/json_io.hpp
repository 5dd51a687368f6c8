#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "bayestomo/core_types.hpp"
#include "bayestomo/simulator.hpp"
#include "bayestomo/tomography.hpp"

namespace bayestomo::json_io {

using Json = nlohmann::ordered_json;

// All readers throw InputError on schema violations.

// Complex scalars are [re, im]; a bare number is accepted as real on input.
Json to_json(Complex z);
Complex complex_from_json(const Json& j);

Json to_json(const ComplexVector& v);
ComplexVector vector_from_json(const Json& j);

// Array of rows.
Json matrix_rows(const ComplexMatrix& m);
ComplexMatrix matrix_from_rows(const Json& rows);

// {"dim": d, "groups": [[vector, ...], ...]}
Json to_json(const MeasurementModel& model);
MeasurementModel model_from_json(const Json& j);

// {"counts": [n, ...]}; other keys are ignored on input.
Json to_json(const OutcomeRecord& record);
OutcomeRecord record_from_json(const Json& j);

// {"dim": d, "rows": [[complex, ...], ...]}
Json to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const Json& j);

// {"mantissa": [re, im], "log_scale": x, "value": [re, im] | null}
Json to_json(const ScaledValue& v);
ScaledValue scaled_from_json(const Json& j);

// {"base": rows, "row_mult": [...], "col_mult": [...]} or {"base", "mult"}.
Json to_json(const GramSpec& spec);
GramSpec gram_from_json(const Json& j);

// {"dim", "amplitudes": vector} or a density matrix object.
Json to_json(const TrueState& state);
TrueState true_state_from_json(const Json& j);

Json to_json(const BlochVector& b);

Json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const Json& j);
// Two-space indented text with a trailing newline.
std::string dump(const Json& j);

}  // namespace bayestomo::json_io
