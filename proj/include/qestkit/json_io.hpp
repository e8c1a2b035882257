#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "qestkit/bayes.hpp"
#include "qestkit/models.hpp"
#include "qestkit/operators.hpp"
#include "qestkit/optimize.hpp"
#include "qestkit/reduction.hpp"
#include "qestkit/subalgebra.hpp"

// JSON serialization for every on-disk format.
//
// Complex matrix: {"dim": n, "re": [[...]], "im": [[...]]} row-major; "im"
// optional (zeros), "dim" optional (inferred). Real matrices are emitted as
// plain nested arrays and accepted in either form. Malformed input raises
// ParseError; semantic violations surface through the module validators.
namespace qestkit::io {

using json = nlohmann::json;

json matrix_json(const CMatrix& a);
json real_rows(const RMatrix& a);

CMatrix matrix_from(const json& j);
RMatrix real_from(const json& j);
RVector vector_from(const json& j);

json povm_json(const Povm& povm);
Povm povm_from(const json& j);

json subalgebra_json(const SubalgebraSpec& spec);
SubalgebraSpec subalgebra_from(const json& j);

json prior_json(const DiscretePrior& prior);
DiscretePrior prior_from(const json& j);

// {"hilbert_dim": n, "d": d, "rho": matrix, "drho": [matrix x d]}
StateModel point_model_from(const json& j);

json reduced_json(const ReducedPovm& reduced);
json report_json(const OptimizationReport& report);

// NaN and infinities have no JSON encoding; they serialize as null.
json finite_or_null(double value);

json parse_text(const std::string& text);
json load_file(const std::string& path);
void save_file(const std::string& path, const json& j);

}  // namespace qestkit::io
