#include "qestkit/json_io.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace qestkit::io {

namespace {

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

RMatrix rows_from(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw ParseError(std::string(what) + ": expected a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) {
    throw ParseError(std::string(what) + ": rows must be non-empty arrays");
  }
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  RMatrix a(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError(std::string(what) + ": ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_number()) {
        throw ParseError(std::string(what) + ": entries must be numbers");
      }
      a(r, c) = cell.get<double>();
    }
  }
  return a;
}

Ring ring_from(const json& j) {
  if (!j.is_string()) throw ParseError("block ring must be a string");
  std::string s = j.get<std::string>();
  for (char& c : s) c = static_cast<char>(std::toupper(c));
  if (s == "R" || s == "REAL") return Ring::real;
  if (s == "C" || s == "COMPLEX") return Ring::complex;
  if (s == "H" || s == "QUATERNION") return Ring::quaternion;
  throw ParseError("block ring must be one of R, C, H");
}

const char* ring_name(Ring ring) {
  switch (ring) {
    case Ring::real: return "R";
    case Ring::complex: return "C";
    default: return "H";
  }
}

int positive_int(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    throw ParseError(std::string(what) + " must be a positive integer");
  }
  return j.get<int>();
}

}  // namespace

json matrix_json(const CMatrix& a) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    json re_row = json::array();
    json im_row = json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      re_row.push_back(a(r, c).real());
      im_row.push_back(a(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return json{{"dim", a.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

json real_rows(const RMatrix& a) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from(const json& j) {
  return guarded("matrix", [&]() -> CMatrix {
    if (!j.is_object()) throw ParseError("matrix: expected an object");
    if (!j.contains("re")) throw ParseError("matrix: missing \"re\"");
    const RMatrix re = rows_from(j.at("re"), "matrix \"re\"");
    if (re.rows() != re.cols()) throw ParseError("matrix: must be square");
    RMatrix im = RMatrix::Zero(re.rows(), re.cols());
    if (j.contains("im") && !j.at("im").is_null()) {
      im = rows_from(j.at("im"), "matrix \"im\"");
      if (im.rows() != re.rows() || im.cols() != re.cols()) {
        throw ParseError("matrix: \"im\" shape differs from \"re\"");
      }
    }
    if (j.contains("dim") &&
        positive_int(j.at("dim"), "matrix \"dim\"") != re.rows()) {
      throw ParseError("matrix: \"dim\" disagrees with \"re\"");
    }
    return re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
  });
}

RMatrix real_from(const json& j) {
  if (j.is_array()) return guarded("matrix", [&] { return rows_from(j, "matrix"); });
  const CMatrix a = matrix_from(j);
  if (a.imag().cwiseAbs().maxCoeff() > 0.0) {
    throw ParseError("matrix: expected real entries");
  }
  return a.real();
}

RVector vector_from(const json& j) {
  return guarded("vector", [&]() -> RVector {
    if (!j.is_array() || j.empty()) {
      throw ParseError("vector: expected a non-empty array of numbers");
    }
    RVector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const json& cell = j[static_cast<std::size_t>(i)];
      if (!cell.is_number()) throw ParseError("vector: entries must be numbers");
      v[i] = cell.get<double>();
    }
    return v;
  });
}

json povm_json(const Povm& povm) {
  json elements = json::array();
  for (const CMatrix& m : povm.elements) elements.push_back(matrix_json(m));
  return json{{"dim", povm.dim}, {"elements", std::move(elements)}};
}

Povm povm_from(const json& j) {
  std::vector<CMatrix> elements = guarded("povm", [&]() {
    if (!j.is_object() || !j.contains("elements")) {
      throw ParseError("povm: expected an object with \"elements\"");
    }
    const json& list = j.at("elements");
    if (!list.is_array() || list.empty()) {
      throw ParseError("povm: \"elements\" must be a non-empty array");
    }
    std::vector<CMatrix> out;
    out.reserve(list.size());
    for (const json& e : list) out.push_back(matrix_from(e));
    if (j.contains("dim") &&
        positive_int(j.at("dim"), "povm \"dim\"") != out.front().rows()) {
      throw ParseError("povm: \"dim\" disagrees with elements");
    }
    return out;
  });
  return validate_povm(elements);
}

json subalgebra_json(const SubalgebraSpec& spec) {
  json blocks = json::array();
  for (const BlockSpec& b : spec.blocks()) {
    blocks.push_back(json{{"ring", ring_name(b.ring)}, {"n", b.n}, {"m", b.m}});
  }
  json out{{"ambient_dim", spec.ambient_dim()}, {"blocks", std::move(blocks)}};
  out["basis_change"] =
      spec.identity_basis() ? json(nullptr) : matrix_json(spec.basis_change());
  return out;
}

SubalgebraSpec subalgebra_from(const json& j) {
  return guarded("subalgebra", [&]() -> SubalgebraSpec {
    if (!j.is_object() || !j.contains("blocks")) {
      throw ParseError("subalgebra: expected an object with \"blocks\"");
    }
    const json& list = j.at("blocks");
    if (!list.is_array() || list.empty()) {
      throw ParseError("subalgebra: \"blocks\" must be a non-empty array");
    }
    std::vector<BlockSpec> blocks;
    blocks.reserve(list.size());
    for (const json& b : list) {
      if (!b.is_object()) throw ParseError("subalgebra: blocks must be objects");
      blocks.push_back(BlockSpec{ring_from(b.at("ring")),
                                 positive_int(b.at("n"), "block \"n\""),
                                 positive_int(b.at("m"), "block \"m\"")});
    }
    CMatrix basis;
    if (j.contains("basis_change") && !j.at("basis_change").is_null()) {
      basis = matrix_from(j.at("basis_change"));
    }
    SubalgebraSpec spec(std::move(blocks), std::move(basis));
    if (j.contains("ambient_dim") &&
        positive_int(j.at("ambient_dim"), "\"ambient_dim\"") !=
            spec.ambient_dim()) {
      throw ParseError("subalgebra: \"ambient_dim\" disagrees with blocks");
    }
    return spec;
  });
}

json prior_json(const DiscretePrior& prior) {
  json points = json::array();
  for (const PriorPoint& p : prior.points()) {
    json theta = json::array();
    for (Eigen::Index i = 0; i < p.theta.size(); ++i) theta.push_back(p.theta[i]);
    points.push_back(json{{"theta", std::move(theta)},
                          {"pi", p.weight},
                          {"W", real_rows(p.w)},
                          {"rho", matrix_json(p.rho)}});
  }
  return json{{"d", prior.param_dim()}, {"points", std::move(points)}};
}

DiscretePrior prior_from(const json& j) {
  return guarded("prior", [&]() -> DiscretePrior {
    if (!j.is_object() || !j.contains("d") || !j.contains("points")) {
      throw ParseError("prior: expected an object with \"d\" and \"points\"");
    }
    const int d = positive_int(j.at("d"), "prior \"d\"");
    const json& list = j.at("points");
    if (!list.is_array() || list.empty()) {
      throw ParseError("prior: \"points\" must be a non-empty array");
    }
    std::vector<PriorPoint> points;
    points.reserve(list.size());
    for (const json& p : list) {
      if (!p.is_object() || !p.contains("theta") || !p.contains("pi") ||
          !p.contains("W") || !p.contains("rho")) {
        throw ParseError(
            "prior: points need \"theta\", \"pi\", \"W\", and \"rho\"");
      }
      if (!p.at("pi").is_number()) throw ParseError("prior: \"pi\" must be a number");
      points.push_back(PriorPoint{vector_from(p.at("theta")),
                                  p.at("pi").get<double>(),
                                  real_from(p.at("W")),
                                  matrix_from(p.at("rho"))});
    }
    return DiscretePrior(d, std::move(points));
  });
}

StateModel point_model_from(const json& j) {
  return guarded("model", [&]() -> StateModel {
    if (!j.is_object() || !j.contains("hilbert_dim") || !j.contains("d") ||
        !j.contains("rho") || !j.contains("drho")) {
      throw ParseError(
          "model: expected \"hilbert_dim\", \"d\", \"rho\", and \"drho\"");
    }
    const int dim = positive_int(j.at("hilbert_dim"), "model \"hilbert_dim\"");
    const int d = positive_int(j.at("d"), "model \"d\"");
    const json& list = j.at("drho");
    if (!list.is_array() || static_cast<int>(list.size()) != d) {
      throw ParseError("model: \"drho\" must list exactly d matrices");
    }
    std::vector<CMatrix> drho;
    drho.reserve(list.size());
    for (const json& m : list) drho.push_back(matrix_from(m));
    return point_model(dim, d, matrix_from(j.at("rho")), drho);
  });
}

json finite_or_null(double value) {
  return std::isfinite(value) ? json(value) : json(nullptr);
}

json reduced_json(const ReducedPovm& reduced) {
  const char* mode = reduced.mode == ReductionMode::preserve  ? "preserve"
                     : reduced.mode == ReductionMode::improve ? "improve"
                                                              : "bayes";
  json certificates = json::array();
  for (const ReductionCertificate& cert : reduced.certificates) {
    json alphas = json::array();
    for (double a : cert.alphas) alphas.push_back(a);
    json also = json::array();
    for (int x : cert.also_removed) also.push_back(x);
    certificates.push_back(json{{"round", cert.round},
                                {"alphas", std::move(alphas)},
                                {"t", cert.t},
                                {"removed_index", cert.removed_index},
                                {"also_removed", std::move(also)},
                                {"r", finite_or_null(cert.r)},
                                {"drift", cert.drift}});
  }
  json out{{"mode", mode},
           {"povm", povm_json(reduced.povm)},
           {"outcomes", reduced.povm.outcomes()},
           {"rounds", reduced.rounds()},
           {"certificates", std::move(certificates)},
           {"sufficiency_residual", reduced.sufficiency_residual}};
  out["fisher_before"] = reduced.fisher_before.size() > 0
                             ? real_rows(reduced.fisher_before)
                             : json(nullptr);
  out["fisher_after"] = reduced.fisher_after.size() > 0
                            ? real_rows(reduced.fisher_after)
                            : json(nullptr);
  out["cost_before"] = finite_or_null(reduced.cost_before);
  out["cost_after"] = finite_or_null(reduced.cost_after);
  return out;
}

json report_json(const OptimizationReport& report) {
  json costs = json::array();
  for (double c : report.per_restart_costs) costs.push_back(finite_or_null(c));
  json near = json::array();
  for (const RMatrix& f : report.near_optimal_fishers) near.push_back(real_rows(f));
  json out{{"mode", report.mode == OptimizeMode::local ? "local" : "bayes"},
           {"best_cost", report.best_cost},
           {"best_povm", povm_json(report.best_povm)},
           {"per_restart_costs", std::move(costs)},
           {"fisher_spread", finite_or_null(report.fisher_spread)},
           {"near_optimal_fishers", std::move(near)}};
  out["best_fisher"] = report.best_fisher.size() > 0
                           ? real_rows(report.best_fisher)
                           : json(nullptr);
  if (report.mode == OptimizeMode::bayes) {
    out["estimator_step_violation"] = report.estimator_step_violation;
  }
  return out;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace qestkit::io
