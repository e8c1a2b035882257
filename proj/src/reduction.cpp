#include "qestkit/reduction.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace qestkit {

namespace {

constexpr double nullspace_rel = 1e-9;
constexpr double alpha_floor = 1e-12;
constexpr double trace_drop = 1e-12;

struct AhBasis {
  std::vector<CMatrix> ops;
  Eigen::LDLT<RMatrix> gram;

  int size() const { return static_cast<int>(ops.size()); }
};

AhBasis make_ah_basis(const SubalgebraSpec& spec) {
  AhBasis basis;
  basis.ops = hermitian_basis(spec);
  const int k = basis.size();
  RMatrix gram(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      gram(i, j) = gram(j, i) = (basis.ops[i] * basis.ops[j]).trace().real();
    }
  }
  basis.gram.compute(gram);
  return basis;
}

RVector ah_coords(const AhBasis& basis, const CMatrix& x) {
  RVector rhs(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    rhs[i] = (basis.ops[i] * x).trace().real();
  }
  return basis.gram.solve(rhs);
}

// Upper triangle of a symmetric d x d matrix, row-major, optionally without
// the (0,0) entry.
RVector upper_triangle(const RMatrix& g, bool drop_first) {
  const int d = static_cast<int>(g.rows());
  RVector out(d * (d + 1) / 2 - (drop_first ? 1 : 0));
  int k = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      if (drop_first && i == 0 && j == 0) continue;
      out[k++] = g(i, j);
    }
  }
  return out;
}

// Unit-norm dependence among the columns, or empty if the smallest singular
// value is not below nullspace_rel times the largest.
RVector nullspace_alpha(const RMatrix& coords) {
  const Eigen::Index s = coords.cols();
  Eigen::JacobiSVD<RMatrix> svd(coords, Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv[0] : 0.0;
  bool dependent = s > coords.rows() || sigma_max == 0.0;
  if (!dependent) {
    dependent = sv[s - 1] <= nullspace_rel * sigma_max;
  }
  if (!dependent) return RVector();
  return svd.matrixV().col(s - 1);
}

Povm wrap(int dim, std::vector<CMatrix> elements) {
  Povm povm;
  povm.dim = dim;
  povm.elements = std::move(elements);
  return povm;
}

// Picks x* = argmax alpha (smallest index), scales the survivors by
// (1 - t alpha_x), drops trace-zero elements, and records the certificate
// (drift is filled by the caller). alpha must already be oriented.
ReductionCertificate apply_round(std::vector<CMatrix>& elements,
                                 const RVector& alpha, double r, int round) {
  if (alpha.cwiseAbs().maxCoeff() < alpha_floor) {
    throw NoDependenceFound("dependence coefficients are numerically zero");
  }
  if (!(alpha.maxCoeff() > 0.0)) {
    throw NoDependenceFound("dependence cannot be oriented toward a positive "
                            "step");
  }
  int xstar = 0;
  for (int x = 1; x < alpha.size(); ++x) {
    if (alpha[x] > alpha[xstar]) xstar = x;
  }
  const double t = 1.0 / alpha[xstar];

  ReductionCertificate cert;
  cert.alphas = alpha;
  cert.t = t;
  cert.removed_index = xstar;
  cert.r = r;
  cert.round = round;

  std::vector<CMatrix> next;
  next.reserve(elements.size() - 1);
  for (int x = 0; x < static_cast<int>(elements.size()); ++x) {
    if (x == xstar) continue;
    const double factor = 1.0 - t * alpha[x];
    CMatrix scaled = factor * elements[x];
    if (scaled.trace().real() < trace_drop) {
      cert.also_removed.push_back(x);
      continue;
    }
    next.push_back(std::move(scaled));
  }
  elements = std::move(next);
  return cert;
}

// Orients (alpha, r) so that r >= 0 and a positive step exists. r within
// rounding of zero allows either sign.
void orient(RVector& alpha, double& r) {
  if (r < 0.0) {
    alpha = -alpha;
    r = -r;
  }
  if (!(alpha.maxCoeff() > 0.0) && r <= alpha_floor) {
    alpha = -alpha;
    r = -r;
  }
}

std::vector<CMatrix> project_all(const SubalgebraSpec& spec,
                                 const std::vector<CMatrix>& elements) {
  std::vector<CMatrix> out;
  out.reserve(elements.size());
  for (const CMatrix& e : elements) out.push_back(project(spec, e));
  return out;
}

std::vector<CMatrix> split_extreme(const SubalgebraSpec& spec,
                                   const std::vector<CMatrix>& elements) {
  std::vector<CMatrix> out;
  for (const CMatrix& e : elements) {
    for (ExtremeElement& piece : extreme_decompose(spec, e)) {
      out.push_back(std::move(piece.op));
    }
  }
  return out;
}

void check_reduction_dims(const Povm& povm, const SubalgebraSpec& spec,
                          int state_dim) {
  if (povm.dim != spec.ambient_dim()) {
    throw DimensionMismatch("POVM dimension " + std::to_string(povm.dim) +
                            " does not match the subalgebra ambient "
                            "dimension " +
                            std::to_string(spec.ambient_dim()));
  }
  if (povm.dim != state_dim) {
    throw DimensionMismatch("POVM dimension does not match the states");
  }
}

}  // namespace

Povm merge_outcomes(const Povm& povm, int i, int j) {
  const int s = povm.outcomes();
  if (i < 0 || i >= s || j < 0 || j >= s || i == j) {
    throw IndexOutOfRange("merge needs two distinct indices in [0, " +
                          std::to_string(s) + ")");
  }
  const int keep = std::min(i, j);
  const int gone = std::max(i, j);
  std::vector<CMatrix> elements = povm.elements;
  elements[keep] += elements[gone];
  elements.erase(elements.begin() + gone);
  return wrap(povm.dim, std::move(elements));
}

ReducedPovm reduce_preserving(const Povm& povm, const SubalgebraSpec& spec,
                              const Tangent& tangent) {
  check_reduction_dims(povm, spec, tangent.dim());
  const int d = tangent.param_dim();
  const int bound = dim_h(spec) + d * (d + 1) / 2;

  ReducedPovm out;
  out.mode = ReductionMode::preserve;
  out.cost_before = std::numeric_limits<double>::quiet_NaN();
  out.cost_after = std::numeric_limits<double>::quiet_NaN();
  out.sufficiency_residual =
      sufficiency_residual(spec, tangent.rho, tangent.drho);
  out.fisher_before = classical_fisher(povm, tangent);

  const AhBasis basis = make_ah_basis(spec);
  std::vector<CMatrix> elements = project_all(spec, povm.elements);

  int round = 0;
  while (static_cast<int>(elements.size()) > bound) {
    ++round;
    const int s = static_cast<int>(elements.size());
    RMatrix coords(basis.size() + d * (d + 1) / 2, s);
    for (int x = 0; x < s; ++x) {
      coords.col(x) << ah_coords(basis, elements[x]),
          upper_triangle(g_contribution(elements[x], tangent), false);
    }
    RVector alpha = nullspace_alpha(coords);
    if (alpha.size() == 0) {
      throw NoDependenceFound("no dependence found at support size " +
                              std::to_string(s) + " above bound " +
                              std::to_string(bound));
    }
    if (!(alpha.maxCoeff() > 0.0)) alpha = -alpha;

    const RMatrix before = classical_fisher(wrap(povm.dim, elements), tangent);
    ReductionCertificate cert = apply_round(elements, alpha, 0.0, round);
    const RMatrix after = classical_fisher(wrap(povm.dim, elements), tangent);
    cert.drift = (after - before).cwiseAbs().maxCoeff();
    out.certificates.push_back(std::move(cert));
  }

  out.povm = validate_povm(elements);
  out.fisher_after = classical_fisher(out.povm, tangent);
  return out;
}

ReducedPovm reduce_improving(const Povm& povm, const SubalgebraSpec& spec,
                             const Tangent& tangent) {
  ReducedPovm out = reduce_preserving(povm, spec, tangent);
  out.mode = ReductionMode::improve;
  const int d = tangent.param_dim();
  const int bound = dim_h(spec) + d * (d + 1) / 2 - 1;

  const AhBasis basis = make_ah_basis(spec);
  std::vector<CMatrix> elements = split_extreme(spec, out.povm.elements);

  int round = out.rounds();
  while (static_cast<int>(elements.size()) > bound) {
    ++round;
    const int s = static_cast<int>(elements.size());
    std::vector<RMatrix> gs;
    gs.reserve(s);
    RMatrix coords(basis.size() + d * (d + 1) / 2 - 1, s);
    for (int x = 0; x < s; ++x) {
      gs.push_back(g_contribution(elements[x], tangent));
      coords.col(x) << ah_coords(basis, elements[x]),
          upper_triangle(gs[x], true);
    }
    RVector alpha = nullspace_alpha(coords);
    if (alpha.size() == 0) {
      throw NoDependenceFound("no dependence found at support size " +
                              std::to_string(s) + " above bound " +
                              std::to_string(bound));
    }
    // The dependence leaves only the (1,1) Fisher coordinate free:
    // sum alpha_x g_x = -r E_11.
    double r = 0.0;
    for (int x = 0; x < s; ++x) r -= alpha[x] * gs[x](0, 0);
    orient(alpha, r);

    const RMatrix before = classical_fisher(wrap(povm.dim, elements), tangent);
    ReductionCertificate cert = apply_round(elements, alpha, r, round);
    const RMatrix after = classical_fisher(wrap(povm.dim, elements), tangent);
    RMatrix shift = RMatrix::Zero(d, d);
    shift(0, 0) = cert.t * cert.r;
    cert.drift = (after - before - shift).cwiseAbs().maxCoeff();
    out.certificates.push_back(std::move(cert));
  }

  out.povm = validate_povm(elements);
  out.fisher_after = classical_fisher(out.povm, tangent);
  return out;
}

ReducedPovm reduce_bayes(const Povm& povm, const SubalgebraSpec& spec,
                         const DiscretePrior& prior) {
  check_reduction_dims(povm, spec, prior.hilbert_dim());
  const int bound = dim_h(spec);

  ReducedPovm out;
  out.mode = ReductionMode::bayes;
  out.cost_before = bayes_cost(povm, prior);
  double residual = 0.0;
  for (const PriorPoint& point : prior.points()) {
    residual = std::max(residual, membership_deviation(spec, point.rho));
  }
  out.sufficiency_residual = residual;

  const AhBasis basis = make_ah_basis(spec);
  std::vector<CMatrix> elements =
      split_extreme(spec, project_all(spec, povm.elements));

  int round = 0;
  while (static_cast<int>(elements.size()) > bound) {
    ++round;
    const int s = static_cast<int>(elements.size());
    const EstimatorMap estimator =
        optimal_bayes_estimator(wrap(povm.dim, elements), prior);
    RMatrix coords(basis.size(), s);
    for (int x = 0; x < s; ++x) {
      coords.col(x) = ah_coords(basis, elements[x]);
    }
    RVector alpha = nullspace_alpha(coords);
    if (alpha.size() == 0) {
      throw NoDependenceFound("no dependence found at support size " +
                              std::to_string(s) + " above bound " +
                              std::to_string(bound));
    }
    std::vector<double> slack_terms(s);
    for (int x = 0; x < s; ++x) {
      slack_terms[x] = alpha[x] * h_cost(elements[x], estimator.values[x],
                                         prior);
    }
    double r = canonical_sum(slack_terms);
    orient(alpha, r);
    if (r < 0.0) r = 0.0;  // orientation guarantees r >= -rounding

    double cost_before_round = 0.0;
    for (int x = 0; x < s; ++x) {
      cost_before_round += h_cost(elements[x], estimator.values[x], prior);
    }
    ReductionCertificate cert = apply_round(elements, alpha, r, round);

    // Same estimator, surviving outcomes: cost must drop by exactly t*r.
    double cost_after_round = 0.0;
    {
      int x_old = 0;
      std::size_t skip = 0;
      for (int x = 0; x < s; ++x) {
        if (x == cert.removed_index ||
            (skip < cert.also_removed.size() &&
             cert.also_removed[skip] == x && (++skip, true))) {
          continue;
        }
        cost_after_round +=
            h_cost(elements[x_old], estimator.values[x], prior);
        ++x_old;
      }
    }
    cert.drift =
        std::abs(cost_after_round - (cost_before_round - cert.t * cert.r));
    out.certificates.push_back(std::move(cert));
  }

  out.povm = validate_povm(elements);
  out.cost_after = bayes_cost(out.povm, prior);
  return out;
}

}  // namespace qestkit
