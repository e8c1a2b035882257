#include "qestkit/local_estimation.hpp"

#include <cmath>
#include <string>

namespace qestkit {

namespace {

constexpr double singular_fisher_cut = 1e-10;
constexpr double lue_tol = 1e-8;
constexpr double weight_floor = 1e-12;

void check_tangent_povm(const Povm& povm, const Tangent& tangent) {
  if (povm.dim != tangent.dim()) {
    throw DimensionMismatch("POVM dimension " + std::to_string(povm.dim) +
                            " does not match state dimension " +
                            std::to_string(tangent.dim()));
  }
}

// Real trace pairings of one PSD element against the tangent.
struct OutcomeStats {
  double p = 0.0;
  RVector scores;
};

OutcomeStats outcome_stats(const CMatrix& x, const Tangent& tangent) {
  OutcomeStats stats;
  stats.p = (tangent.rho * x).trace().real();
  stats.scores.resize(tangent.param_dim());
  for (int i = 0; i < tangent.param_dim(); ++i) {
    stats.scores[i] = (tangent.drho[i] * x).trace().real();
  }
  return stats;
}

}  // namespace

RMatrix g_contribution(const CMatrix& x, const Tangent& tangent) {
  if (x.rows() != tangent.dim() || x.cols() != tangent.dim()) {
    throw DimensionMismatch("operator does not match the tangent dimension");
  }
  const int d = tangent.param_dim();
  const OutcomeStats stats = outcome_stats(x, tangent);
  if (stats.p <= tol::p_cut) return RMatrix::Zero(d, d);
  return (stats.scores * stats.scores.transpose()) / stats.p;
}

RMatrix classical_fisher(const Povm& povm, const Tangent& tangent) {
  check_tangent_povm(povm, tangent);
  const int d = tangent.param_dim();
  std::vector<RMatrix> terms;
  terms.reserve(povm.elements.size());
  for (const CMatrix& element : povm.elements) {
    terms.push_back(g_contribution(element, tangent));
  }
  return canonical_sum(std::move(terms), d, d);
}

EstimatorMap optimal_local_estimator(const Povm& povm, const Tangent& tangent,
                                     const RVector& theta0) {
  check_tangent_povm(povm, tangent);
  const int d = tangent.param_dim();
  if (theta0.size() != d) {
    throw DimensionMismatch("theta0 size does not match the tangent");
  }
  const RMatrix fisher = classical_fisher(povm, tangent);
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(fisher);
  const double lo = eig.eigenvalues().minCoeff();
  if (lo <= singular_fisher_cut) throw SingularFisher(lo);

  EstimatorMap out;
  out.values.reserve(povm.elements.size());
  for (const CMatrix& element : povm.elements) {
    const OutcomeStats stats = outcome_stats(element, tangent);
    if (stats.p <= tol::p_cut) {
      out.values.push_back(theta0);
      continue;
    }
    const RVector shift = eig.eigenvectors() *
                          (eig.eigenvalues().cwiseInverse().asDiagonal() *
                           (eig.eigenvectors().transpose() * stats.scores));
    out.values.push_back(theta0 + shift / stats.p);
  }
  return out;
}

LueCheck lue_check(const Povm& povm, const EstimatorMap& estimator,
                   const Tangent& tangent, const RVector& theta0) {
  check_tangent_povm(povm, tangent);
  const int d = tangent.param_dim();
  if (estimator.outcomes() != povm.outcomes()) {
    throw DimensionMismatch("estimator has " +
                            std::to_string(estimator.outcomes()) +
                            " values for " + std::to_string(povm.outcomes()) +
                            " outcomes");
  }

  std::vector<RMatrix> mean_terms;
  std::vector<RMatrix> deriv_terms;
  for (int x = 0; x < povm.outcomes(); ++x) {
    const OutcomeStats stats = outcome_stats(povm.elements[x], tangent);
    mean_terms.push_back(estimator.values[x] * stats.p);
    deriv_terms.push_back(estimator.values[x] * stats.scores.transpose());
  }
  const RVector mean = canonical_sum(std::move(mean_terms), d, 1);
  const RMatrix deriv = canonical_sum(std::move(deriv_terms), d, d);

  LueCheck check;
  check.mean_residual = (mean - theta0).cwiseAbs();
  check.derivative_residual = (deriv - RMatrix::Identity(d, d)).cwiseAbs();
  check.max_residual = std::max(check.mean_residual.maxCoeff(),
                                check.derivative_residual.maxCoeff());
  check.passed = check.max_residual <= lue_tol;
  return check;
}

RMatrix mse_matrix(const Povm& povm, const EstimatorMap& estimator,
                   const Tangent& tangent, const RVector& theta0) {
  check_tangent_povm(povm, tangent);
  const int d = tangent.param_dim();
  if (estimator.outcomes() != povm.outcomes()) {
    throw DimensionMismatch("estimator/POVM outcome counts differ");
  }
  std::vector<RMatrix> terms;
  for (int x = 0; x < povm.outcomes(); ++x) {
    const double p = (tangent.rho * povm.elements[x]).trace().real();
    const RVector dev = estimator.values[x] - theta0;
    terms.push_back(dev * dev.transpose() * p);
  }
  return canonical_sum(std::move(terms), d, d);
}

double weighted_cost(const RMatrix& weight, const RMatrix& fisher) {
  if (weight.rows() != fisher.rows() || weight.cols() != fisher.cols()) {
    throw DimensionMismatch("weight and Fisher matrix sizes differ");
  }
  check_weight(weight, static_cast<int>(weight.rows()));
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(fisher);
  const double lo = eig.eigenvalues().minCoeff();
  if (lo <= singular_fisher_cut) throw SingularFisher(lo);
  // Tr(W F^{-1}) = sum_k v_k^T W v_k / lambda_k.
  double cost = 0.0;
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
    const RVector v = eig.eigenvectors().col(k);
    cost += v.dot(weight * v) / eig.eigenvalues()[k];
  }
  return cost;
}

void check_weight(const RMatrix& weight, int d) {
  if (weight.rows() != d || weight.cols() != d) {
    throw DimensionMismatch("weight matrix must be " + std::to_string(d) +
                            "x" + std::to_string(d));
  }
  const double asym = (weight - weight.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol::herm) {
    throw ValidationError("weight matrix is not symmetric (deviation " +
                          std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(weight, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < weight_floor) {
    throw ValidationError("weight matrix must be positive definite (min "
                          "eigenvalue " +
                          std::to_string(eig.eigenvalues().minCoeff()) + ")");
  }
}

}  // namespace qestkit
