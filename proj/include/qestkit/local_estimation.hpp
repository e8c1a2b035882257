#pragma once

#include <vector>

#include "qestkit/models.hpp"
#include "qestkit/operators.hpp"

namespace qestkit {

// Per-outcome estimator values theta_hat(x).
struct EstimatorMap {
  std::vector<RVector> values;

  int outcomes() const { return static_cast<int>(values.size()); }
};

// Rank <= 1 Fisher contribution of a single PSD operator:
// g_ij = tr(d_i rho X) tr(d_j rho X) / tr(rho X), zero when the outcome
// probability tr(rho X) <= tol::p_cut.
RMatrix g_contribution(const CMatrix& x, const Tangent& tangent);

// F[M] = sum_x g[M_x]; outcome order cannot affect the result.
RMatrix classical_fisher(const Povm& povm, const Tangent& tangent);

// The estimator achieving V = F^{-1}:
// theta_hat^i(x) = theta0^i + sum_j (F^{-1})^{ij} tr(d_j rho M_x)/tr(rho M_x),
// theta_hat(x) = theta0 on outcomes with probability <= tol::p_cut.
// Errors: SingularFisher when F's min eigenvalue <= 1e-10.
EstimatorMap optimal_local_estimator(const Povm& povm, const Tangent& tangent,
                                     const RVector& theta0);

struct LueCheck {
  bool passed = false;
  RVector mean_residual;        // |sum_x theta_hat(x) p_x - theta0|
  RMatrix derivative_residual;  // |sum_x theta_hat^i tr(d_j rho M_x) - delta|
  double max_residual = 0.0;
};

// Verifies the locally-unbiased conditions at theta0 to 1e-8.
LueCheck lue_check(const Povm& povm, const EstimatorMap& estimator,
                   const Tangent& tangent, const RVector& theta0);

// V^ij = sum_x (theta_hat^i - theta0^i)(theta_hat^j - theta0^j) tr(rho M_x).
RMatrix mse_matrix(const Povm& povm, const EstimatorMap& estimator,
                   const Tangent& tangent, const RVector& theta0);

// Tr(W F^{-1}) via the eigendecomposition of F; SingularFisher when F's min
// eigenvalue <= 1e-10.
double weighted_cost(const RMatrix& weight, const RMatrix& fisher);

// Validates a weight matrix: real symmetric with min eigenvalue >= 1e-12.
void check_weight(const RMatrix& weight, int d);

}  // namespace qestkit
