#pragma once

#include <optional>
#include <vector>

#include "qestkit/local_estimation.hpp"
#include "qestkit/operators.hpp"

namespace qestkit {

struct PriorPoint {
  RVector theta;
  double weight = 0.0;  // pi_k, positive
  RMatrix w;            // weight matrix W_k, symmetric positive definite
  CMatrix rho;          // density matrix at theta_k
};

// Finitely supported prior with per-point quadratic weights. Validated on
// construction: weights positive and summing to 1 (to 1e-10), states valid
// density matrices, dimensions consistent.
class DiscretePrior {
public:
  DiscretePrior(int param_dim, std::vector<PriorPoint> points);

  int param_dim() const { return param_dim_; }
  int hilbert_dim() const { return hilbert_dim_; }
  const std::vector<PriorPoint>& points() const { return points_; }
  RVector mean() const;  // weight-average of the theta_k

private:
  int param_dim_;
  int hilbert_dim_ = 0;
  std::vector<PriorPoint> points_;
};

// h[X, v] = sum_k pi_k (v - theta_k)^T W_k (v - theta_k) tr(rho_k X).
// Nonnegative for PSD X; homogeneous in X.
double h_cost(const CMatrix& x, const RVector& v, const DiscretePrior& prior);

// Per outcome the exact minimizer of v -> h[M_x, v]: solve A_x v = b_x with
// A_x = sum_k pi_k tr(rho_k M_x) W_k. Outcomes with total probability
// <= tol::p_cut get the prior mean.
EstimatorMap optimal_bayes_estimator(const Povm& povm,
                                     const DiscretePrior& prior);

// c_pi[M, theta_hat] = sum_x h[M_x, theta_hat(x)]; with the estimator omitted
// the optimal one is used, giving c_pi[M]. Outcome order cannot affect the
// result.
double bayes_cost(const Povm& povm, const DiscretePrior& prior,
                  const std::optional<EstimatorMap>& estimator = std::nullopt);

// Uniform prior over the qubit_xz parameter disk, discretized on an n x n
// polar grid (area-weighted cell midpoints, weights renormalized), with
// W_k = I and rho_k the model state (tensor power of it for copies > 1).
DiscretePrior qubit_disk_prior(int grid, int copies = 1);

}  // namespace qestkit
