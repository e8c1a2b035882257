#pragma once

#include <cstdint>
#include <vector>

#include "qestkit/bayes.hpp"
#include "qestkit/local_estimation.hpp"
#include "qestkit/models.hpp"
#include "qestkit/operators.hpp"
#include "qestkit/subalgebra.hpp"

namespace qestkit {

struct OptimizerConfig {
  int support_size = 0;
  int restarts = 32;
  int max_iters = 2000;
  double grad_tol = 1e-9;
  std::uint64_t seed = 0;
};

enum class OptimizeMode { local, bayes };

struct OptimizationReport {
  OptimizeMode mode = OptimizeMode::local;
  double best_cost = 0.0;
  Povm best_povm;
  RMatrix best_fisher;  // local mode only
  std::vector<double> per_restart_costs;
  // Max pairwise Frobenius distance among the Fisher matrices of restarts
  // within the near-optimal band (local mode; NaN for bayes).
  double fisher_spread = 0.0;
  std::vector<RMatrix> near_optimal_fishers;
  // Worst observed cost increase across exact estimator updates (bayes mode;
  // should be rounding-level).
  double estimator_step_violation = 0.0;
};

// Restarts whose cost is within 1e-6 (relative, floored at 1 absolute scale)
// of the best count as near-optimal.
inline constexpr double near_optimal_band = 1e-6;

// POVM from raw direction-vector parameters: per outcome a vector over the
// block rows of spec (one real parameter per row on REAL blocks, two on
// COMPLEX blocks), B_x = u_x u_x^+, T = sum B_x + 1e-12 I,
// M_x = T^{-1/2} B_x T^{-1/2} rotated back to the ambient basis. params must
// have support * (coordinates per vector) entries.
Povm rank_one_frame_povm(const SubalgebraSpec& spec, const RVector& params,
                         int support);

// Minimizes Tr(W F[M]^{-1}) over rank-one frames of the given support by
// multi-restart adaptive gradient descent (central finite differences, step
// 1e-6). Deterministic given (seed, restarts). Errors: SingularFisher when
// every restart fails to reach an invertible Fisher matrix; UnsupportedRing.
OptimizationReport minimize_local(const StateModel& model,
                                  const RVector& theta0, const RMatrix& weight,
                                  const SubalgebraSpec& spec,
                                  const OptimizerConfig& config);

// Minimizes the average cost by alternating exact estimator updates with
// gradient steps on the same frame parameterization.
OptimizationReport minimize_bayes(const DiscretePrior& prior,
                                  const SubalgebraSpec& spec,
                                  const OptimizerConfig& config);

// Returns fisher_spread after checking there are at least two near-optimal
// restarts to compare; InsufficientNearOptimalRestarts otherwise.
double uniqueness_audit(const OptimizationReport& report);

}  // namespace qestkit
