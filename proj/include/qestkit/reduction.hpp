#pragma once

#include <vector>

#include "qestkit/bayes.hpp"
#include "qestkit/local_estimation.hpp"
#include "qestkit/models.hpp"
#include "qestkit/operators.hpp"
#include "qestkit/subalgebra.hpp"

namespace qestkit {

// Witness of one elimination round: the dependence coefficients, the step
// taken, and what was removed. drift is the residual of the round's exact
// conservation relation (Fisher preservation, Fisher (1,1)-shift by t*r, or
// cost drop by t*r, depending on the mode).
struct ReductionCertificate {
  RVector alphas;
  double t = 0.0;
  int removed_index = -1;
  double r = 0.0;
  int round = 0;
  std::vector<int> also_removed;  // trace-zero elements dropped the same round
  double drift = 0.0;
};

enum class ReductionMode { preserve, improve, bayes };

struct ReducedPovm {
  ReductionMode mode = ReductionMode::preserve;
  Povm povm;
  std::vector<ReductionCertificate> certificates;
  // Local modes only; empty for bayes.
  RMatrix fisher_before;
  RMatrix fisher_after;
  // Bayes mode only; NaN otherwise.
  double cost_before = 0.0;
  double cost_after = 0.0;
  // Worst sufficiency residual of the inputs; values above 1e-8 mean the
  // subalgebra does not support the preservation guarantees.
  double sufficiency_residual = 0.0;

  int rounds() const { return static_cast<int>(certificates.size()); }
};

// Residual level above which the reductions' preservation guarantees stop
// being meaningful; callers should surface a warning.
inline constexpr double sufficiency_warn = 1e-8;

// Sums elements i and j into one outcome (kept at min(i,j)); completeness is
// preserved exactly. Errors: IndexOutOfRange.
Povm merge_outcomes(const Povm& povm, int i, int j);

// Fisher-preserving reduction: project every element onto the subalgebra,
// then eliminate outcomes while s > dim_h(spec) + d(d+1)/2 using
// dependencies in (subalgebra coordinates, upper triangle of g). Output
// Fisher equals the input Fisher to 1e-9.
ReducedPovm reduce_preserving(const Povm& povm, const SubalgebraSpec& spec,
                              const Tangent& tangent);

// Fisher-improving reduction: reduce_preserving, split every element into
// minimal-projection pieces, then eliminate while s > dim_h + d(d+1)/2 - 1
// with the (1,1) Fisher coordinate left free; each round adds t*r >= 0 to
// that entry and leaves the rest unchanged. Output elements are positive
// multiples of minimal projections.
ReducedPovm reduce_improving(const Povm& povm, const SubalgebraSpec& spec,
                             const Tangent& tangent);

// Bayes reduction: project, split into minimal-projection pieces, then
// eliminate while s > dim_h(spec), orienting each dependence so the average
// cost never increases; the estimator is refreshed every round.
ReducedPovm reduce_bayes(const Povm& povm, const SubalgebraSpec& spec,
                         const DiscretePrior& prior);

}  // namespace qestkit
