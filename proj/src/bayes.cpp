#include "qestkit/bayes.hpp"

#include <cmath>
#include <string>

#include "qestkit/models.hpp"

namespace qestkit {

namespace {

constexpr double prior_norm_tol = 1e-10;

void check_density_matrix(const CMatrix& rho, int k) {
  const double herm = hermiticity_deviation(rho);
  if (herm > 1e-10) {
    throw ValidationError("prior state " + std::to_string(k) +
                          " is not Hermitian (deviation " +
                          std::to_string(herm) + ")");
  }
  const double lo = min_eigenvalue(rho);
  if (lo < -tol::psd) throw NotPsd(k, lo);
  if (std::abs(rho.trace().real() - 1.0) > 1e-10) {
    throw ValidationError("prior state " + std::to_string(k) +
                          " has trace " + std::to_string(rho.trace().real()));
  }
}

}  // namespace

DiscretePrior::DiscretePrior(int param_dim, std::vector<PriorPoint> points)
    : param_dim_(param_dim), points_(std::move(points)) {
  if (param_dim_ < 1) throw ValidationError("prior needs d >= 1");
  if (points_.empty()) throw ValidationError("prior needs at least one point");
  hilbert_dim_ = static_cast<int>(points_.front().rho.rows());
  double total = 0.0;
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const PriorPoint& point = points_[k];
    if (point.theta.size() != param_dim_) {
      throw DimensionMismatch("prior point " + std::to_string(k) +
                              " has a theta of size " +
                              std::to_string(point.theta.size()) +
                              ", expected " + std::to_string(param_dim_));
    }
    if (!(point.weight > 0.0)) {
      throw ValidationError("prior weights must be positive");
    }
    check_weight(point.w, param_dim_);
    if (point.rho.rows() != hilbert_dim_ || point.rho.cols() != hilbert_dim_) {
      throw DimensionMismatch("prior states must share one dimension");
    }
    check_density_matrix(point.rho, static_cast<int>(k));
    total += point.weight;
  }
  if (std::abs(total - 1.0) > prior_norm_tol) {
    throw ValidationError("prior weights sum to " + std::to_string(total) +
                          ", expected 1");
  }
}

RVector DiscretePrior::mean() const {
  RVector m = RVector::Zero(param_dim_);
  for (const PriorPoint& point : points_) m += point.weight * point.theta;
  return m;
}

double h_cost(const CMatrix& x, const RVector& v, const DiscretePrior& prior) {
  if (x.rows() != prior.hilbert_dim() || x.cols() != prior.hilbert_dim()) {
    throw DimensionMismatch("operator does not match the prior state "
                            "dimension");
  }
  if (v.size() != prior.param_dim()) {
    throw DimensionMismatch("estimate size does not match the prior d");
  }
  double sum = 0.0;
  for (const PriorPoint& point : prior.points()) {
    const RVector dev = v - point.theta;
    sum += point.weight * dev.dot(point.w * dev) *
           (point.rho * x).trace().real();
  }
  return sum;
}

EstimatorMap optimal_bayes_estimator(const Povm& povm,
                                     const DiscretePrior& prior) {
  if (povm.dim != prior.hilbert_dim()) {
    throw DimensionMismatch("POVM dimension does not match the prior states");
  }
  const int d = prior.param_dim();
  const RVector fallback = prior.mean();
  EstimatorMap out;
  out.values.reserve(povm.elements.size());
  for (const CMatrix& element : povm.elements) {
    RMatrix a = RMatrix::Zero(d, d);
    RVector b = RVector::Zero(d);
    double probability = 0.0;
    for (const PriorPoint& point : prior.points()) {
      const double p = point.weight * (point.rho * element).trace().real();
      probability += p;
      a += p * point.w;
      b += p * (point.w * point.theta);
    }
    if (probability <= tol::p_cut) {
      out.values.push_back(fallback);
    } else {
      out.values.push_back(a.ldlt().solve(b));
    }
  }
  return out;
}

double bayes_cost(const Povm& povm, const DiscretePrior& prior,
                  const std::optional<EstimatorMap>& estimator) {
  const EstimatorMap& est =
      estimator ? *estimator : optimal_bayes_estimator(povm, prior);
  if (est.outcomes() != povm.outcomes()) {
    throw DimensionMismatch("estimator has " + std::to_string(est.outcomes()) +
                            " values for " + std::to_string(povm.outcomes()) +
                            " outcomes");
  }
  std::vector<double> terms;
  terms.reserve(povm.elements.size());
  for (int x = 0; x < povm.outcomes(); ++x) {
    terms.push_back(h_cost(povm.elements[x], est.values[x], prior));
  }
  return canonical_sum(std::move(terms));
}

DiscretePrior qubit_disk_prior(int grid, int copies) {
  if (grid < 1) throw ValidationError("disk prior needs a grid of >= 1");
  if (copies < 1) throw ValidationError("disk prior needs copies >= 1");
  const StateModel model =
      copies == 1 ? qubit_xz() : tensor_power(qubit_xz(), copies);
  const int d = 2;
  std::vector<PriorPoint> points;
  double total = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double radius = (i + 0.5) / grid;
    for (int j = 0; j < grid; ++j) {
      const double angle = 2.0 * M_PI * (j + 0.5) / grid;
      PriorPoint point;
      point.theta = RVector(d);
      point.theta << radius * std::cos(angle), radius * std::sin(angle);
      point.weight = radius;  // cell area scales with the midpoint radius
      point.w = RMatrix::Identity(d, d);
      point.rho = model.state_at(point.theta);
      total += point.weight;
      points.push_back(std::move(point));
    }
  }
  for (PriorPoint& point : points) point.weight /= total;
  return DiscretePrior(d, std::move(points));
}

}  // namespace qestkit
