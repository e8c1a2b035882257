#include "qestkit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace qestkit {

namespace {

constexpr double fd_step = 1e-6;
constexpr double frame_regularizer = 1e-12;
constexpr double singular_cut = 1e-10;
constexpr double inf = std::numeric_limits<double>::infinity();

// Parameter layout for the direction vectors: one real coordinate per
// adapted-basis row on REAL blocks, a (re, im) pair on COMPLEX blocks.
struct FrameSpace {
  int ambient = 0;
  std::vector<bool> complex_row;
  int coords = 0;

  static FrameSpace from(const SubalgebraSpec& spec) {
    FrameSpace fs;
    fs.ambient = spec.ambient_dim();
    fs.complex_row.reserve(fs.ambient);
    for (const BlockSpec& block : spec.blocks()) {
      if (block.ring == Ring::quaternion) {
        throw UnsupportedRing("the optimizer supports real and complex "
                              "blocks only");
      }
      for (int row = 0; row < block.rows(); ++row) {
        fs.complex_row.push_back(block.ring == Ring::complex);
      }
    }
    fs.coords = 0;
    for (bool c : fs.complex_row) fs.coords += c ? 2 : 1;
    return fs;
  }

  // Direction vectors as columns, in the adapted basis.
  CMatrix directions(const RVector& params, int support) const {
    CMatrix u(ambient, support);
    int k = 0;
    for (int x = 0; x < support; ++x) {
      for (int row = 0; row < ambient; ++row) {
        if (complex_row[row]) {
          u(row, x) = Complex(params[k], params[k + 1]);
          k += 2;
        } else {
          u(row, x) = params[k];
          k += 1;
        }
      }
    }
    return u;
  }
};

// w_x = (sum u u^+ + reg I)^{-1/2} u_x; the POVM elements are w_x w_x^+.
CMatrix normalized_frame(const CMatrix& dirs) {
  const int dim = static_cast<int>(dirs.rows());
  CMatrix t = dirs * dirs.adjoint() +
              frame_regularizer * CMatrix::Identity(dim, dim);
  return psd_inverse_sqrt(t) * dirs;
}

template <typename F>
RVector fd_gradient(const F& f, const RVector& x) {
  RVector g = RVector::Zero(x.size());
  RVector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + fd_step;
    const double up = f(probe);
    probe[i] = x[i] - fd_step;
    const double down = f(probe);
    probe[i] = x[i];
    if (std::isfinite(up) && std::isfinite(down)) {
      g[i] = (up - down) / (2.0 * fd_step);
    }
  }
  return g;
}

struct DescentState {
  RVector x_prev;
  RVector g_prev;
  bool ready = false;
  double step = 0.1;
};

// Monotone gradient descent with a Barzilai-Borwein step guess and
// backtracking. Returns the new cost; stops after stall_limit consecutive
// gains below grad_tol or when no descending step exists.
template <typename F>
double descend(const F& f, RVector& x, double fx, int iters, double grad_tol,
               int stall_limit, DescentState& state) {
  int stall = 0;
  for (int it = 0; it < iters; ++it) {
    const RVector g = fd_gradient(f, x);
    if (!(g.norm() > 0.0)) break;
    double step = state.step;
    if (state.ready) {
      const RVector dx = x - state.x_prev;
      const RVector dg = g - state.g_prev;
      const double num = dx.dot(dg);
      const double den = dg.squaredNorm();
      if (den > 0.0 && num > 0.0) step = num / den;
    }
    step = std::clamp(step, 1e-15, 1e6);

    double fn = inf;
    RVector xn;
    while (step >= 1e-15) {
      xn = x - step * g;
      fn = f(xn);
      if (fn < fx) break;
      step *= 0.5;
    }
    if (!(fn < fx)) break;
    state.x_prev = x;
    state.g_prev = g;
    state.ready = true;
    state.step = step;
    const double gain = fx - fn;
    x = xn;
    fx = fn;
    if (gain < grad_tol) {
      if (++stall >= stall_limit) break;
    } else {
      stall = 0;
    }
  }
  return fx;
}

RVector normal_init(int size, std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  RVector x(size);
  for (int i = 0; i < size; ++i) x[i] = normal(rng);
  return x;
}

void check_config(const OptimizerConfig& config) {
  if (config.support_size < 1) {
    throw ValidationError("support_size must be >= 1");
  }
  if (config.restarts < 1) throw ValidationError("restarts must be >= 1");
  if (config.max_iters < 1) throw ValidationError("max_iters must be >= 1");
  if (!(config.grad_tol > 0.0)) {
    throw ValidationError("grad_tol must be positive");
  }
}

CMatrix to_adapted(const SubalgebraSpec& spec, const CMatrix& a) {
  if (spec.identity_basis()) return a;
  return spec.basis_change().adjoint() * a * spec.basis_change();
}

double pairwise_frobenius_spread(const std::vector<RMatrix>& mats) {
  double spread = 0.0;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    for (std::size_t j = i + 1; j < mats.size(); ++j) {
      spread = std::max(spread, (mats[i] - mats[j]).norm());
    }
  }
  return spread;
}

}  // namespace

Povm rank_one_frame_povm(const SubalgebraSpec& spec, const RVector& params,
                         int support) {
  const FrameSpace fs = FrameSpace::from(spec);
  if (support < 1) throw ValidationError("support must be >= 1");
  if (params.size() != static_cast<Eigen::Index>(support) * fs.coords) {
    throw DimensionMismatch("frame parameters must have " +
                            std::to_string(support * fs.coords) +
                            " entries, got " + std::to_string(params.size()));
  }
  const CMatrix w = normalized_frame(fs.directions(params, support));
  std::vector<CMatrix> elements;
  elements.reserve(support);
  for (int x = 0; x < support; ++x) {
    CMatrix m = w.col(x) * w.col(x).adjoint();
    m = 0.5 * (m + m.adjoint().eval());
    if (!spec.identity_basis()) {
      m = spec.basis_change() * m * spec.basis_change().adjoint();
    }
    elements.push_back(std::move(m));
  }
  return validate_povm(elements);
}

OptimizationReport minimize_local(const StateModel& model,
                                  const RVector& theta0, const RMatrix& weight,
                                  const SubalgebraSpec& spec,
                                  const OptimizerConfig& config) {
  check_config(config);
  const int d = model.param_dim();
  check_weight(weight, d);
  const Tangent tangent = tangent_at(model, theta0);
  if (tangent.dim() != spec.ambient_dim()) {
    throw DimensionMismatch("model dimension does not match the subalgebra");
  }
  const FrameSpace fs = FrameSpace::from(spec);
  const int support = config.support_size;

  const CMatrix rho_ad = to_adapted(spec, tangent.rho);
  std::vector<CMatrix> drho_ad;
  for (const CMatrix& drho : tangent.drho) {
    drho_ad.push_back(to_adapted(spec, drho));
  }

  Eigen::SelfAdjointEigenSolver<RMatrix> weig(weight);

  auto cost = [&](const RVector& params) -> double {
    const CMatrix w = normalized_frame(fs.directions(params, support));
    RMatrix fisher = RMatrix::Zero(d, d);
    for (int x = 0; x < support; ++x) {
      const CVector wx = w.col(x);
      const double p = (wx.adjoint() * rho_ad * wx).value().real();
      if (p <= tol::p_cut) continue;
      RVector scores(d);
      for (int i = 0; i < d; ++i) {
        scores[i] = (wx.adjoint() * drho_ad[i] * wx).value().real();
      }
      fisher += (scores * scores.transpose()) / p;
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> feig(fisher);
    if (feig.eigenvalues().minCoeff() <= singular_cut) return inf;
    double c = 0.0;
    for (int k = 0; k < d; ++k) {
      const RVector v = feig.eigenvectors().col(k);
      c += v.dot(weight * v) / feig.eigenvalues()[k];
    }
    return c;
  };

  OptimizationReport report;
  report.mode = OptimizeMode::local;
  std::vector<Povm> povms(config.restarts);
  std::vector<RMatrix> fishers(config.restarts);
  int best = -1;
  double worst_min_eig = -inf;

  for (int k = 0; k < config.restarts; ++k) {
    RVector params = normal_init(support * fs.coords, config.seed, k);
    DescentState state;
    double fx = cost(params);
    fx = descend(cost, params, fx, config.max_iters, config.grad_tol, 5,
                 state);
    double reported = inf;
    try {
      povms[k] = rank_one_frame_povm(spec, params, support);
      fishers[k] = classical_fisher(povms[k], tangent);
      reported = weighted_cost(weight, fishers[k]);
    } catch (const SingularFisher& e) {
      worst_min_eig = std::max(worst_min_eig, e.min_eigenvalue);
    } catch (const Error&) {
      // Degenerate frame; the restart simply fails.
    }
    report.per_restart_costs.push_back(reported);
    if (std::isfinite(reported) &&
        (best < 0 || reported < report.per_restart_costs[best])) {
      best = k;
    }
  }

  if (best < 0) {
    throw SingularFisher(std::isfinite(worst_min_eig) ? worst_min_eig : 0.0);
  }
  report.best_cost = report.per_restart_costs[best];
  report.best_povm = povms[best];
  report.best_fisher = fishers[best];

  const double band = report.best_cost +
                      near_optimal_band *
                          std::max(1.0, std::abs(report.best_cost));
  for (int k = 0; k < config.restarts; ++k) {
    if (report.per_restart_costs[k] <= band) {
      report.near_optimal_fishers.push_back(fishers[k]);
    }
  }
  report.fisher_spread = pairwise_frobenius_spread(report.near_optimal_fishers);
  return report;
}

OptimizationReport minimize_bayes(const DiscretePrior& prior,
                                  const SubalgebraSpec& spec,
                                  const OptimizerConfig& config) {
  check_config(config);
  if (prior.hilbert_dim() != spec.ambient_dim()) {
    throw DimensionMismatch("prior states do not match the subalgebra");
  }
  const FrameSpace fs = FrameSpace::from(spec);
  const int support = config.support_size;
  const int d = prior.param_dim();
  const int points = static_cast<int>(prior.points().size());

  std::vector<CMatrix> rho_ad;
  rho_ad.reserve(points);
  for (const PriorPoint& point : prior.points()) {
    rho_ad.push_back(to_adapted(spec, point.rho));
  }

  // Outcome-by-point probabilities p_{x,k} = w_x^+ rho_k w_x.
  auto probabilities = [&](const RVector& params) -> RMatrix {
    const CMatrix w = normalized_frame(fs.directions(params, support));
    RMatrix p(support, points);
    for (int x = 0; x < support; ++x) {
      const CVector wx = w.col(x);
      for (int k = 0; k < points; ++k) {
        p(x, k) = (wx.adjoint() * rho_ad[k] * wx).value().real();
      }
    }
    return p;
  };

  auto estimator_from = [&](const RMatrix& p) -> std::vector<RVector> {
    const RVector fallback = prior.mean();
    std::vector<RVector> values(support);
    for (int x = 0; x < support; ++x) {
      RMatrix a = RMatrix::Zero(d, d);
      RVector b = RVector::Zero(d);
      double total = 0.0;
      for (int k = 0; k < points; ++k) {
        const PriorPoint& point = prior.points()[k];
        const double q = point.weight * p(x, k);
        total += q;
        a += q * point.w;
        b += q * (point.w * point.theta);
      }
      values[x] = total <= tol::p_cut ? fallback : RVector(a.ldlt().solve(b));
    }
    return values;
  };

  // Quadratic penalties pi_k (v_x - theta_k)^T W_k (v_x - theta_k).
  auto penalties = [&](const std::vector<RVector>& est) -> RMatrix {
    RMatrix q(support, points);
    for (int x = 0; x < support; ++x) {
      for (int k = 0; k < points; ++k) {
        const PriorPoint& point = prior.points()[k];
        const RVector dev = est[x] - point.theta;
        q(x, k) = point.weight * dev.dot(point.w * dev);
      }
    }
    return q;
  };

  OptimizationReport report;
  report.mode = OptimizeMode::bayes;
  report.fisher_spread = std::numeric_limits<double>::quiet_NaN();
  std::vector<Povm> povms(config.restarts);
  int best = -1;

  for (int k = 0; k < config.restarts; ++k) {
    RVector params = normal_init(support * fs.coords, config.seed, k);
    RMatrix q = penalties(estimator_from(probabilities(params)));
    auto cost = [&](const RVector& x) -> double {
      return probabilities(x).cwiseProduct(q).sum();
    };

    double fx = cost(params);
    double prev_cycle = inf;
    int stall = 0;
    DescentState state;
    for (int outer = 0; outer < config.max_iters; ++outer) {
      fx = descend(cost, params, fx, 1, config.grad_tol, 1 << 20, state);
      const RMatrix p = probabilities(params);
      q = penalties(estimator_from(p));
      const double refreshed = p.cwiseProduct(q).sum();
      report.estimator_step_violation =
          std::max(report.estimator_step_violation, refreshed - fx);
      fx = refreshed;
      state.ready = false;  // the objective changed under the descent state
      if (prev_cycle - fx < config.grad_tol) {
        if (++stall >= 3) break;
      } else {
        stall = 0;
      }
      prev_cycle = fx;
    }

    double reported = inf;
    try {
      povms[k] = rank_one_frame_povm(spec, params, support);
      reported = bayes_cost(povms[k], prior);
    } catch (const Error&) {
      // Degenerate frame; the restart fails.
    }
    report.per_restart_costs.push_back(reported);
    if (std::isfinite(reported) &&
        (best < 0 || reported < report.per_restart_costs[best])) {
      best = k;
    }
  }

  if (best < 0) {
    throw NumericalError("every restart produced a degenerate measurement");
  }
  report.best_cost = report.per_restart_costs[best];
  report.best_povm = povms[best];
  return report;
}

double uniqueness_audit(const OptimizationReport& report) {
  const int count = static_cast<int>(report.near_optimal_fishers.size());
  if (report.mode != OptimizeMode::local || count < 2) {
    throw InsufficientNearOptimalRestarts(
        report.mode == OptimizeMode::local ? count : 0);
  }
  return report.fisher_spread;
}

}  // namespace qestkit
