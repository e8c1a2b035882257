// Acceptance gate: ten end-to-end criteria, one pass/fail line each.
// Run all with no arguments, or a single one with --only N. Exit 0 iff
// every executed criterion passed. Tolerances are pinned inline.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qestkit/json_io.hpp"
#include "qestkit/optimize.hpp"
#include "qestkit/random.hpp"
#include "qestkit/reduction.hpp"

using namespace qestkit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

Tangent random_tangent(std::mt19937_64& rng) {
  CMatrix rho = random_psd(2, rng) + 0.05 * CMatrix::Identity(2, 2);
  rho /= rho.trace().real();
  std::vector<CMatrix> drho;
  for (int i = 0; i < 2; ++i) {
    CMatrix d = random_hermitian(2, rng);
    d -= (d.trace().real() / 2.0) * CMatrix::Identity(2, 2);
    drho.push_back(d);
  }
  return Tangent{rho, drho};
}

// 1. Hermitian-part dimension formula, exact integers.
Outcome criterion1() {
  bool ok = dim_h(SubalgebraSpec({{Ring::real, 2, 1}})) == 3;
  ok = ok &&
       dim_h(SubalgebraSpec({{Ring::real, 3, 1}, {Ring::real, 1, 1}})) == 7;
  for (int n = 1; n <= 5 && ok; ++n) {
    ok = dim_h(SubalgebraSpec({{Ring::complex, n, 1}})) == n * n;
  }
  for (int n = 1; n <= 4 && ok; ++n) {
    ok = dim_h(SubalgebraSpec({{Ring::quaternion, n, 1}})) == 2 * n * n - n;
  }
  return {ok, "3, 7, n^2, 2n^2-n"};
}

// 2. Fisher-preserving reduction: 100 random real 12-outcome qubit POVMs.
Outcome criterion2() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1002);
  const SubalgebraSpec spec = qubit_xz_subalgebra();
  RVector theta(2);
  theta << 0.3, 0.4;
  const Tangent tangent = tangent_at(qubit_xz(), theta);
  int worst_outcomes = 0;
  double worst_drift = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Povm povm = random_real_povm(2, 12, rng);
    const RMatrix f_in = classical_fisher(povm, tangent);
    const ReducedPovm red = reduce_preserving(povm, spec, tangent);
    const RMatrix f_out = classical_fisher(red.povm, tangent);
    worst_outcomes = std::max(worst_outcomes, red.povm.outcomes());
    worst_drift =
        std::max(worst_drift, (f_out - f_in).cwiseAbs().maxCoeff());
  }
  const double elapsed = seconds_since(start);
  const bool ok =
      worst_outcomes <= 6 && worst_drift <= 1e-9 && elapsed < 30.0;
  return {ok, "max outcomes " + std::to_string(worst_outcomes) +
                  ", max |dF| " + fmt(worst_drift) + ", " + fmt(elapsed) +
                  "s"};
}

// 3. Fisher-improving reduction: five rank-one real outcomes, Fisher gain
//    confined to the first diagonal entry.
Outcome criterion3() {
  std::mt19937_64 rng(1003);
  const SubalgebraSpec spec = qubit_xz_subalgebra();
  RVector theta(2);
  theta << 0.3, 0.4;
  const Tangent tangent = tangent_at(qubit_xz(), theta);
  int worst_outcomes = 0;
  double worst_gain_eig = 0.0;    // most negative eigenvalue of F_out - F_in
  double worst_round_drift = 0.0; // per-round movement outside the (1,1) entry
  double worst_imag = 0.0;
  double worst_second_eig = 0.0;  // rank-one check
  for (int trial = 0; trial < 100; ++trial) {
    const Povm povm = random_real_povm(2, 12, rng);
    const RMatrix f_in = classical_fisher(povm, tangent);
    const ReducedPovm red = reduce_improving(povm, spec, tangent);
    const RMatrix f_out = classical_fisher(red.povm, tangent);
    worst_outcomes = std::max(worst_outcomes, red.povm.outcomes());
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(f_out - f_in);
    worst_gain_eig = std::min(worst_gain_eig, eig.eigenvalues().minCoeff());
    // Each certificate's drift is |dF - t r E11| for its own round, so it
    // bounds how far that round moved any entry other than the certified
    // (1,1) slack.
    for (const ReductionCertificate& cert : red.certificates) {
      worst_round_drift = std::max(worst_round_drift, cert.drift);
    }
    for (const CMatrix& m : red.povm.elements) {
      worst_imag = std::max(worst_imag, m.imag().cwiseAbs().maxCoeff());
      worst_second_eig =
          std::max(worst_second_eig, spectral_decompose(m).eigenvalues[1]);
    }
  }
  const bool ok = worst_outcomes <= 5 && worst_gain_eig >= -1e-9 &&
                  worst_round_drift <= 1e-10 && worst_imag <= 1e-10 &&
                  worst_second_eig <= 1e-9;
  return {ok, "max outcomes " + std::to_string(worst_outcomes) +
                  ", min gain eig " + fmt(worst_gain_eig) +
                  ", per-round drift " + fmt(worst_round_drift)};
}

// 4. Bayes reduction: three outcomes on one copy, seven on two copies,
//    never at a cost increase.
Outcome criterion4() {
  std::mt19937_64 rng(1004);
  int worst_single = 0, worst_double = 0;
  double worst_gap = -1.0;
  {
    const DiscretePrior prior = qubit_disk_prior(5);
    const SubalgebraSpec spec = qubit_xz_subalgebra();
    for (int trial = 0; trial < 100; ++trial) {
      const Povm povm = random_povm(2, 10, rng);
      const double cost_in = bayes_cost(povm, prior);
      const ReducedPovm red = reduce_bayes(povm, spec, prior);
      worst_single = std::max(worst_single, red.povm.outcomes());
      worst_gap =
          std::max(worst_gap, bayes_cost(red.povm, prior) - cost_in);
    }
  }
  {
    const DiscretePrior prior = qubit_disk_prior(5, 2);
    const SubalgebraSpec spec = qubit_xz_two_copy_subalgebra();
    for (int trial = 0; trial < 100; ++trial) {
      const Povm povm = random_povm(4, 10, rng);
      const double cost_in = bayes_cost(povm, prior);
      const ReducedPovm red = reduce_bayes(povm, spec, prior);
      worst_double = std::max(worst_double, red.povm.outcomes());
      worst_gap =
          std::max(worst_gap, bayes_cost(red.povm, prior) - cost_in);
    }
  }
  const bool ok = worst_single <= 3 && worst_double <= 7 && worst_gap <= 1e-9;
  return {ok, "max outcomes " + std::to_string(worst_single) + " / " +
                  std::to_string(worst_double) + ", max cost gap " +
                  fmt(worst_gap)};
}

// 5. Contribution lemmas on 1000 random instances each.
Outcome criterion5() {
  std::mt19937_64 rng(1005);
  double merge_eig = 0.0;       // >= -1e-9
  double homogeneity = 0.0;     // <= 1e-10 relative
  double subadd_eig = 0.0;      // >= -1e-9
  double projection = 0.0;      // <= 1e-10 relative
  double cost_drop = 0.0;       // >= -1e-10
  // Merge monotonicity at the measurement level.
  for (int trial = 0; trial < 1000; ++trial) {
    const Tangent tangent = random_tangent(rng);
    const Povm povm = random_povm(2, 5, rng);
    const RMatrix f = classical_fisher(povm, tangent);
    const RMatrix fm = classical_fisher(merge_outcomes(povm, 1, 3), tangent);
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(f - fm);
    merge_eig = std::min(merge_eig, eig.eigenvalues().minCoeff());
  }
  // Homogeneity of a single contribution.
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Tangent tangent = random_tangent(rng);
    const CMatrix a = random_psd(2, rng);
    const double c = scale(rng);
    const RMatrix lhs = g_contribution(c * a, tangent);
    const RMatrix rhs = c * g_contribution(a, tangent);
    homogeneity = std::max(
        homogeneity, (lhs - rhs).cwiseAbs().maxCoeff() /
                         std::max(1.0, rhs.cwiseAbs().maxCoeff()));
  }
  // Subadditivity of contributions.
  for (int trial = 0; trial < 1000; ++trial) {
    const Tangent tangent = random_tangent(rng);
    const CMatrix a = random_psd(2, rng);
    const CMatrix b = random_psd(2, rng);
    const RMatrix split =
        g_contribution(a, tangent) + g_contribution(b, tangent);
    const RMatrix merged = g_contribution(a + b, tangent);
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(split - merged);
    subadd_eig = std::min(subadd_eig, eig.eigenvalues().minCoeff());
  }
  // Projection invariance of the full Fisher for the matched pair.
  {
    std::mt19937_64 theta_rng(0xfeed);
    const StateModel model = qubit_xz();
    const SubalgebraSpec spec = qubit_xz_subalgebra();
    for (int trial = 0; trial < 1000; ++trial) {
      const Tangent tangent =
          tangent_at(model, random_disk_theta(theta_rng));
      const Povm povm = random_povm(2, 6, rng);
      std::vector<CMatrix> projected;
      for (const CMatrix& m : povm.elements) {
        projected.push_back(project(spec, m));
      }
      const RMatrix f = classical_fisher(povm, tangent);
      const RMatrix fp =
          classical_fisher(validate_povm(projected), tangent);
      projection = std::max(
          projection, (fp - f).cwiseAbs().maxCoeff() /
                          std::max(1.0, f.cwiseAbs().maxCoeff()));
    }
  }
  // Bayes cost can only grow under merging.
  {
    const DiscretePrior prior = qubit_disk_prior(3);
    for (int trial = 0; trial < 1000; ++trial) {
      const Povm povm = random_povm(2, 5, rng);
      const double before = bayes_cost(povm, prior);
      const double after = bayes_cost(merge_outcomes(povm, 0, 4), prior);
      cost_drop = std::min(cost_drop, after - before);
    }
  }
  const bool ok = merge_eig >= -1e-9 && homogeneity <= 1e-10 &&
                  subadd_eig >= -1e-9 && projection <= 1e-10 &&
                  cost_drop >= -1e-10;
  return {ok, "merge " + fmt(merge_eig) + ", homog " + fmt(homogeneity) +
                  ", subadd " + fmt(subadd_eig) + ", proj " +
                  fmt(projection) + ", cost " + fmt(cost_drop)};
}

// 6. The four- and five-outcome searches reach the known optimal cost 4,
//    anchored by the explicit axis measurement.
Outcome criterion6() {
  CMatrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  const CMatrix i2 = CMatrix::Identity(2, 2);
  const Povm cross = validate_povm({0.25 * (i2 + x), 0.25 * (i2 - x),
                                    0.25 * (i2 + z), 0.25 * (i2 - z)});
  const StateModel model = qubit_xz();
  const Tangent tangent = tangent_at(model, RVector::Zero(2));
  const RMatrix weight = RMatrix::Identity(2, 2);
  const double anchor =
      weighted_cost(weight, classical_fisher(cross, tangent));
  const bool anchor_ok = std::abs(anchor - 4.0) <= 1e-12;

  const SubalgebraSpec spec = qubit_xz_subalgebra();
  OptimizerConfig config;
  config.restarts = 32;
  config.seed = 2026;
  config.support_size = 4;
  const double best4 =
      minimize_local(model, RVector::Zero(2), weight, spec, config).best_cost;
  config.support_size = 5;
  const double best5 =
      minimize_local(model, RVector::Zero(2), weight, spec, config).best_cost;
  const bool ok = anchor_ok && std::abs(best4 - 4.0) <= 1e-3 &&
                  std::abs(best5 - 4.0) <= 1e-3;
  return {ok, "anchor " + fmt(anchor) + ", s=4 " + fmt(best4) + ", s=5 " +
                  fmt(best5)};
}

// 7. Every near-optimal restart carries the same Fisher matrix.
Outcome criterion7() {
  const StateModel model = qubit_xz();
  const SubalgebraSpec spec = qubit_xz_subalgebra();
  OptimizerConfig config;
  config.support_size = 4;
  config.restarts = 32;
  config.seed = 777;

  const OptimizationReport at_origin = minimize_local(
      model, RVector::Zero(2), RMatrix::Identity(2, 2), spec, config);
  const double spread_origin = uniqueness_audit(at_origin);

  RVector theta(2);
  theta << 0.3, 0.2;
  RMatrix weight(2, 2);
  weight << 1, 0, 0, 2;
  const OptimizationReport off_center =
      minimize_local(model, theta, weight, spec, config);
  const double spread_off = uniqueness_audit(off_center);

  const bool ok = spread_origin <= 1e-4 && spread_off <= 1e-4;
  return {ok, "spread " + fmt(spread_origin) + " at origin (" +
                  std::to_string(at_origin.near_optimal_fishers.size()) +
                  " near-optimal), " + fmt(spread_off) + " off-center (" +
                  std::to_string(off_center.near_optimal_fishers.size()) +
                  ")"};
}

// 8. The quantum information dominates every classical Fisher matrix, and
//    the searched cost respects the quantum lower bound.
Outcome criterion8() {
  std::mt19937_64 rng(1008);
  const StateModel single = qubit_xz();
  const StateModel twin = tensor_power(single, 2);
  double worst_eig = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const RVector theta = random_disk_theta(rng);
    const SldSet s = sld(single, theta);
    const Povm povm = random_povm(2, 2 + trial % 5, rng);
    const RMatrix f = classical_fisher(povm, tangent_at(single, theta));
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(s.fisher - f);
    worst_eig = std::min(worst_eig, eig.eigenvalues().minCoeff());
  }
  for (int trial = 0; trial < 500; ++trial) {
    const RVector theta = random_disk_theta(rng);
    const SldSet s = sld(twin, theta);
    const Povm povm = random_povm(4, 3 + trial % 6, rng);
    const RMatrix f = classical_fisher(povm, tangent_at(twin, theta));
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(s.fisher - f);
    worst_eig = std::min(worst_eig, eig.eigenvalues().minCoeff());
  }

  RVector theta(2);
  theta << 0.3, 0.2;
  RMatrix weight(2, 2);
  weight << 1, 0, 0, 2;
  OptimizerConfig config;
  config.support_size = 4;
  config.restarts = 8;
  config.seed = 88;
  const double best =
      minimize_local(single, theta, weight, qubit_xz_subalgebra(), config)
          .best_cost;
  const double quantum_bound =
      (weight * sld(single, theta).fisher.inverse()).trace();
  const bool ok = worst_eig >= -1e-8 && best >= quantum_bound - 1e-6;
  return {ok, "min eig(J-F) " + fmt(worst_eig) + ", cost " + fmt(best) +
                  " >= bound " + fmt(quantum_bound)};
}

// 9. Real-trace identities for both matched model/subalgebra pairs.
Outcome criterion9() {
  std::mt19937_64 rng(1009);
  double worst = 0.0;
  struct Pair {
    StateModel model;
    SubalgebraSpec spec;
  };
  const std::vector<Pair> pairs = {
      {qubit_xz(), qubit_xz_subalgebra()},
      {tensor_power(qubit_xz(), 2), qubit_xz_two_copy_subalgebra()}};
  for (const Pair& pair : pairs) {
    for (int trial = 0; trial < 200; ++trial) {
      const Tangent tangent =
          tangent_at(pair.model, random_disk_theta(rng));
      CMatrix b = random_hermitian(pair.spec.ambient_dim(), rng);
      b /= b.norm();
      const CMatrix shift = project(pair.spec, b) - b;
      worst =
          std::max(worst, std::abs((tangent.rho * shift).trace().real()));
      for (const CMatrix& drho : tangent.drho) {
        worst = std::max(worst, std::abs((drho * shift).trace().real()));
      }
    }
  }
  return {worst <= 1e-9, "max residual " + fmt(worst)};
}

// 10. The two-copy state in the adapted basis equals its closed form.
Outcome criterion10() {
  std::mt19937_64 rng(1010);
  const StateModel twin = tensor_power(qubit_xz(), 2);
  const CMatrix u = two_copy_adapted_basis();
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const RVector theta = random_disk_theta(rng);
    const double x = theta[0], z = theta[1];
    const CMatrix adapted = u.adjoint() * twin.state_at(theta) * u;
    CMatrix expected = CMatrix::Zero(4, 4);
    const double s2 = std::sqrt(2.0);
    expected(0, 0) = (1 + z) * (1 + z) / 4.0;
    expected(1, 1) = (1 - z) * (1 - z) / 4.0;
    expected(0, 1) = expected(1, 0) = x * x / 4.0;
    expected(0, 2) = expected(2, 0) = s2 * x * (1 + z) / 4.0;
    expected(1, 2) = expected(2, 1) = s2 * x * (1 - z) / 4.0;
    expected(2, 2) = (1 - z * z + x * x) / 4.0;
    expected(3, 3) = (1 - z * z - x * x) / 4.0;
    worst = std::max(worst, (adapted - expected).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-12, "max entry deviation " + fmt(worst)};
}

using Criterion = Outcome (*)();

const char* const labels[10] = {
    "subalgebra dimension formula",
    "information-preserving reduction to six outcomes",
    "information-improving reduction to five rank-one outcomes",
    "bayes reduction to three / seven outcomes",
    "contribution lemmas (merge, scale, split, project, cost)",
    "searches reach the known optimal cost 4",
    "near-optimal restarts share one Fisher matrix",
    "quantum information dominates, searched cost respects the bound",
    "real-trace identities for matched pairs",
    "two-copy state matches its adapted-basis closed form",
};

const Criterion criteria[10] = {
    criterion1, criterion2, criterion3, criterion4, criterion5,
    criterion6, criterion7, criterion8, criterion9, criterion10,
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[i + 1]);
      ++i;
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > 10) {
    std::fprintf(stderr, "criterion number must be in 1..10\n");
    return 2;
  }
  bool all_pass = true;
  for (int n = 1; n <= 10; ++n) {
    if (only != 0 && n != only) continue;
    Outcome outcome;
    try {
      outcome = criteria[n - 1]();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s (%s)\n", n,
                outcome.pass ? "PASS" : "FAIL", labels[n - 1],
                outcome.detail.c_str());
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
