#include <random>
#include <vector>

#include <doctest.h>

#include "qestkit/models.hpp"
#include "qestkit/random.hpp"
#include "qestkit/subalgebra.hpp"

using namespace qestkit;

namespace {

SubalgebraSpec real_qubit() { return SubalgebraSpec({{Ring::real, 2, 1}}); }

SubalgebraSpec two_block() {
  return SubalgebraSpec({{Ring::real, 3, 1}, {Ring::real, 1, 1}});
}

}  // namespace

TEST_CASE("hermitian part dimensions") {
  CHECK(dim_h(real_qubit()) == 3);
  CHECK(dim_h(two_block()) == 7);
  for (int n = 1; n <= 4; ++n) {
    CHECK(dim_h(SubalgebraSpec({{Ring::complex, n, 1}})) == n * n);
    CHECK(dim_h(SubalgebraSpec({{Ring::quaternion, n, 1}})) == 2 * n * n - n);
    CHECK(dim_h(SubalgebraSpec({{Ring::real, n, 1}})) == n * (n + 1) / 2);
  }
  // Multiplicity never changes the dimension.
  CHECK(dim_h(SubalgebraSpec({{Ring::real, 2, 3}})) == 3);
  CHECK(dim_h(SubalgebraSpec({{Ring::complex, 2, 2}})) == 4);
}

TEST_CASE("block layout fixes the ambient dimension") {
  CHECK(real_qubit().ambient_dim() == 2);
  CHECK(two_block().ambient_dim() == 4);
  CHECK(SubalgebraSpec({{Ring::real, 2, 3}}).ambient_dim() == 6);
  CHECK(SubalgebraSpec({{Ring::quaternion, 2, 1}}).ambient_dim() == 4);
}

TEST_CASE("basis change must be unitary and sized") {
  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(SubalgebraSpec({{Ring::real, 2, 1}}, bad), ValidationError);
  CHECK_THROWS_AS(SubalgebraSpec({{Ring::real, 2, 1}}, CMatrix::Identity(3, 3)),
                  DimensionMismatch);
}

TEST_CASE("projection is idempotent, unital, and self-adjoint") {
  std::mt19937_64 rng(21);
  const std::vector<SubalgebraSpec> specs = {
      real_qubit(), two_block(), qubit_xz_two_copy_subalgebra(),
      SubalgebraSpec({{Ring::real, 2, 2}}),
      SubalgebraSpec({{Ring::complex, 2, 1}, {Ring::real, 1, 2}})};
  for (const SubalgebraSpec& spec : specs) {
    const int dim = spec.ambient_dim();
    const CMatrix id = CMatrix::Identity(dim, dim);
    CHECK((project(spec, id) - id).cwiseAbs().maxCoeff() <= 1e-12);
    for (int trial = 0; trial < 20; ++trial) {
      const CMatrix b = random_hermitian(dim, rng);
      const CMatrix pb = project(spec, b);
      CHECK((project(spec, pb) - pb).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(membership_deviation(spec, pb) <= 1e-12);
      // Orthogonality in the real trace pairing.
      const CMatrix s = random_hermitian(dim, rng);
      const double lhs = (s * pb).trace().real();
      const double rhs = (project(spec, s) * b).trace().real();
      CHECK(std::abs(lhs - rhs) <= 1e-10);
      // Positivity.
      const CMatrix psd = random_psd(dim, rng);
      CHECK(min_eigenvalue(project(spec, psd)) >= -1e-10);
    }
  }
}

TEST_CASE("projection honors the multiplicity layout") {
  // {R, 2, 2} acts as two identical 2x2 copies on the diagonal.
  const SubalgebraSpec spec({{Ring::real, 2, 2}});
  std::mt19937_64 rng(22);
  const CMatrix b = random_hermitian(4, rng);
  const CMatrix pb = project(spec, b);
  CHECK((pb.block(0, 0, 2, 2) - pb.block(2, 2, 2, 2)).cwiseAbs().maxCoeff() <=
        1e-12);
  CHECK(pb.block(0, 2, 2, 2).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(pb.imag().cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("quaternion blocks refuse to project") {
  const SubalgebraSpec spec({{Ring::quaternion, 1, 1}});
  CHECK_THROWS_AS(project(spec, CMatrix::Identity(2, 2)), UnsupportedRing);
}

TEST_CASE("extreme decomposition yields member projections scaled") {
  const SubalgebraSpec spec = two_block();
  std::mt19937_64 rng(23);
  const CMatrix raw = random_psd(4, rng);
  const CMatrix member = project(spec, raw);
  const std::vector<ExtremeElement> pieces = extreme_decompose(spec, member);
  CHECK(!pieces.empty());
  CMatrix sum = CMatrix::Zero(4, 4);
  for (const ExtremeElement& piece : pieces) {
    CHECK(piece.scale > 0.0);
    CHECK(membership_deviation(spec, piece.op) <= 1e-10);
    CHECK(min_eigenvalue(piece.op) >= -1e-12);
    sum += piece.op;
  }
  CHECK((sum - member).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK_THROWS_AS(extreme_decompose(spec, random_psd(4, rng)),
                  NotInSubalgebra);
}

TEST_CASE("hermitian basis spans with the advertised count") {
  for (const SubalgebraSpec& spec :
       {real_qubit(), two_block(),
        SubalgebraSpec({{Ring::complex, 2, 1}, {Ring::real, 1, 2}})}) {
    const std::vector<CMatrix> basis = hermitian_basis(spec);
    CHECK(static_cast<int>(basis.size()) == dim_h(spec));
    for (const CMatrix& b : basis) {
      CHECK(hermiticity_deviation(b) <= 1e-14);
      CHECK(membership_deviation(spec, b) <= 1e-12);
    }
    // Linear independence through the Gram matrix.
    const int k = static_cast<int>(basis.size());
    RMatrix gram(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        gram(i, j) = (basis[i] * basis[j]).trace().real();
      }
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(gram);
    CHECK(eig.eigenvalues().minCoeff() > 1e-8);
  }
}

TEST_CASE("sufficiency residual vanishes for the matched models") {
  const StateModel qubit = qubit_xz();
  RVector theta(2);
  theta << 0.3, -0.2;
  const Tangent tangent = tangent_at(qubit, theta);
  CHECK(sufficiency_residual(real_qubit(), tangent.rho, tangent.drho) <=
        1e-12);

  const StateModel two_copy = tensor_power(qubit, 2);
  const Tangent tangent2 = tangent_at(two_copy, theta);
  CHECK(sufficiency_residual(qubit_xz_two_copy_subalgebra(), tangent2.rho,
                             tangent2.drho) <= 1e-10);

  // A generic complex perturbation is not captured by the real qubit block.
  CMatrix y(2, 2);
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  CHECK(sufficiency_residual(real_qubit(), tangent.rho, {y}) > 1e-3);
}

TEST_CASE("real trace identities hold against the qubit model") {
  std::mt19937_64 rng(24);
  const StateModel model = qubit_xz();
  const SubalgebraSpec spec = real_qubit();
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const RVector theta = random_disk_theta(rng);
    const Tangent tangent = tangent_at(model, theta);
    CMatrix b = random_hermitian(2, rng);
    b /= b.norm();
    const CMatrix shift = project(spec, b) - b;
    worst = std::max(worst, std::abs((tangent.rho * shift).trace().real()));
    for (const CMatrix& drho : tangent.drho) {
      worst = std::max(worst, std::abs((drho * shift).trace().real()));
    }
  }
  CHECK(worst <= 1e-12);
}
