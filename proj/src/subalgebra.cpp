#include "qestkit/subalgebra.hpp"

#include <string>

namespace qestkit {

namespace {

constexpr double unitary_tol = 1e-10;
constexpr double member_tol = 1e-10;

void require_projectable(const SubalgebraSpec& spec, const char* op) {
  for (const BlockSpec& block : spec.blocks()) {
    if (block.ring == Ring::quaternion) {
      throw UnsupportedRing(std::string(op) +
                            " supports real and complex blocks only");
    }
  }
}

}  // namespace

SubalgebraSpec::SubalgebraSpec(std::vector<BlockSpec> blocks,
                               CMatrix basis_change)
    : blocks_(std::move(blocks)), basis_change_(std::move(basis_change)) {
  if (blocks_.empty()) {
    throw ValidationError("a subalgebra needs at least one block");
  }
  for (const BlockSpec& block : blocks_) {
    if (block.n < 1 || block.m < 1) {
      throw ValidationError("block sizes and multiplicities must be positive");
    }
    offsets_.push_back(ambient_dim_);
    ambient_dim_ += block.rows();
  }
  if (basis_change_.size() == 0) {
    identity_basis_ = true;
    basis_change_ = CMatrix::Identity(ambient_dim_, ambient_dim_);
    return;
  }
  identity_basis_ = false;
  if (basis_change_.rows() != ambient_dim_ ||
      basis_change_.cols() != ambient_dim_) {
    throw DimensionMismatch(
        "basis change must be " + std::to_string(ambient_dim_) + "x" +
        std::to_string(ambient_dim_) + ", got " +
        std::to_string(basis_change_.rows()) + "x" +
        std::to_string(basis_change_.cols()));
  }
  const double dev = (basis_change_.adjoint() * basis_change_ -
                      CMatrix::Identity(ambient_dim_, ambient_dim_))
                         .cwiseAbs()
                         .maxCoeff();
  if (dev > unitary_tol) {
    throw ValidationError("basis change is not unitary (deviation " +
                          std::to_string(dev) + ")");
  }
}

int dim_h(const SubalgebraSpec& spec) {
  int dim = 0;
  for (const BlockSpec& block : spec.blocks()) {
    const int n = block.n;
    switch (block.ring) {
      case Ring::real: dim += n * (n + 1) / 2; break;
      case Ring::complex: dim += n * n; break;
      case Ring::quaternion: dim += 2 * n * n - n; break;
    }
  }
  return dim;
}

CMatrix project(const SubalgebraSpec& spec, const CMatrix& b) {
  require_projectable(spec, "project");
  const int dim = spec.ambient_dim();
  if (b.rows() != dim || b.cols() != dim) {
    throw DimensionMismatch("project expects a " + std::to_string(dim) + "x" +
                            std::to_string(dim) + " operator, got " +
                            std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
  CMatrix adapted =
      spec.identity_basis()
          ? b
          : CMatrix(spec.basis_change().adjoint() * b * spec.basis_change());
  CMatrix out = CMatrix::Zero(dim, dim);
  for (std::size_t bi = 0; bi < spec.blocks().size(); ++bi) {
    const BlockSpec& block = spec.blocks()[bi];
    const int o = spec.block_offset(static_cast<int>(bi));
    const int n = block.n;
    CMatrix avg = CMatrix::Zero(n, n);
    for (int a = 0; a < block.m; ++a) {
      avg += adapted.block(o + a * n, o + a * n, n, n);
    }
    avg /= static_cast<double>(block.m);
    if (block.ring == Ring::real) {
      avg = avg.real().cast<Complex>();
    }
    for (int a = 0; a < block.m; ++a) {
      out.block(o + a * n, o + a * n, n, n) = avg;
    }
  }
  if (!spec.identity_basis()) {
    out = spec.basis_change() * out * spec.basis_change().adjoint();
  }
  return out;
}

double membership_deviation(const SubalgebraSpec& spec, const CMatrix& b) {
  return (b - project(spec, b)).cwiseAbs().maxCoeff();
}

std::vector<ExtremeElement> extreme_decompose(const SubalgebraSpec& spec,
                                              const CMatrix& x) {
  require_projectable(spec, "extreme_decompose");
  const double lo = min_eigenvalue(x);
  if (lo < -tol::psd) throw NotPsd(-1, lo);
  const double member = membership_deviation(spec, x);
  if (member > member_tol) throw NotInSubalgebra(member);

  const int dim = spec.ambient_dim();
  const CMatrix& u = spec.basis_change();
  CMatrix adapted = spec.identity_basis() ? x : CMatrix(u.adjoint() * x * u);

  std::vector<ExtremeElement> pieces;
  for (std::size_t bi = 0; bi < spec.blocks().size(); ++bi) {
    const BlockSpec& block = spec.blocks()[bi];
    const int o = spec.block_offset(static_cast<int>(bi));
    const int n = block.n;
    CMatrix avg = CMatrix::Zero(n, n);
    for (int a = 0; a < block.m; ++a) {
      avg += adapted.block(o + a * n, o + a * n, n, n);
    }
    avg /= static_cast<double>(block.m);
    if (block.ring == Ring::real) avg = avg.real().cast<Complex>();

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(avg);
    for (int k = 0; k < n; ++k) {
      const double lambda = solver.eigenvalues()[k];
      if (lambda <= tol::rank_cut) continue;
      const CVector v = solver.eigenvectors().col(k);
      CMatrix proj = v * v.adjoint();
      if (block.ring == Ring::real) proj = proj.real().cast<Complex>();
      CMatrix tiled = CMatrix::Zero(dim, dim);
      for (int a = 0; a < block.m; ++a) {
        tiled.block(o + a * n, o + a * n, n, n) = proj;
      }
      ExtremeElement piece;
      piece.block_index = static_cast<int>(bi);
      piece.scale = lambda;
      piece.op = spec.identity_basis()
                     ? CMatrix(lambda * tiled)
                     : CMatrix(lambda * (u * tiled * u.adjoint()));
      pieces.push_back(std::move(piece));
    }
  }
  return pieces;
}

std::vector<CMatrix> hermitian_basis(const SubalgebraSpec& spec) {
  require_projectable(spec, "hermitian_basis");
  const int dim = spec.ambient_dim();
  const CMatrix& u = spec.basis_change();

  std::vector<CMatrix> basis;
  auto embed = [&](int bi, const CMatrix& a) {
    const BlockSpec& block = spec.blocks()[bi];
    const int o = spec.block_offset(bi);
    CMatrix tiled = CMatrix::Zero(dim, dim);
    for (int c = 0; c < block.m; ++c) {
      tiled.block(o + c * block.n, o + c * block.n, block.n, block.n) = a;
    }
    basis.push_back(spec.identity_basis() ? tiled
                                          : CMatrix(u * tiled * u.adjoint()));
  };

  for (std::size_t bi = 0; bi < spec.blocks().size(); ++bi) {
    const BlockSpec& block = spec.blocks()[bi];
    const int n = block.n;
    for (int i = 0; i < n; ++i) {
      CMatrix e = CMatrix::Zero(n, n);
      e(i, i) = 1.0;
      embed(static_cast<int>(bi), e);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        CMatrix e = CMatrix::Zero(n, n);
        e(i, j) = 1.0;
        e(j, i) = 1.0;
        embed(static_cast<int>(bi), e);
        if (block.ring == Ring::complex) {
          CMatrix f = CMatrix::Zero(n, n);
          f(i, j) = Complex(0.0, 1.0);
          f(j, i) = Complex(0.0, -1.0);
          embed(static_cast<int>(bi), f);
        }
      }
    }
  }
  return basis;
}

double sufficiency_residual(const SubalgebraSpec& spec, const CMatrix& rho,
                            const std::vector<CMatrix>& drho) {
  double worst = membership_deviation(spec, rho);
  for (const CMatrix& d : drho) {
    worst = std::max(worst, membership_deviation(spec, d));
  }
  return worst;
}

}  // namespace qestkit
