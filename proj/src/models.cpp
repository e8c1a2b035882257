#include "qestkit/models.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace qestkit {

namespace {

constexpr double state_tol = 1e-10;
constexpr double deriv_tol = 1e-8;
constexpr double domain_margin = 1e-9;

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void check_density(const CMatrix& rho, int dim) {
  if (rho.rows() != dim || rho.cols() != dim) {
    throw DimensionMismatch("state is " + std::to_string(rho.rows()) + "x" +
                            std::to_string(rho.cols()) + ", model says " +
                            std::to_string(dim));
  }
  const double herm = hermiticity_deviation(rho);
  if (herm > state_tol) {
    throw ValidationError("state is not Hermitian (deviation " +
                          std::to_string(herm) + ")");
  }
  const double lo = min_eigenvalue(rho);
  if (lo < -state_tol) {
    throw ValidationError("state is not PSD (min eigenvalue " +
                          std::to_string(lo) + ")");
  }
  const double trace_dev = std::abs(rho.trace().real() - 1.0) +
                           std::abs(rho.trace().imag());
  if (trace_dev > state_tol) {
    throw ValidationError("state trace is off 1 by " +
                          std::to_string(trace_dev));
  }
}

void check_derivative(const CMatrix& d, int dim) {
  if (d.rows() != dim || d.cols() != dim) {
    throw DimensionMismatch("derivative is " + std::to_string(d.rows()) + "x" +
                            std::to_string(d.cols()) + ", model says " +
                            std::to_string(dim));
  }
  const double herm = hermiticity_deviation(d);
  if (herm > deriv_tol) {
    throw ValidationError("state derivative is not Hermitian (deviation " +
                          std::to_string(herm) + ")");
  }
  const double trace = std::abs(d.trace());
  if (trace > deriv_tol) {
    throw ValidationError("state derivative has trace " +
                          std::to_string(trace) + ", expected 0");
  }
}

}  // namespace

StateModel::StateModel(int hilbert_dim, int param_dim, StateFn state,
                       DerivativeFn derivative, DomainFn domain)
    : hilbert_dim_(hilbert_dim), param_dim_(param_dim),
      state_(std::move(state)), derivative_(std::move(derivative)),
      domain_(std::move(domain)) {
  if (hilbert_dim_ < 1 || param_dim_ < 1) {
    throw ValidationError("model dimensions must be positive");
  }
  if (!state_) throw ValidationError("model needs a state map");
}

bool StateModel::in_domain(const RVector& theta) const {
  if (theta.size() != param_dim_) return false;
  return domain_ ? domain_(theta) : true;
}

CMatrix StateModel::state_at(const RVector& theta) const {
  if (theta.size() != param_dim_) {
    throw DimensionMismatch("theta has " + std::to_string(theta.size()) +
                            " entries, model has d = " +
                            std::to_string(param_dim_));
  }
  if (domain_ && !domain_(theta)) {
    throw OutOfDomain("theta is outside the model domain");
  }
  CMatrix rho = state_(theta);
  check_density(rho, hilbert_dim_);
  return rho;
}

CMatrix StateModel::derivative_at(const RVector& theta, int i) const {
  if (i < 0 || i >= param_dim_) {
    throw IndexOutOfRange("derivative index " + std::to_string(i) +
                          " out of range for d = " +
                          std::to_string(param_dim_));
  }
  if (theta.size() != param_dim_) {
    throw DimensionMismatch("theta size does not match model d");
  }
  if (domain_ && !domain_(theta)) {
    throw OutOfDomain("theta is outside the model domain");
  }
  if (!derivative_) {
    return finite_difference_derivatives(*this, theta)[i];
  }
  CMatrix d = derivative_(theta, i);
  check_derivative(d, hilbert_dim_);
  return d;
}

std::vector<CMatrix> StateModel::derivatives_at(const RVector& theta) const {
  if (!derivative_) return finite_difference_derivatives(*this, theta);
  std::vector<CMatrix> out;
  out.reserve(param_dim_);
  for (int i = 0; i < param_dim_; ++i) out.push_back(derivative_at(theta, i));
  return out;
}

Tangent tangent_at(const StateModel& model, const RVector& theta0) {
  Tangent t;
  t.rho = model.state_at(theta0);
  t.drho = model.derivatives_at(theta0);
  return t;
}

SldSet sld(const StateModel& model, const RVector& theta0) {
  const Tangent tangent = tangent_at(model, theta0);
  const int d = model.param_dim();
  const SpectralDecomposition eig = spectral_decompose(tangent.rho);
  const CMatrix& v = eig.eigenvectors;

  SldSet out;
  out.sld.reserve(d);
  for (int i = 0; i < d; ++i) {
    CMatrix in_basis = v.adjoint() * tangent.drho[i] * v;
    for (Eigen::Index a = 0; a < in_basis.rows(); ++a) {
      for (Eigen::Index b = 0; b < in_basis.cols(); ++b) {
        const double denom = eig.eigenvalues[a] + eig.eigenvalues[b];
        in_basis(a, b) =
            denom > tol::sld_cut ? 2.0 * in_basis(a, b) / denom : 0.0;
      }
    }
    CMatrix l = v * in_basis * v.adjoint();
    out.sld.push_back(0.5 * (l + l.adjoint().eval()));
  }

  RMatrix j(d, d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      j(i, k) = (tangent.drho[i] * out.sld[k]).trace().real();
    }
  }
  const double asym = (j - j.transpose()).cwiseAbs().maxCoeff();
  if (asym > deriv_tol) {
    throw NumericalError("quantum Fisher matrix asymmetry " +
                         std::to_string(asym) + " exceeds tolerance");
  }
  out.fisher = 0.5 * (j + j.transpose());
  return out;
}

std::vector<CMatrix> finite_difference_derivatives(const StateModel& model,
                                                   const RVector& theta0,
                                                   double step) {
  if (!(step > 0.0)) {
    throw InvalidStep("finite-difference step must be positive, got " +
                      std::to_string(step));
  }
  std::vector<CMatrix> out;
  out.reserve(model.param_dim());
  for (int i = 0; i < model.param_dim(); ++i) {
    RVector up = theta0;
    RVector down = theta0;
    up[i] += step;
    down[i] -= step;
    const CMatrix diff =
        (model.state_at(up) - model.state_at(down)) / (2.0 * step);
    out.push_back(0.5 * (diff + diff.adjoint().eval()));
  }
  return out;
}

StateModel qubit_xz() {
  CMatrix pauli_x(2, 2);
  pauli_x << 0, 1, 1, 0;
  CMatrix pauli_z(2, 2);
  pauli_z << 1, 0, 0, -1;
  auto state = [pauli_x, pauli_z](const RVector& theta) -> CMatrix {
    return 0.5 * (CMatrix::Identity(2, 2) + theta[0] * pauli_x +
                  theta[1] * pauli_z);
  };
  auto derivative = [pauli_x, pauli_z](const RVector&, int i) -> CMatrix {
    return 0.5 * (i == 0 ? pauli_x : pauli_z);
  };
  auto domain = [](const RVector& theta) {
    return theta.norm() < 1.0 - domain_margin;
  };
  return StateModel(2, 2, state, derivative, domain);
}

StateModel tensor_power(const StateModel& base, int copies) {
  if (copies < 1) throw ValidationError("tensor power needs copies >= 1");
  if (copies == 1) return base;
  int dim = 1;
  for (int c = 0; c < copies; ++c) dim *= base.hilbert_dim();

  auto state = [base, copies](const RVector& theta) -> CMatrix {
    const CMatrix rho = base.state_at(theta);
    CMatrix out = rho;
    for (int c = 1; c < copies; ++c) out = kron(out, rho);
    return out;
  };
  auto derivative = [base, copies](const RVector& theta, int i) -> CMatrix {
    const CMatrix rho = base.state_at(theta);
    const CMatrix drho = base.derivative_at(theta, i);
    CMatrix sum;
    for (int slot = 0; slot < copies; ++slot) {
      CMatrix term = slot == 0 ? drho : rho;
      for (int c = 1; c < copies; ++c) {
        term = kron(term, c == slot ? drho : rho);
      }
      sum = slot == 0 ? term : CMatrix(sum + term);
    }
    return sum;
  };
  auto domain = [base](const RVector& theta) { return base.in_domain(theta); };
  return StateModel(dim, base.param_dim(), state, derivative, domain);
}

StateModel point_model(int hilbert_dim, int param_dim, CMatrix rho,
                       std::vector<CMatrix> drho) {
  if (static_cast<int>(drho.size()) != param_dim) {
    throw DimensionMismatch("point model needs exactly d derivatives");
  }
  check_density(rho, hilbert_dim);
  for (const CMatrix& d : drho) check_derivative(d, hilbert_dim);
  auto state = [rho](const RVector&) { return rho; };
  auto derivative = [drho](const RVector&, int i) { return drho[i]; };
  return StateModel(hilbert_dim, param_dim, state, derivative);
}

SubalgebraSpec qubit_xz_subalgebra() {
  return SubalgebraSpec({BlockSpec{Ring::real, 2, 1}});
}

CMatrix two_copy_adapted_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix u = CMatrix::Zero(4, 4);
  u(0, 0) = 1.0;             // |00>
  u(3, 1) = 1.0;             // |11>
  u(2, 2) = s; u(1, 2) = s;  // (|10> + |01>)/sqrt2
  u(2, 3) = s; u(1, 3) = -s; // (|10> - |01>)/sqrt2
  return u;
}

SubalgebraSpec qubit_xz_two_copy_subalgebra() {
  return SubalgebraSpec({BlockSpec{Ring::real, 3, 1}, BlockSpec{Ring::real, 1, 1}},
                        two_copy_adapted_basis());
}

}  // namespace qestkit
