#pragma once

#include <functional>
#include <vector>

#include "qestkit/operators.hpp"
#include "qestkit/subalgebra.hpp"

namespace qestkit {

inline constexpr double fd_default_step = 1e-5;

// A parametric family theta -> rho_theta. Immutable evaluation rule; state
// and derivative evaluations validate their outputs (rho PSD with trace 1 to
// 1e-10, derivatives Hermitian traceless to 1e-8).
class StateModel {
public:
  using StateFn = std::function<CMatrix(const RVector&)>;
  using DerivativeFn = std::function<CMatrix(const RVector&, int)>;
  using DomainFn = std::function<bool(const RVector&)>;

  // derivative may be empty: derivative_at then falls back to central finite
  // differences with step fd_default_step. domain empty means all of R^d.
  StateModel(int hilbert_dim, int param_dim, StateFn state,
             DerivativeFn derivative = DerivativeFn(),
             DomainFn domain = DomainFn());

  int hilbert_dim() const { return hilbert_dim_; }
  int param_dim() const { return param_dim_; }
  bool in_domain(const RVector& theta) const;

  CMatrix state_at(const RVector& theta) const;
  CMatrix derivative_at(const RVector& theta, int i) const;
  std::vector<CMatrix> derivatives_at(const RVector& theta) const;

private:
  int hilbert_dim_;
  int param_dim_;
  StateFn state_;
  DerivativeFn derivative_;
  DomainFn domain_;
};

// The local data every estimation routine consumes: the state and its d
// partial derivatives at a fixed parameter point.
struct Tangent {
  CMatrix rho;
  std::vector<CMatrix> drho;

  int dim() const { return static_cast<int>(rho.rows()); }
  int param_dim() const { return static_cast<int>(drho.size()); }
};

Tangent tangent_at(const StateModel& model, const RVector& theta0);

struct SldSet {
  std::vector<CMatrix> sld;  // L_1..L_d
  RMatrix fisher;            // J, symmetric PSD
};

// Symmetric logarithmic derivatives and the quantum Fisher matrix at theta0.
// In the eigenbasis of rho, L entries are 2 drho_ab / (lambda_a + lambda_b)
// where the denominator exceeds tol::sld_cut, else 0 (minimal-norm solution
// off the support).
SldSet sld(const StateModel& model, const RVector& theta0);

// Central differences (rho(theta+h e_i) - rho(theta-h e_i)) / (2h),
// Hermitized. Errors: InvalidStep (step <= 0), OutOfDomain if theta +- h e_i
// leaves the domain.
std::vector<CMatrix> finite_difference_derivatives(
    const StateModel& model, const RVector& theta0,
    double step = fd_default_step);

// rho = (I + x X + z Z)/2 on the open disk x^2 + z^2 < 1, d = 2.
StateModel qubit_xz();

// k-fold tensor power with product-rule derivatives.
StateModel tensor_power(const StateModel& base, int copies);

// Fixes (rho, drho) at a single point; state and derivatives are constant in
// theta. Used for externally supplied local problems.
StateModel point_model(int hilbert_dim, int param_dim, CMatrix rho,
                       std::vector<CMatrix> drho);

// Sufficient subalgebras for the builtin models: real 2x2 matrices for the
// single copy; a real 3 + 1 block pair for two copies, adapted by the basis
// |00>, |11>, (|10>+|01>)/sqrt2, (|10>-|01>)/sqrt2.
SubalgebraSpec qubit_xz_subalgebra();
SubalgebraSpec qubit_xz_two_copy_subalgebra();
CMatrix two_copy_adapted_basis();

}  // namespace qestkit
