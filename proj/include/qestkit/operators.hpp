#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qestkit/errors.hpp"

namespace qestkit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

namespace tol {
// Validation tolerances, fixed project-wide.
inline constexpr double herm = 1e-12;      // max |A - A^+| entry
inline constexpr double psd = 1e-10;       // eigenvalue floor for PSD checks
inline constexpr double complete = 1e-10;  // max |sum M_x - I| entry
inline constexpr double rank_cut = 1e-12;  // eigenvalues below this are rank 0
inline constexpr double sld_cut = 1e-10;   // kernel cutoff for SLD solves
inline constexpr double p_cut = 1e-12;     // outcome probabilities below this
                                           // contribute zero information
}  // namespace tol

double hermiticity_deviation(const CMatrix& a);
bool is_hermitian(const CMatrix& a, double tolerance = tol::herm);

// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const CMatrix& a);

// Eigenvalues in [-tol::psd, 0) are clamped to 0; more negative ones are kept
// so that downstream PSD checks still fail.
CMatrix clamp_psd(const CMatrix& a);

struct SpectralDecomposition {
  RVector eigenvalues;   // sorted descending
  CMatrix eigenvectors;  // orthonormal columns, aligned with eigenvalues
};

// Hermitian eigendecomposition; throws NotHermitian (index -1) otherwise.
SpectralDecomposition spectral_decompose(const CMatrix& a);

// Splits a PSD operator into rank-one PSD pieces lambda_k v_k v_k^+ that sum
// back to the input; eigenvalues <= tol::rank_cut are dropped.
std::vector<CMatrix> rank_one_split(const CMatrix& a);

// Measurement with finitely many outcomes. Construct through validate_povm;
// element order carries no meaning downstream.
struct Povm {
  int dim = 0;
  std::vector<CMatrix> elements;

  int outcomes() const { return static_cast<int>(elements.size()); }
};

// Checks Hermiticity, positivity, and completeness of the given elements and
// returns them packaged as a Povm. Never mutates the input.
Povm validate_povm(const std::vector<CMatrix>& elements);

// T^{-1/2} of a positive definite Hermitian matrix; NumericalError if any
// eigenvalue is not strictly positive.
CMatrix psd_inverse_sqrt(const CMatrix& a);

double completeness_deviation(const std::vector<CMatrix>& elements);

// Sums with the terms brought into a canonical order first, so results cannot
// depend on the order the caller supplies outcomes in.
RMatrix canonical_sum(std::vector<RMatrix> terms, int rows, int cols);
double canonical_sum(std::vector<double> terms);

}  // namespace qestkit
