#include "qestkit/operators.hpp"

#include <algorithm>
#include <cmath>

namespace qestkit {

double hermiticity_deviation(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch("hermiticity check needs a square matrix, got " +
                            std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()));
  }
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& a, double tolerance) {
  return hermiticity_deviation(a) <= tolerance;
}

double min_eigenvalue(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

CMatrix clamp_psd(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
  RVector vals = solver.eigenvalues();
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    if (vals[k] < 0.0 && vals[k] >= -tol::psd) vals[k] = 0.0;
  }
  return solver.eigenvectors() * vals.asDiagonal() *
         solver.eigenvectors().adjoint();
}

SpectralDecomposition spectral_decompose(const CMatrix& a) {
  double dev = hermiticity_deviation(a);
  if (dev > tol::herm) throw NotHermitian(-1, dev);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
  const Eigen::Index n = a.rows();
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  // Eigen sorts ascending; flip to descending.
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = solver.eigenvalues()[n - 1 - k];
    out.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

std::vector<CMatrix> rank_one_split(const CMatrix& a) {
  SpectralDecomposition eig = spectral_decompose(a);
  std::vector<CMatrix> pieces;
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    const double lambda = eig.eigenvalues[k];
    if (lambda <= tol::rank_cut) continue;
    const CVector v = eig.eigenvectors.col(k);
    pieces.push_back(lambda * v * v.adjoint());
  }
  return pieces;
}

CMatrix psd_inverse_sqrt(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
  RVector vals = solver.eigenvalues();
  if (vals.minCoeff() <= 0.0) {
    throw NumericalError("inverse square root needs a positive definite "
                         "matrix (min eigenvalue " +
                         std::to_string(vals.minCoeff()) + ")");
  }
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    vals[k] = 1.0 / std::sqrt(vals[k]);
  }
  return solver.eigenvectors() * vals.asDiagonal() *
         solver.eigenvectors().adjoint();
}

double completeness_deviation(const std::vector<CMatrix>& elements) {
  const Eigen::Index n = elements.front().rows();
  CMatrix sum = CMatrix::Zero(n, n);
  for (const CMatrix& e : elements) sum += e;
  return (sum - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

Povm validate_povm(const std::vector<CMatrix>& elements) {
  if (elements.empty()) {
    throw ValidationError("a POVM needs at least one element");
  }
  const Eigen::Index n = elements.front().rows();
  if (n < 1) throw DimensionMismatch("POVM elements must be at least 1x1");
  for (std::size_t x = 0; x < elements.size(); ++x) {
    const CMatrix& e = elements[x];
    if (e.rows() != n || e.cols() != n) {
      throw DimensionMismatch("POVM element " + std::to_string(x) + " is " +
                              std::to_string(e.rows()) + "x" +
                              std::to_string(e.cols()) + ", expected " +
                              std::to_string(n) + "x" + std::to_string(n));
    }
    const double herm_dev = hermiticity_deviation(e);
    if (herm_dev > tol::herm) throw NotHermitian(static_cast<int>(x), herm_dev);
    const double lo = min_eigenvalue(e);
    if (lo < -tol::psd) throw NotPsd(static_cast<int>(x), lo);
  }
  const double dev = completeness_deviation(elements);
  if (dev > tol::complete) throw NotComplete(dev);
  Povm povm;
  povm.dim = static_cast<int>(n);
  povm.elements = elements;
  return povm;
}

namespace {

bool lex_less(const RMatrix& a, const RMatrix& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

}  // namespace

RMatrix canonical_sum(std::vector<RMatrix> terms, int rows, int cols) {
  std::sort(terms.begin(), terms.end(), lex_less);
  RMatrix sum = RMatrix::Zero(rows, cols);
  for (const RMatrix& t : terms) sum += t;
  return sum;
}

double canonical_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum;
}

}  // namespace qestkit
