#include "qestkit/random.hpp"

#include <cmath>

namespace qestkit {

namespace {

Povm frame_povm(std::vector<CMatrix> raw, int dim) {
  CMatrix total = CMatrix::Zero(dim, dim);
  for (const CMatrix& a : raw) total += a;
  const CMatrix norm = psd_inverse_sqrt(total);
  std::vector<CMatrix> elements;
  elements.reserve(raw.size());
  for (const CMatrix& a : raw) {
    CMatrix m = norm * a * norm;
    elements.push_back(0.5 * (m + m.adjoint().eval()));
  }
  return validate_povm(elements);
}

}  // namespace

CMatrix random_complex_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

CMatrix random_hermitian(int n, std::mt19937_64& rng) {
  const CMatrix g = random_complex_matrix(n, rng);
  return 0.5 * (g + g.adjoint().eval());
}

CMatrix random_psd(int n, std::mt19937_64& rng) {
  const CMatrix g = random_complex_matrix(n, rng);
  return g * g.adjoint();
}

CMatrix random_real_psd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  }
  return (g * g.transpose()).cast<Complex>();
}

Povm random_povm(int dim, int outcomes, std::mt19937_64& rng) {
  std::vector<CMatrix> raw;
  raw.reserve(outcomes);
  for (int x = 0; x < outcomes; ++x) raw.push_back(random_psd(dim, rng));
  return frame_povm(std::move(raw), dim);
}

Povm random_real_povm(int dim, int outcomes, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<RMatrix> raw;
  raw.reserve(outcomes);
  RMatrix total = RMatrix::Zero(dim, dim);
  for (int x = 0; x < outcomes; ++x) {
    RMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) g(i, j) = normal(rng);
    }
    raw.push_back(g * g.transpose());
    total += raw.back();
  }
  // Real inverse square root keeps the elements exactly real.
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(total);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw NumericalError("random frame degenerated");
  }
  RMatrix norm = eig.eigenvectors() *
                 eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                 eig.eigenvectors().transpose();
  std::vector<CMatrix> elements;
  elements.reserve(raw.size());
  for (const RMatrix& a : raw) {
    const RMatrix m = norm * a * norm;
    elements.push_back((0.5 * (m + m.transpose())).cast<Complex>());
  }
  return validate_povm(elements);
}

RVector random_disk_theta(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double r = radius * std::sqrt(uniform(rng));
  const double phi = 2.0 * M_PI * uniform(rng);
  RVector theta(2);
  theta << r * std::cos(phi), r * std::sin(phi);
  return theta;
}

}  // namespace qestkit
