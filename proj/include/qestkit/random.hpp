#pragma once

#include <random>

#include "qestkit/operators.hpp"

namespace qestkit {

// Seeded generators for property checks and sampled diagnostics. All
// randomness in the project flows through engines seeded by the caller.

CMatrix random_complex_matrix(int n, std::mt19937_64& rng);
CMatrix random_hermitian(int n, std::mt19937_64& rng);
CMatrix random_psd(int n, std::mt19937_64& rng);       // G G^+
CMatrix random_real_psd(int n, std::mt19937_64& rng);  // real symmetric PSD

// Random POVM via T^{-1/2}-normalized random PSD operators.
Povm random_povm(int dim, int outcomes, std::mt19937_64& rng);
// Same with real symmetric elements.
Povm random_real_povm(int dim, int outcomes, std::mt19937_64& rng);

// Uniform over the disk of the given radius (area measure), as an (x, z)
// parameter point for the qubit model.
RVector random_disk_theta(std::mt19937_64& rng, double radius = 0.95);

}  // namespace qestkit
