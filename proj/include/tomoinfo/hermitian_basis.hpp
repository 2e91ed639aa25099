#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tomoinfo/density_matrix.hpp"

namespace tomoinfo {

/// Orthonormal traceless Hermitian operator basis: p^2 - 1 matrices with
/// Tr{Gamma_j Gamma_k} = delta_jk and Tr{Gamma_k} = 0.
struct HermitianBasis {
  int dim = 0;
  std::vector<Eigen::MatrixXcd> gammas;

  int size() const { return static_cast<int>(gammas.size()); }
};

/// Generalized Gell-Mann matrices rescaled by 1/sqrt(2) so the basis is
/// orthonormal under the Hilbert-Schmidt inner product. Ordering: symmetric
/// off-diagonal pairs, antisymmetric off-diagonal pairs (both in (j,k)
/// lexicographic order, j < k), then the diagonal matrices.
HermitianBasis gell_mann_basis(int p);

/// Coordinates of the traceless part of a state: a_k = Tr{rho Gamma_k}.
struct BlochVector {
  int dim = 0;
  Eigen::VectorXd coords;
};

BlochVector bloch_coords(const DensityMatrix& rho, const HermitianBasis& basis);

/// Inverse map I/p + sum_k a_k Gamma_k. Hermitian with unit trace by
/// construction; positivity is not checked (coordinates outside the state
/// body are legitimate inputs for estimator intermediates).
DensityMatrix state_from_bloch(const BlochVector& a, const HermitianBasis& basis);

}  // namespace tomoinfo
