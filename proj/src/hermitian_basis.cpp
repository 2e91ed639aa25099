#include "tomoinfo/hermitian_basis.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace tomoinfo {

namespace {

using std::complex;

void check_dim(int p) {
  if (p < 2) {
    std::ostringstream msg;
    msg << "operator basis requires dimension >= 2, got " << p;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

HermitianBasis gell_mann_basis(int p) {
  check_dim(p);
  HermitianBasis basis;
  basis.dim = p;
  basis.gammas.reserve(static_cast<std::size_t>(p) * p - 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  // Symmetric pairs (E_jk + E_kj) / sqrt(2).
  for (int j = 0; j < p; ++j) {
    for (int k = j + 1; k < p; ++k) {
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(p, p);
      g(j, k) = inv_sqrt2;
      g(k, j) = inv_sqrt2;
      basis.gammas.push_back(std::move(g));
    }
  }
  // Antisymmetric pairs -i (E_jk - E_kj) / sqrt(2).
  for (int j = 0; j < p; ++j) {
    for (int k = j + 1; k < p; ++k) {
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(p, p);
      g(j, k) = complex<double>(0.0, -inv_sqrt2);
      g(k, j) = complex<double>(0.0, inv_sqrt2);
      basis.gammas.push_back(std::move(g));
    }
  }
  // Diagonal matrices diag(1, ..., 1, -l, 0, ...) / sqrt(l (l + 1)).
  for (int l = 1; l < p; ++l) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(p, p);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) g(j, j) = norm;
    g(l, l) = -static_cast<double>(l) * norm;
    basis.gammas.push_back(std::move(g));
  }
  return basis;
}

BlochVector bloch_coords(const DensityMatrix& rho, const HermitianBasis& basis) {
  if (rho.dim() != basis.dim) {
    throw std::invalid_argument("bloch_coords: state and basis dimensions differ");
  }
  BlochVector a;
  a.dim = basis.dim;
  a.coords.resize(basis.size());
  for (int k = 0; k < basis.size(); ++k) {
    // Tr{rho Gamma_k} is real for Hermitian arguments.
    a.coords[k] = (rho.matrix() * basis.gammas[static_cast<std::size_t>(k)]).trace().real();
  }
  return a;
}

DensityMatrix state_from_bloch(const BlochVector& a, const HermitianBasis& basis) {
  if (a.dim != basis.dim) {
    throw std::invalid_argument("state_from_bloch: coordinate and basis dimensions differ");
  }
  if (a.coords.size() != basis.size()) {
    std::ostringstream msg;
    msg << "state_from_bloch: expected " << basis.size() << " coordinates, got "
        << a.coords.size();
    throw std::invalid_argument(msg.str());
  }
  const int p = basis.dim;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(p, p) / static_cast<double>(p);
  for (int k = 0; k < basis.size(); ++k) {
    m += a.coords[k] * basis.gammas[static_cast<std::size_t>(k)];
  }
  return DensityMatrix::unchecked(std::move(m));
}

}  // namespace tomoinfo
