#include "tomoinfo/density_matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace tomoinfo {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPsdTol = 1e-10;

void check_shape_hermitian_trace(const Eigen::MatrixXcd& m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << "density matrix must be square and nonempty, got " << m.rows() << "x" << m.cols();
    throw std::invalid_argument(msg.str());
  }
  const double herm_dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > kHermitianTol) {
    std::ostringstream msg;
    msg << "density matrix is not Hermitian: max |m - m^dag| = " << herm_dev;
    throw std::invalid_argument(msg.str());
  }
  const std::complex<double> tr = m.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream msg;
    msg << "density matrix trace must be 1, got " << tr.real() << " + " << tr.imag() << "i";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

DensityMatrix DensityMatrix::physical(Eigen::MatrixXcd m) {
  check_shape_hermitian_trace(m);
  DensityMatrix rho{std::move(m)};
  const double min_eig = rho.min_eigenvalue();
  if (min_eig < -kPsdTol) {
    std::ostringstream msg;
    msg << "density matrix is not positive semidefinite: min eigenvalue = " << min_eig;
    throw std::invalid_argument(msg.str());
  }
  return rho;
}

DensityMatrix DensityMatrix::unchecked(Eigen::MatrixXcd m) {
  check_shape_hermitian_trace(m);
  return DensityMatrix{std::move(m)};
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double purity(const DensityMatrix& rho) {
  // Tr rho^2 = sum |rho_jk|^2 for Hermitian rho.
  return rho.matrix().squaredNorm();
}

double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("hs_distance: dimension mismatch");
  }
  return (rho.matrix() - sigma.matrix()).squaredNorm();
}

}  // namespace tomoinfo
