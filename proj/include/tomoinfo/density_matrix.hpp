#pragma once

#include <Eigen/Dense>

namespace tomoinfo {

/// A p x p complex density matrix. Hermiticity and unit trace are enforced on
/// every construction path; positivity is enforced only by physical().
/// Linear-inversion estimators produce unchecked() matrices, which may carry
/// negative eigenvalues and must be inspected via min_eigenvalue().
class DensityMatrix {
public:
  /// Validates Hermiticity, unit trace and positive semidefiniteness.
  /// Throws std::invalid_argument on violation.
  static DensityMatrix physical(Eigen::MatrixXcd m);

  /// Validates Hermiticity and unit trace only.
  static DensityMatrix unchecked(Eigen::MatrixXcd m);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return mat_; }

  /// Smallest eigenvalue; negative values flag an unphysical matrix.
  double min_eigenvalue() const;

  bool is_physical(double tol = 1e-10) const { return min_eigenvalue() >= -tol; }

private:
  explicit DensityMatrix(Eigen::MatrixXcd m) : mat_(std::move(m)) {}
  Eigen::MatrixXcd mat_;
};

/// Tr rho^2. Lies in [1/p, 1] for physical states.
double purity(const DensityMatrix& rho);

/// Squared Hilbert-Schmidt distance Tr[(rho - sigma)^2].
double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace tomoinfo
