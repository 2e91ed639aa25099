#pragma once

#include <complex>

#include <Eigen/Dense>

#include "tomoinfo/density_matrix.hpp"
#include "tomoinfo/random.hpp"

namespace tomoinfo::testing {

inline Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

inline Eigen::Matrix2cd pauli_y() {
  const std::complex<double> i(0.0, 1.0);
  Eigen::Matrix2cd m;
  m << 0, -i, i, 0;
  return m;
}

inline Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

/// |e_k><e_k| in dimension p.
inline Eigen::MatrixXcd basis_projector(int p, int k) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(p, p);
  m(k, k) = 1.0;
  return m;
}

/// Hilbert-Schmidt-random state pulled toward I/p far enough that every MUB
/// and quorum probability is safely interior.
inline DensityMatrix interior_state(int p, std::uint64_t seed, double blend = 0.85) {
  const DensityMatrix raw = random_state(p, StateKind::hs_mixed, seed);
  const Eigen::MatrixXcd mixed = blend * raw.matrix() +
                                 (1.0 - blend) / p * Eigen::MatrixXcd::Identity(p, p);
  return DensityMatrix::physical(mixed);
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace tomoinfo::testing
