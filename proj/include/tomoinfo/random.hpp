#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "tomoinfo/density_matrix.hpp"

namespace tomoinfo {

/// Derives an independent substream seed from (base, index) with a SplitMix64
/// finalizer. Every randomized component seeds its engines exclusively through
/// this function so that runs are reproducible and substreams decorrelated.
std::uint64_t split_seed(std::uint64_t base, std::uint64_t index);

/// Haar-distributed p x p unitary: QR of a complex Ginibre matrix with the
/// R-diagonal phases absorbed into Q.
Eigen::MatrixXcd random_unitary(int p, std::uint64_t seed);

enum class StateKind {
  haar_pure,      // |psi><psi| with Haar-random |psi>
  hs_mixed,       // GG^dag / Tr{GG^dag}, G complex Ginibre (Hilbert-Schmidt measure)
  purity_target,  // lambda |psi><psi| + (1 - lambda) I/p
};

/// Seeded random density matrix of the requested kind. `lambda` is consulted
/// only for purity_target and must lie in [0, 1].
DensityMatrix random_state(int p, StateKind kind, std::uint64_t seed, double lambda = 1.0);

}  // namespace tomoinfo
