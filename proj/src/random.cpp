#include "tomoinfo/random.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <stdexcept>

namespace tomoinfo {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

Eigen::MatrixXcd ginibre(int rows, int cols, std::mt19937_64& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(rows, cols);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // Fixed row-major fill order keeps draws reproducible across Eigen versions.
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double re = normal(engine);
      const double im = normal(engine);
      g(r, c) = std::complex<double>(re * inv_sqrt2, im * inv_sqrt2);
    }
  }
  return g;
}

void check_dim(int p) {
  if (p < 2) {
    std::ostringstream msg;
    msg << "random draw requires dimension >= 2, got " << p;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
  // SplitMix64 finalizer applied to the golden-ratio-offset stream position.
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Eigen::MatrixXcd random_unitary(int p, std::uint64_t seed) {
  check_dim(p);
  auto engine = make_engine(seed);
  const Eigen::MatrixXcd g = ginibre(p, p, engine);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fixing the R-diagonal phases makes the distribution exactly Haar.
  for (int j = 0; j < p; ++j) {
    const std::complex<double> d = r(j, j);
    const double mag = std::abs(d);
    const std::complex<double> phase = mag > 0.0 ? d / mag : std::complex<double>(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

DensityMatrix random_state(int p, StateKind kind, std::uint64_t seed, double lambda) {
  check_dim(p);
  auto engine = make_engine(seed);
  switch (kind) {
    case StateKind::haar_pure: {
      Eigen::VectorXcd psi = ginibre(p, 1, engine);
      psi.normalize();
      return DensityMatrix::physical(psi * psi.adjoint());
    }
    case StateKind::hs_mixed: {
      const Eigen::MatrixXcd g = ginibre(p, p, engine);
      Eigen::MatrixXcd m = g * g.adjoint();
      m /= m.trace().real();
      // Symmetrize away the round-off of the product.
      m = 0.5 * (m + m.adjoint().eval());
      return DensityMatrix::physical(std::move(m));
    }
    case StateKind::purity_target: {
      if (!(lambda >= 0.0 && lambda <= 1.0)) {
        std::ostringstream msg;
        msg << "purity-target mixing weight must lie in [0, 1], got " << lambda;
        throw std::invalid_argument(msg.str());
      }
      Eigen::VectorXcd psi = ginibre(p, 1, engine);
      psi.normalize();
      Eigen::MatrixXcd m = lambda * (psi * psi.adjoint());
      m += (1.0 - lambda) / static_cast<double>(p) * Eigen::MatrixXcd::Identity(p, p);
      return DensityMatrix::physical(std::move(m));
    }
  }
  throw std::invalid_argument("random_state: unknown state kind");
}

}  // namespace tomoinfo
