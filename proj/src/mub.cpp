#include "tomoinfo/mub.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace tomoinfo {

namespace {

constexpr double kProjectorTol = 1e-12;
constexpr double kComplementarityTol = 1e-10;

void validate_projectors(int dim, const std::vector<Eigen::MatrixXcd>& projectors) {
  if (dim < 2) {
    throw std::invalid_argument("MUB set requires dimension >= 2");
  }
  const std::size_t expected = static_cast<std::size_t>(dim + 1) * static_cast<std::size_t>(dim);
  if (projectors.size() != expected) {
    std::ostringstream msg;
    msg << "MUB set for dimension " << dim << " needs " << expected << " projectors, got "
        << projectors.size();
    throw std::invalid_argument(msg.str());
  }
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    const auto& pi = projectors[i];
    if (pi.rows() != dim || pi.cols() != dim) {
      std::ostringstream msg;
      msg << "projector " << i << " has shape " << pi.rows() << "x" << pi.cols()
          << ", expected " << dim << "x" << dim;
      throw std::invalid_argument(msg.str());
    }
    if ((pi - pi.adjoint()).cwiseAbs().maxCoeff() > kProjectorTol) {
      std::ostringstream msg;
      msg << "projector " << i << " is not Hermitian";
      throw std::invalid_argument(msg.str());
    }
    if ((pi * pi - pi).cwiseAbs().maxCoeff() > kProjectorTol) {
      std::ostringstream msg;
      msg << "projector " << i << " is not idempotent";
      throw std::invalid_argument(msg.str());
    }
    if (std::abs(pi.trace().real() - 1.0) > kProjectorTol ||
        std::abs(pi.trace().imag()) > kProjectorTol) {
      std::ostringstream msg;
      msg << "projector " << i << " does not have unit trace";
      throw std::invalid_argument(msg.str());
    }
  }
  // Orthogonality within each basis; rank-1 plus orthogonality makes each
  // basis complete.
  for (int b = 0; b <= dim; ++b) {
    for (int j = 0; j < dim; ++j) {
      for (int k = j + 1; k < dim; ++k) {
        const auto& pj = projectors[static_cast<std::size_t>(b * dim + j)];
        const auto& pk = projectors[static_cast<std::size_t>(b * dim + k)];
        const double overlap = std::abs((pj * pk).trace());
        if (overlap > kProjectorTol) {
          std::ostringstream msg;
          msg << "projectors " << j << " and " << k << " of basis " << b
              << " are not orthogonal: |Tr| = " << overlap;
          throw std::invalid_argument(msg.str());
        }
      }
    }
  }
}

}  // namespace

MubSet::MubSet(int dim, std::vector<Eigen::MatrixXcd> projectors)
    : dim_(dim), projectors_(std::move(projectors)) {}

MubSet MubSet::from_projectors(int dim, std::vector<Eigen::MatrixXcd> projectors) {
  validate_projectors(dim, projectors);
  return MubSet(dim, std::move(projectors));
}

const Eigen::MatrixXcd& MubSet::projector(int basis, int outcome) const {
  if (basis < 0 || basis > dim_ || outcome < 0 || outcome >= dim_) {
    std::ostringstream msg;
    msg << "projector index (basis " << basis << ", outcome " << outcome
        << ") out of range for dimension " << dim_;
    throw std::out_of_range(msg.str());
  }
  return projectors_[static_cast<std::size_t>(basis * dim_ + outcome)];
}

MubSet MubSet::rotated(const Eigen::MatrixXcd& unitary) const {
  if (unitary.rows() != dim_ || unitary.cols() != dim_) {
    throw std::invalid_argument("rotated: unitary dimension mismatch");
  }
  std::vector<Eigen::MatrixXcd> rotated;
  rotated.reserve(projectors_.size());
  for (const auto& pi : projectors_) {
    Eigen::MatrixXcd r = unitary * pi * unitary.adjoint();
    // Round-off symmetrization keeps the validated invariants tight.
    rotated.push_back(0.5 * (r + r.adjoint().eval()));
  }
  return from_projectors(dim_, std::move(rotated));
}

MubSet build_mub(int p) {
  if (p != 2 && p != 3 && p != 5 && p != 7) {
    std::ostringstream msg;
    msg << "unsupported dimension " << p
        << ": complete MUB construction covers prime p in {2, 3, 5, 7}";
    throw std::invalid_argument(msg.str());
  }
  std::vector<Eigen::MatrixXcd> projectors;
  projectors.reserve(static_cast<std::size_t>(p + 1) * static_cast<std::size_t>(p));

  // Basis 0: computational.
  for (int j = 0; j < p; ++j) {
    Eigen::MatrixXcd pi = Eigen::MatrixXcd::Zero(p, p);
    pi(j, j) = 1.0;
    projectors.push_back(std::move(pi));
  }
  // Bases 1..p: eigenbases of the shift-and-clock operators X Z^a. Closed
  // form: component k of eigenvector m is exp(i pi (a k (k - p) - 2 m k) / p)
  // / sqrt(p); all overlaps between different bases are Gauss sums of
  // modulus sqrt(p).
  const double inv_sqrt_p = 1.0 / std::sqrt(static_cast<double>(p));
  for (int a = 0; a < p; ++a) {
    for (int m = 0; m < p; ++m) {
      Eigen::VectorXcd v(p);
      for (int k = 0; k < p; ++k) {
        const long long phase_num =
            static_cast<long long>(a) * k * (k - p) - 2LL * m * k;
        const double angle = std::numbers::pi * static_cast<double>(phase_num) / p;
        v(k) = std::polar(inv_sqrt_p, angle);
      }
      projectors.push_back(v * v.adjoint());
    }
  }
  return MubSet::from_projectors(p, std::move(projectors));
}

ComplementarityReport verify_complementarity(const MubSet& set) {
  const int p = set.dim();
  ComplementarityReport report;
  for (int a = 0; a <= p; ++a) {
    for (int j = 0; j < p; ++j) {
      for (int b = a; b <= p; ++b) {
        for (int k = (b == a ? j : 0); k < p; ++k) {
          const double overlap =
              (set.projector(a, j) * set.projector(b, k)).trace().real();
          const double expected =
              (a == b) ? (j == k ? 1.0 : 0.0) : 1.0 / static_cast<double>(p);
          report.max_deviation = std::max(report.max_deviation, std::abs(overlap - expected));
        }
      }
    }
  }
  report.pass = report.max_deviation <= kComplementarityTol;
  return report;
}

McoWeights mco_weights(const DensityMatrix& rho, const MubSet& set) {
  if (rho.dim() != set.dim()) {
    throw std::invalid_argument("mco_weights: state and MUB set dimensions differ");
  }
  const int p = set.dim();
  McoWeights w;
  w.dim = p;
  w.weights.resize(p + 1, p);
  const double offset = 1.0 / static_cast<double>(p + 1);
  for (int a = 0; a <= p; ++a) {
    for (int j = 0; j < p; ++j) {
      const double prob = (rho.matrix() * set.projector(a, j)).trace().real();
      w.weights(a, j) = prob - offset;
    }
  }
  return w;
}

DensityMatrix state_from_weights(const McoWeights& w, const MubSet& set) {
  if (w.dim != set.dim()) {
    throw std::invalid_argument("state_from_weights: weight and MUB set dimensions differ");
  }
  const int p = set.dim();
  if (w.weights.rows() != p + 1 || w.weights.cols() != p) {
    std::ostringstream msg;
    msg << "state_from_weights: weights must be " << (p + 1) << "x" << p << ", got "
        << w.weights.rows() << "x" << w.weights.cols();
    throw std::invalid_argument(msg.str());
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(p, p);
  for (int a = 0; a <= p; ++a) {
    for (int j = 0; j < p; ++j) {
      m += w.weights(a, j) * set.projector(a, j);
    }
  }
  m = 0.5 * (m + m.adjoint().eval());
  return DensityMatrix::unchecked(std::move(m));
}

BzError bz_total_error(const DensityMatrix& rho, const MubSet& set) {
  if (rho.dim() != set.dim()) {
    throw std::invalid_argument("bz_total_error: state and MUB set dimensions differ");
  }
  const int p = set.dim();
  BzError e;
  for (int a = 0; a <= p; ++a) {
    for (int j = 0; j < p; ++j) {
      const double prob = (rho.matrix() * set.projector(a, j)).trace().real();
      e.sum_form += prob * (1.0 - prob);
    }
  }
  e.closed_form = static_cast<double>(p) - purity(rho);
  return e;
}

double invariant_information(const DensityMatrix& rho) {
  const double p = static_cast<double>(rho.dim());
  return (purity(rho) - 1.0 / p) / (1.0 - 1.0 / p);
}

}  // namespace tomoinfo
