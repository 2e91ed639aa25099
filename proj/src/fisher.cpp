#include "tomoinfo/fisher.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace tomoinfo {

namespace {

constexpr double kInterior = 1e-9;     // probabilities must stay this far from {0, 1}
constexpr double kCondLimit = 1e12;

void check_shots(long long shots) {
  if (shots < 1) {
    throw std::invalid_argument("Fisher information requires shots >= 1");
  }
}

void check_interior(double prob, const char* observable, int index, int outcome) {
  if (!(prob > kInterior && prob < 1.0 - kInterior)) {
    std::ostringstream msg;
    msg << "Fisher information needs interior probabilities; " << observable << " " << index;
    if (outcome >= 0) msg << ", outcome " << outcome;
    msg << " has p = " << prob;
    throw std::invalid_argument(msg.str());
  }
}

// Tr{Gamma_k Op} for every basis element; real for Hermitian operands.
Eigen::VectorXd basis_traces(const HermitianBasis& basis, const Eigen::MatrixXcd& op) {
  Eigen::VectorXd c(basis.size());
  for (int k = 0; k < basis.size(); ++k) {
    c[k] = (basis.gammas[static_cast<std::size_t>(k)] * op).trace().real();
  }
  return c;
}

void check_dims(const DensityMatrix& rho, int quorum_dim, const HermitianBasis& basis) {
  if (rho.dim() != quorum_dim || basis.dim != quorum_dim) {
    throw std::invalid_argument("Fisher information: state, quorum and basis dimensions differ");
  }
}

Eigen::VectorXd fisher_eigenvalues(const FisherMatrix& fisher) {
  if (fisher.entries.rows() != fisher.entries.cols() || fisher.entries.rows() < 1) {
    throw std::invalid_argument("Fisher matrix must be square and nonempty");
  }
  const Eigen::MatrixXd sym = 0.5 * (fisher.entries + fisher.entries.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd evals = solver.eigenvalues();
  if (evals.minCoeff() <= 0.0) {
    std::ostringstream msg;
    msg << "Fisher matrix is singular or indefinite: min eigenvalue = " << evals.minCoeff();
    throw std::invalid_argument(msg.str());
  }
  return evals;
}

}  // namespace

double log_likelihood_gaussian(const Eigen::MatrixXd& frequencies,
                               const Eigen::MatrixXd& probabilities, long long shots) {
  check_shots(shots);
  if (frequencies.rows() != probabilities.rows() || frequencies.cols() != probabilities.cols()) {
    throw std::invalid_argument("log_likelihood_gaussian: layout mismatch");
  }
  double quad = 0.0;
  for (Eigen::Index r = 0; r < probabilities.rows(); ++r) {
    for (Eigen::Index c = 0; c < probabilities.cols(); ++c) {
      const double p = probabilities(r, c);
      if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream msg;
        msg << "log_likelihood_gaussian: probability (" << r << ", " << c << ") = " << p
            << " is outside (0, 1)";
        throw std::invalid_argument(msg.str());
      }
      const double diff = frequencies(r, c) - p;
      quad += diff * diff / (p * (1.0 - p));
    }
  }
  // -N^2 sum (f - p)^2 / sigma^2 with sigma^2 = N p (1 - p).
  return -static_cast<double>(shots) * quad;
}

FisherMatrix fisher_gaussian(const DensityMatrix& rho, const MubSet& set,
                             const HermitianBasis& basis, long long shots) {
  check_shots(shots);
  check_dims(rho, set.dim(), basis);
  const int p = set.dim();
  const int n = basis.size();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a <= p; ++a) {
    for (int j = 0; j < p; ++j) {
      const auto& pi = set.projector(a, j);
      const double prob = (rho.matrix() * pi).trace().real();
      check_interior(prob, "basis", a, j);
      const Eigen::VectorXd c = basis_traces(basis, pi);
      // N^2 / sigma^2 = N / (p (1 - p)).
      f += (static_cast<double>(shots) / (prob * (1.0 - prob))) * (c * c.transpose());
    }
  }
  return FisherMatrix{p, shots, FisherForm::gaussian, std::move(f)};
}

FisherMatrix fisher_gaussian(const DensityMatrix& rho, const OrthoQuorum& quorum,
                             const HermitianBasis& basis, long long shots) {
  check_shots(shots);
  check_dims(rho, quorum.dim, basis);
  const int n = basis.size();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
  // One Gaussian term per element: the complement outcome is not an
  // independent observation of a two-outcome measurement.
  for (std::size_t j = 0; j < quorum.elements.size(); ++j) {
    const double prob = (rho.matrix() * quorum.elements[j]).trace().real();
    check_interior(prob, "element", static_cast<int>(j), -1);
    const Eigen::VectorXd c = basis_traces(basis, quorum.elements[j]);
    f += (static_cast<double>(shots) / (prob * (1.0 - prob))) * (c * c.transpose());
  }
  return FisherMatrix{quorum.dim, shots, FisherForm::gaussian, std::move(f)};
}

FisherMatrix fisher_multinomial(const DensityMatrix& rho, const MubSet& set,
                                const HermitianBasis& basis, long long shots) {
  check_shots(shots);
  check_dims(rho, set.dim(), basis);
  const int p = set.dim();
  const int n = basis.size();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a <= p; ++a) {
    for (int j = 0; j < p; ++j) {
      const auto& pi = set.projector(a, j);
      const double prob = (rho.matrix() * pi).trace().real();
      check_interior(prob, "basis", a, j);
      const Eigen::VectorXd c = basis_traces(basis, pi);
      f += (static_cast<double>(shots) / prob) * (c * c.transpose());
    }
  }
  return FisherMatrix{p, shots, FisherForm::multinomial, std::move(f)};
}

FisherMatrix fisher_multinomial(const DensityMatrix& rho, const OrthoQuorum& quorum,
                                const HermitianBasis& basis, long long shots) {
  check_shots(shots);
  check_dims(rho, quorum.dim, basis);
  const int n = basis.size();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < quorum.elements.size(); ++j) {
    const double prob = (rho.matrix() * quorum.elements[j]).trace().real();
    check_interior(prob, "element", static_cast<int>(j), -1);
    const Eigen::VectorXd c = basis_traces(basis, quorum.elements[j]);
    // Both outcomes {Pi, 1 - Pi}: 1/p + 1/(1 - p) = 1/(p (1 - p)).
    f += (static_cast<double>(shots) / (prob * (1.0 - prob))) * (c * c.transpose());
  }
  return FisherMatrix{quorum.dim, shots, FisherForm::multinomial, std::move(f)};
}

CrbResult crb_trace(const FisherMatrix& fisher) {
  const Eigen::VectorXd evals = fisher_eigenvalues(fisher);
  CrbResult result;
  result.trace_inverse = evals.cwiseInverse().sum();
  result.condition_number = evals.maxCoeff() / evals.minCoeff();
  result.reliable = result.condition_number <= kCondLimit;
  return result;
}

double fisher_p3_closed_form(const DensityMatrix& rho, const MubSet& set, long long shots) {
  check_shots(shots);
  if (set.dim() != 3 || rho.dim() != 3) {
    throw std::invalid_argument("fisher_p3_closed_form is specific to dimension 3");
  }
  const double n = static_cast<double>(shots);
  double total = 0.0;
  for (int a = 0; a <= 3; ++a) {
    double sum_var = 0.0;   // sum_j sigma_aj^2
    double sum_var2 = 0.0;  // sum_j sigma_aj^4
    for (int j = 0; j < 3; ++j) {
      const double prob = (rho.matrix() * set.projector(a, j)).trace().real();
      const double var = n * prob * (1.0 - prob);
      sum_var += var;
      sum_var2 += var * var;
    }
    total += sum_var;
    if (sum_var > 0.0) total -= sum_var2 / sum_var;
  }
  return total / (n * n);
}

ErrorEllipsoid error_ellipsoid(const FisherMatrix& fisher) {
  const Eigen::MatrixXd sym = 0.5 * (fisher.entries + fisher.entries.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  const Eigen::VectorXd evals = solver.eigenvalues();
  if (evals.minCoeff() <= 0.0) {
    std::ostringstream msg;
    msg << "Fisher matrix is singular or indefinite: min eigenvalue = " << evals.minCoeff();
    throw std::invalid_argument(msg.str());
  }
  const Eigen::Index n = evals.size();
  ErrorEllipsoid e;
  e.eigenvalues.resize(n);
  e.axes.resize(n, n);
  e.half_axis_scales.resize(n);
  e.contour_half_axes.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // Eigen sorts ascending; report descending.
    const Eigen::Index src = n - 1 - i;
    e.eigenvalues[i] = evals[src];
    e.axes.col(i) = solver.eigenvectors().col(src);
    e.half_axis_scales[i] = 1.0 / evals[src];
    e.contour_half_axes[i] = 1.0 / std::sqrt(evals[src]);
  }
  return e;
}

OrthoError ortho_quorum_error(const DensityMatrix& rho, long long shots) {
  check_shots(shots);
  const HermitianBasis basis = gell_mann_basis(rho.dim());
  const Eigen::VectorXd probs = ortho_quorum_probabilities(rho, basis);
  const double n = static_cast<double>(shots);
  OrthoError e;
  double sum_var = 0.0;
  for (Eigen::Index j = 0; j < probs.size(); ++j) {
    sum_var += n * probs[j] * (1.0 - probs[j]);
  }
  e.sum_form = 2.0 * sum_var / (n * n);
  const double p = static_cast<double>(rho.dim());
  e.closed_form = ((p * p - 1.0) / 2.0 + 1.0 / p - purity(rho)) / n;
  return e;
}

double eigenbasis_error(const DensityMatrix& rho) {
  // sum_j lambda_j (1 - lambda_j) = 1 - Tr{rho^2} for any unit-trace rho;
  // evaluate both sides as a numerical self-check.
  const double closed = 1.0 - purity(rho);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix(),
                                                         Eigen::EigenvaluesOnly);
  const Eigen::VectorXd lambda = solver.eigenvalues();
  const double spectral = (lambda.array() * (1.0 - lambda.array())).sum();
  if (std::abs(spectral - closed) > 1e-12) {
    std::ostringstream msg;
    msg << "eigenbasis error self-check failed: spectral sum " << spectral
        << " vs 1 - purity " << closed;
    throw std::runtime_error(msg.str());
  }
  return closed;
}

}  // namespace tomoinfo
