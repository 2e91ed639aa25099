#include "tomoinfo/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace tomoinfo {

namespace {

constexpr double kProbFloor = 1e-12;

void require_scheme(const MeasurementRecord& record, Scheme scheme, const char* who) {
  validate_record(record);
  if (record.scheme != scheme) {
    std::ostringstream msg;
    msg << who << " expects a " << to_string(scheme) << " record, got "
        << to_string(record.scheme);
    throw std::invalid_argument(msg.str());
  }
}

// Flattened POVM view used by the likelihood machinery: effects plus counts,
// covering every registered outcome.
struct FlatPovm {
  std::vector<Eigen::MatrixXcd> effects;
  std::vector<long long> counts;
};

FlatPovm flatten(const MeasurementRecord& record, const MubSet& set) {
  require_scheme(record, Scheme::mub, "ml_estimate");
  if (record.dim != set.dim()) {
    throw std::invalid_argument("ml_estimate: record and MUB set dimensions differ");
  }
  FlatPovm povm;
  const int p = set.dim();
  for (int a = 0; a <= p; ++a) {
    for (int j = 0; j < p; ++j) {
      povm.effects.push_back(set.projector(a, j));
      povm.counts.push_back(record.counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)]);
    }
  }
  return povm;
}

FlatPovm flatten(const MeasurementRecord& record, const OrthoQuorum& quorum) {
  require_scheme(record, Scheme::ortho, "ml_estimate");
  if (record.dim != quorum.dim) {
    throw std::invalid_argument("ml_estimate: record and quorum dimensions differ");
  }
  FlatPovm povm;
  const int p = quorum.dim;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(p, p);
  for (std::size_t j = 0; j < quorum.elements.size(); ++j) {
    povm.effects.push_back(quorum.elements[j]);
    povm.counts.push_back(record.counts[j][0]);
    povm.effects.push_back(id - quorum.elements[j]);
    povm.counts.push_back(record.counts[j][1]);
  }
  return povm;
}

double log_likelihood(const Eigen::MatrixXcd& rho, const FlatPovm& povm, bool* floored) {
  double ll = 0.0;
  for (std::size_t k = 0; k < povm.effects.size(); ++k) {
    if (povm.counts[k] == 0) continue;
    double prob = (rho * povm.effects[k]).trace().real();
    if (prob < kProbFloor) {
      prob = kProbFloor;
      if (floored) *floored = true;
    }
    ll += static_cast<double>(povm.counts[k]) * std::log(prob);
  }
  return ll;
}

MlResult ml_core(const FlatPovm& povm, int dim, const MlOptions& options) {
  if (options.max_iter < 1) {
    throw std::invalid_argument("ml_estimate: max_iter must be >= 1");
  }
  if (!(options.tol > 0.0)) {
    throw std::invalid_argument("ml_estimate: tol must be positive");
  }
  if (!(options.dilution > 0.0 && options.dilution <= 1.0)) {
    throw std::invalid_argument("ml_estimate: dilution must lie in (0, 1]");
  }

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
  bool floored = false;
  double ll = log_likelihood(rho, povm, &floored);
  if (options.ll_history) options.ll_history->push_back(ll);

  double eps = options.dilution;
  constexpr double kEpsMin = 1e-10;
  int iterations = 0;
  bool converged = false;

  for (int iter = 0; iter < options.max_iter; ++iter) {
    // R = sum_k (n_k / p_k) E_k evaluated at the current iterate.
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t k = 0; k < povm.effects.size(); ++k) {
      if (povm.counts[k] == 0) continue;
      double prob = (rho * povm.effects[k]).trace().real();
      if (prob < kProbFloor) {
        prob = kProbFloor;
        floored = true;
      }
      r += (static_cast<double>(povm.counts[k]) / prob) * povm.effects[k];
    }
    Eigen::MatrixXcd core = r * rho * r;
    const double core_trace = core.trace().real();
    if (!(core_trace > 0.0)) {
      // All counted outcomes have vanishing probability mass; no direction.
      converged = true;
      break;
    }
    core /= core_trace;

    // Reject any step that lowers the log-likelihood; halve eps and retry.
    bool stepped = false;
    double ll_cand = ll;
    Eigen::MatrixXcd cand;
    while (eps >= kEpsMin) {
      cand = (1.0 - eps) * rho + eps * core;
      cand = 0.5 * (cand + cand.adjoint().eval());
      ll_cand = log_likelihood(cand, povm, &floored);
      if (ll_cand >= ll) {
        stepped = true;
        break;
      }
      eps *= 0.5;
    }
    if (!stepped) {
      // No ascent direction at the smallest step: numerically stationary.
      converged = true;
      break;
    }
    const double delta = ll_cand - ll;
    rho = cand;
    ll = ll_cand;
    ++iterations;
    if (options.ll_history) options.ll_history->push_back(ll);
    if (delta <= options.tol * (std::abs(ll) + 1.0)) {
      converged = true;
      break;
    }
  }

  MlResult result{DensityMatrix::unchecked(std::move(rho)), ll, iterations, converged, floored};
  return result;
}

}  // namespace

DensityMatrix direct_inversion(const MeasurementRecord& record, const MubSet& set) {
  require_scheme(record, Scheme::mub, "direct_inversion");
  if (record.dim != set.dim()) {
    throw std::invalid_argument("direct_inversion: record and MUB set dimensions differ");
  }
  const int p = set.dim();
  McoWeights w;
  w.dim = p;
  w.weights.resize(p + 1, p);
  const double offset = 1.0 / static_cast<double>(p + 1);
  const double inv_n = 1.0 / static_cast<double>(record.shots);
  for (int a = 0; a <= p; ++a) {
    for (int j = 0; j < p; ++j) {
      const double freq =
          static_cast<double>(record.counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)]) * inv_n;
      w.weights(a, j) = freq - offset;
    }
  }
  return state_from_weights(w, set);
}

DensityMatrix project_to_physical(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
  const Eigen::VectorXd evals = solver.eigenvalues();
  if (evals.minCoeff() >= 0.0) {
    return rho;
  }
  // Euclidean projection of the spectrum onto the probability simplex.
  const int p = rho.dim();
  std::vector<double> sorted(evals.data(), evals.data() + p);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (int k = 0; k < p; ++k) {
    cumulative += sorted[static_cast<std::size_t>(k)];
    const double candidate = (1.0 - cumulative) / static_cast<double>(k + 1);
    if (sorted[static_cast<std::size_t>(k)] + candidate > 0.0) {
      shift = candidate;
    }
  }
  Eigen::VectorXd clipped(p);
  for (int k = 0; k < p; ++k) clipped[k] = std::max(evals[k] + shift, 0.0);
  Eigen::MatrixXcd m =
      solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().adjoint();
  m = 0.5 * (m + m.adjoint().eval());
  m /= m.trace().real();
  return DensityMatrix::physical(std::move(m));
}

DensityMatrix ortho_inversion(const MeasurementRecord& record, const HermitianBasis& basis) {
  require_scheme(record, Scheme::ortho, "ortho_inversion");
  if (record.dim != basis.dim) {
    throw std::invalid_argument("ortho_inversion: record and basis dimensions differ");
  }
  BlochVector a;
  a.dim = basis.dim;
  a.coords.resize(basis.size());
  const double sqrt2 = std::sqrt(2.0);
  const double inv_n = 1.0 / static_cast<double>(record.shots);
  for (int j = 0; j < basis.size(); ++j) {
    const double freq = static_cast<double>(record.counts[static_cast<std::size_t>(j)][0]) * inv_n;
    a.coords[j] = (freq - 0.5) * sqrt2;
  }
  return state_from_bloch(a, basis);
}

MlResult ml_estimate(const MeasurementRecord& record, const MubSet& set,
                     const MlOptions& options) {
  return ml_core(flatten(record, set), set.dim(), options);
}

MlResult ml_estimate(const MeasurementRecord& record, const OrthoQuorum& quorum,
                     const MlOptions& options) {
  return ml_core(flatten(record, quorum), quorum.dim, options);
}

}  // namespace tomoinfo
