#include "tomoinfo/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "tomoinfo/random.hpp"

namespace tomoinfo {

namespace {

constexpr double kRowSumTol = 1e-9;

// One multinomial draw by chained conditional binomials; consumes the engine
// in outcome order, so identical prefixes give identical leading counts.
std::vector<long long> multinomial_draw(std::mt19937_64& engine, long long shots,
                                        const std::vector<double>& probs) {
  std::vector<long long> counts(probs.size(), 0);
  long long remaining = shots;
  double rest = 1.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    if (remaining == 0) break;
    double conditional = rest > 0.0 ? probs[i] / rest : 0.0;
    conditional = std::clamp(conditional, 0.0, 1.0);
    std::binomial_distribution<long long> binom(remaining, conditional);
    counts[i] = binom(engine);
    remaining -= counts[i];
    rest -= probs[i];
  }
  counts.back() += remaining;
  return counts;
}

void check_probability_row(const std::vector<double>& row, std::size_t index) {
  double sum = 0.0;
  for (double v : row) {
    if (v < -1e-12 || v > 1.0 + 1e-12 || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << "probability row " << index << " has entry " << v << " outside [0, 1]";
      throw std::invalid_argument(msg.str());
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kRowSumTol) {
    std::ostringstream msg;
    msg << "probability row " << index << " sums to " << sum << ", expected 1";
    throw std::invalid_argument(msg.str());
  }
}

std::pair<std::size_t, std::size_t> scheme_layout(Scheme scheme, int dim) {
  switch (scheme) {
    case Scheme::mub:
      return {static_cast<std::size_t>(dim + 1), static_cast<std::size_t>(dim)};
    case Scheme::ortho:
      return {static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim) - 1, 2};
    case Scheme::eigen:
      return {1, static_cast<std::size_t>(dim)};
  }
  throw std::invalid_argument("unknown measurement scheme");
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::mub: return "mub";
    case Scheme::ortho: return "ortho";
    case Scheme::eigen: return "eigen";
  }
  throw std::invalid_argument("unknown measurement scheme");
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "mub") return Scheme::mub;
  if (name == "ortho") return Scheme::ortho;
  if (name == "eigen") return Scheme::eigen;
  throw std::invalid_argument("unknown scheme '" + name + "' (expected mub, ortho or eigen)");
}

void validate_record(const MeasurementRecord& record) {
  if (record.dim < 2) {
    throw std::invalid_argument("measurement record requires dimension >= 2");
  }
  if (record.shots < 1) {
    throw std::invalid_argument("measurement record requires shots >= 1");
  }
  const auto [rows, cols] = scheme_layout(record.scheme, record.dim);
  if (record.counts.size() != rows) {
    std::ostringstream msg;
    msg << "scheme " << to_string(record.scheme) << " at dimension " << record.dim
        << " requires " << rows << " count rows, got " << record.counts.size();
    throw std::invalid_argument(msg.str());
  }
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = record.counts[r];
    if (row.size() != cols) {
      std::ostringstream msg;
      msg << "count row " << r << " has " << row.size() << " entries, expected " << cols;
      throw std::invalid_argument(msg.str());
    }
    long long sum = 0;
    for (long long c : row) {
      if (c < 0) {
        std::ostringstream msg;
        msg << "count row " << r << " has a negative entry";
        throw std::invalid_argument(msg.str());
      }
      sum += c;
    }
    if (sum != record.shots) {
      std::ostringstream msg;
      msg << "count row " << r << " sums to " << sum << ", expected shots = " << record.shots;
      throw std::invalid_argument(msg.str());
    }
  }
}

Eigen::MatrixXd mub_probabilities(const DensityMatrix& rho, const MubSet& set) {
  if (rho.dim() != set.dim()) {
    throw std::invalid_argument("mub_probabilities: state and MUB set dimensions differ");
  }
  const int p = set.dim();
  Eigen::MatrixXd probs(p + 1, p);
  for (int a = 0; a <= p; ++a) {
    for (int j = 0; j < p; ++j) {
      const double v = (rho.matrix() * set.projector(a, j)).trace().real();
      probs(a, j) = std::clamp(v, 0.0, 1.0);
    }
  }
  return probs;
}

MeasurementRecord sample_counts(Scheme scheme, int dim,
                                const std::vector<std::vector<double>>& probabilities,
                                long long shots, std::uint64_t seed) {
  if (dim < 2) {
    throw std::invalid_argument("sample_counts requires dimension >= 2");
  }
  if (shots < 1) {
    throw std::invalid_argument("sample_counts requires shots >= 1");
  }
  const auto [rows, cols] = scheme_layout(scheme, dim);
  if (probabilities.size() != rows) {
    std::ostringstream msg;
    msg << "scheme " << to_string(scheme) << " at dimension " << dim << " requires " << rows
        << " probability rows, got " << probabilities.size();
    throw std::invalid_argument(msg.str());
  }
  MeasurementRecord record;
  record.dim = dim;
  record.scheme = scheme;
  record.shots = shots;
  record.counts.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = probabilities[r];
    if (row.size() != cols) {
      std::ostringstream msg;
      msg << "probability row " << r << " has " << row.size() << " entries, expected " << cols;
      throw std::invalid_argument(msg.str());
    }
    check_probability_row(row, r);
    std::vector<double> clean(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) clean[i] = std::max(row[i], 0.0);
    auto engine = std::mt19937_64(split_seed(seed, r));
    record.counts.push_back(multinomial_draw(engine, shots, clean));
  }
  validate_record(record);
  return record;
}

OrthoQuorum ortho_quorum(int p, const HermitianBasis& basis) {
  if (basis.dim != p) {
    throw std::invalid_argument("ortho_quorum: basis dimension mismatch");
  }
  OrthoQuorum quorum;
  quorum.dim = p;
  const double coeff = 1.0 / std::sqrt(2.0);
  const Eigen::MatrixXcd half_id = 0.5 * Eigen::MatrixXcd::Identity(p, p);
  for (const auto& gamma : basis.gammas) {
    Eigen::MatrixXcd element = half_id + coeff * gamma;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(element, Eigen::EigenvaluesOnly);
    const double lo = solver.eigenvalues().minCoeff();
    const double hi = solver.eigenvalues().maxCoeff();
    quorum.element_positive.push_back(lo >= -1e-12 && hi <= 1.0 + 1e-12);
    quorum.elements.push_back(std::move(element));
  }
  return quorum;
}

Eigen::VectorXd ortho_quorum_probabilities(const DensityMatrix& rho,
                                           const HermitianBasis& basis) {
  const BlochVector a = bloch_coords(rho, basis);
  const double coeff = 1.0 / std::sqrt(2.0);
  Eigen::VectorXd probs(basis.size());
  for (int j = 0; j < basis.size(); ++j) {
    double v = 0.5 + coeff * a.coords[j];
    if (v < -1e-10 || v > 1.0 + 1e-10) {
      std::ostringstream msg;
      msg << "state outside the quorum's valid domain: element " << j
          << " has Tr{rho Pi} = " << v << ", not in [0, 1]";
      throw std::invalid_argument(msg.str());
    }
    probs[j] = std::clamp(v, 0.0, 1.0);
  }
  return probs;
}

Eigen::VectorXd eigenbasis_probabilities(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix(), Eigen::EigenvaluesOnly);
  Eigen::VectorXd evals = solver.eigenvalues();
  if (evals.minCoeff() < -1e-10) {
    std::ostringstream msg;
    msg << "eigenbasis probabilities require a physical state, found eigenvalue "
        << evals.minCoeff();
    throw std::invalid_argument(msg.str());
  }
  for (int i = 0; i < evals.size(); ++i) evals[i] = std::max(evals[i], 0.0);
  return evals.reverse();
}

}  // namespace tomoinfo
