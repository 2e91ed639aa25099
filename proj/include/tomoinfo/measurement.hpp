#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tomoinfo/density_matrix.hpp"
#include "tomoinfo/hermitian_basis.hpp"
#include "tomoinfo/mub.hpp"

namespace tomoinfo {

enum class Scheme {
  mub,    // p + 1 bases, p outcomes each, N shots per basis
  ortho,  // p^2 - 1 two-outcome elements {Pi_j, 1 - Pi_j}, N shots per element
  eigen,  // single measurement in the eigenbasis of the true state
};

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

/// Outcome counts of a simulated experiment. One row per observable; each row
/// sums to `shots`. Row layout per scheme: mub (p+1) x p, ortho (p^2-1) x 2
/// with columns {yes, no}, eigen 1 x p.
struct MeasurementRecord {
  int dim = 0;
  Scheme scheme = Scheme::mub;
  long long shots = 0;
  std::vector<std::vector<long long>> counts;
};

/// Throws std::invalid_argument if shapes, signs or row sums are off.
void validate_record(const MeasurementRecord& record);

/// Born probabilities p_aj = Tr{rho Pi_aj}, shape (p + 1) x p. Every row sums
/// to 1 and entries are clamped into [0, 1] against round-off.
Eigen::MatrixXd mub_probabilities(const DensityMatrix& rho, const MubSet& set);

/// Draws one multinomial sample of `shots` per probability row. Row r uses an
/// engine seeded with split_seed(seed, r), so single rows can be reproduced
/// independently of how many observables precede them.
MeasurementRecord sample_counts(Scheme scheme, int dim,
                                const std::vector<std::vector<double>>& probabilities,
                                long long shots, std::uint64_t seed);

/// The p^2 - 1 two-outcome quorum operators Pi_j = I/2 + Gamma_j / sqrt(2).
struct OrthoQuorum {
  int dim = 0;
  std::vector<Eigen::MatrixXcd> elements;
  /// Whether element j has spectrum inside [0, 1] (a valid effect). False
  /// entries are reported, never silently clamped; for p >= 3 some elements
  /// fail this for extremal states' axes.
  std::vector<bool> element_positive;
};

/// Two-outcome quorum Pi_j = I/2 + Gamma_j / sqrt(2), one element per basis
/// operator. Note the elements have trace p/2, not 1; they are not projectors
/// for p >= 3.
OrthoQuorum ortho_quorum(int p, const HermitianBasis& basis);

/// Probabilities p_j = Tr{rho Pi_j} = 1/2 + a_j / sqrt(2) for the quorum built
/// from `basis`. Throws if any p_j falls outside [0, 1], naming the offending
/// element (the quorum is not universally valid for p >= 3).
Eigen::VectorXd ortho_quorum_probabilities(const DensityMatrix& rho, const HermitianBasis& basis);

/// Eigenvalues of rho sorted in descending order: the outcome distribution of
/// the error-optimal von Neumann measurement (the state's own eigenbasis).
Eigen::VectorXd eigenbasis_probabilities(const DensityMatrix& rho);

}  // namespace tomoinfo
