#pragma once

#include <vector>

#include "tomoinfo/density_matrix.hpp"
#include "tomoinfo/hermitian_basis.hpp"
#include "tomoinfo/measurement.hpp"
#include "tomoinfo/mub.hpp"

namespace tomoinfo {

/// Linear inversion over the MUB projectors: w_aj = f_aj - 1/(p+1) with
/// empirical frequencies f = n/N, reconstructed as sum w_aj Pi_aj. Unbiased;
/// the output may be unphysical (negative eigenvalues) at finite N.
DensityMatrix direct_inversion(const MeasurementRecord& record, const MubSet& set);

/// Nearest physical state in Hilbert-Schmidt distance: eigenvalues are
/// projected onto the probability simplex (uniform shift, clip at zero),
/// eigenvectors kept. Physical inputs pass through unchanged.
DensityMatrix project_to_physical(const DensityMatrix& rho);

/// Linear inversion for the two-outcome quorum: a_j = (f_j - 1/2) sqrt(2),
/// reconstructed via state_from_bloch. Unbiased, possibly unphysical.
DensityMatrix ortho_inversion(const MeasurementRecord& record, const HermitianBasis& basis);

struct MlOptions {
  int max_iter = 10000;
  double tol = 1e-10;       // relative log-likelihood change at convergence
  double dilution = 0.5;    // initial step; halved whenever a step is rejected
  /// When set, accepted-iteration log-likelihoods are appended here.
  std::vector<double>* ll_history = nullptr;
};

struct MlResult {
  DensityMatrix state;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  /// True if any model probability had to be floored at 1e-12 while an
  /// outcome with nonzero count was observed there.
  bool probability_floored = false;
};

/// Maximum-likelihood estimate by the diluted fixed-point iteration
/// rho <- (1 - eps) rho + eps R rho R / Tr{R rho R},  R = sum (n_k / p_k) E_k,
/// started from I/p. Steps that would lower the log-likelihood are rejected
/// and eps is halved, so accepted log-likelihoods are non-decreasing. The
/// iterate stays Hermitian, unit-trace and positive semidefinite throughout.
MlResult ml_estimate(const MeasurementRecord& record, const MubSet& set,
                     const MlOptions& options = {});

/// Same iteration with the quorum completed to two-outcome POVMs
/// {Pi_j, 1 - Pi_j} per element.
MlResult ml_estimate(const MeasurementRecord& record, const OrthoQuorum& quorum,
                     const MlOptions& options = {});

}  // namespace tomoinfo
