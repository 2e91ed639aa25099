#pragma once

#include <Eigen/Dense>

#include "tomoinfo/density_matrix.hpp"
#include "tomoinfo/hermitian_basis.hpp"
#include "tomoinfo/measurement.hpp"
#include "tomoinfo/mub.hpp"

namespace tomoinfo {

enum class FisherForm { gaussian, multinomial };

/// Fisher information in the Bloch coordinates a_k, shape (p^2-1) x (p^2-1).
struct FisherMatrix {
  int dim = 0;
  long long shots = 0;
  FisherForm form = FisherForm::gaussian;
  Eigen::MatrixXd entries;
};

/// Gaussian-approximated log-likelihood -N^2 sum (f - p)^2 / sigma^2 with
/// sigma^2 = N p (1 - p), summed entrywise over matching layouts. Zero iff
/// f = p; always <= 0. Throws if any probability is outside (0, 1).
double log_likelihood_gaussian(const Eigen::MatrixXd& frequencies,
                               const Eigen::MatrixXd& probabilities, long long shots);

/// Gaussian-form Fisher matrix
///   F_kl = N^2 sum_o Tr{Gamma_k Pi_o} Tr{Gamma_l Pi_o} / sigma_o^2
/// with each registered outcome treated as an independent Gaussian of
/// variance sigma^2 = N p (1 - p). For a MUB set the sum runs over all
/// p (p + 1) projectors; for the two-outcome quorum it runs over the p^2 - 1
/// elements. Requires every probability in (delta, 1 - delta), delta = 1e-9.
FisherMatrix fisher_gaussian(const DensityMatrix& rho, const MubSet& set,
                             const HermitianBasis& basis, long long shots);
FisherMatrix fisher_gaussian(const DensityMatrix& rho, const OrthoQuorum& quorum,
                             const HermitianBasis& basis, long long shots);

/// Exact multinomial Fisher matrix
///   F_kl = N sum_obs sum_outcomes (dp/da_k)(dp/da_l) / p
/// with dp_o/da_k = Tr{Gamma_k Pi_o}. Two-outcome elements contribute both
/// outcomes {Pi, 1 - Pi}. Same interior-domain requirement as the Gaussian
/// form.
FisherMatrix fisher_multinomial(const DensityMatrix& rho, const MubSet& set,
                                const HermitianBasis& basis, long long shots);
FisherMatrix fisher_multinomial(const DensityMatrix& rho, const OrthoQuorum& quorum,
                                const HermitianBasis& basis, long long shots);

struct CrbResult {
  double trace_inverse = 0.0;    // Tr F^{-1}: Cramer-Rao lower bound on <d>
  double condition_number = 0.0; // lambda_max / lambda_min of F
  bool reliable = true;          // false when condition_number > 1e12
};

/// Tr F^{-1} via the eigendecomposition of the symmetrized F. Throws if F is
/// singular or indefinite (lambda_min <= 0).
CrbResult crb_trace(const FisherMatrix& fisher);

/// Closed-form optimal mean error for p = 3 MUB tomography:
///   <d>_opt = (1/N^2) sum_aj sigma_aj^2
///           - (1/N^2) sum_a (sum_j sigma_aj^4) / (sum_j sigma_aj^2).
/// Equals crb_trace(fisher_gaussian(...)) for interior states.
double fisher_p3_closed_form(const DensityMatrix& rho, const MubSet& set, long long shots);

/// Principal-axis decomposition of the Cramer-Rao error ellipsoid. The
/// per-axis error variances 1/lambda sum to Tr F^{-1}; the likelihood
/// contour's geometric half-axes are 1/sqrt(lambda). Both are reported.
struct ErrorEllipsoid {
  Eigen::VectorXd eigenvalues;        // of F, descending
  Eigen::MatrixXd axes;               // columns: corresponding eigenvectors
  Eigen::VectorXd half_axis_scales;   // 1/lambda, per-axis error variances
  Eigen::VectorXd contour_half_axes;  // 1/sqrt(lambda), geometric half-axes
};

ErrorEllipsoid error_ellipsoid(const FisherMatrix& fisher);

/// Mean reconstruction error of the two-outcome quorum, two ways that agree
/// for any state in the quorum's domain:
///   sum form    (2/N^2) sum_j sigma_j^2,  sigma_j^2 = N p_j (1 - p_j)
///   closed form [ (p^2 - 1)/2 + 1/p - Tr{rho^2} ] / N.
struct OrthoError {
  double sum_form = 0.0;
  double closed_form = 0.0;
};

OrthoError ortho_quorum_error(const DensityMatrix& rho, long long shots);

/// N-independent optimal error of the eigenbasis measurement:
///   N <d> = sum_j lambda_j (1 - lambda_j) = 1 - Tr{rho^2}.
double eigenbasis_error(const DensityMatrix& rho);

}  // namespace tomoinfo
