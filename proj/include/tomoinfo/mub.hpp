#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tomoinfo/density_matrix.hpp"

namespace tomoinfo {

/// A complete set of p + 1 mutually unbiased bases for prime p, stored as
/// rank-1 projectors Pi[basis][outcome]. Construction validates that each
/// projector is Hermitian and idempotent with unit trace and that projectors
/// within a basis are orthogonal; cross-basis unbiasedness is checked
/// separately by verify_complementarity so that deliberately broken sets can
/// be built for testing.
class MubSet {
public:
  /// `projectors` is basis-major: basis b, outcome j at index b * dim + j,
  /// with dim + 1 bases of dim projectors each.
  static MubSet from_projectors(int dim, std::vector<Eigen::MatrixXcd> projectors);

  int dim() const { return dim_; }
  int n_bases() const { return dim_ + 1; }
  const Eigen::MatrixXcd& projector(int basis, int outcome) const;

  /// Conjugates every projector by `unitary` (a rotated set is again a
  /// complete MUB set).
  MubSet rotated(const Eigen::MatrixXcd& unitary) const;

private:
  MubSet(int dim, std::vector<Eigen::MatrixXcd> projectors);
  int dim_;
  std::vector<Eigen::MatrixXcd> projectors_;
};

/// Complete MUB set for prime p: the computational basis plus the eigenbases
/// of the cyclic shift X combined with powers of the clock Z. Supported
/// dimensions: 2, 3, 5, 7.
MubSet build_mub(int p);

struct ComplementarityReport {
  double max_deviation = 0.0;  // worst |Tr{Pi Pi'} - expected| over all pairs
  bool pass = false;           // max_deviation <= 1e-10
};

/// Checks Tr{Pi_aj Pi_bk} = delta_ab delta_jk + (1 - delta_ab)/p for all
/// pairs of projectors.
ComplementarityReport verify_complementarity(const MubSet& set);

/// Expansion weights of a state over the MUB projectors: w_aj = p_aj - 1/(p+1)
/// where p_aj = Tr{rho Pi_aj}. Shape (p + 1) x p; each row sums to 1/(p+1).
struct McoWeights {
  int dim = 0;
  Eigen::MatrixXd weights;  // (p+1) x p
};

McoWeights mco_weights(const DensityMatrix& rho, const MubSet& set);

/// Reconstruction sum_aj w_aj Pi_aj. Exact inverse of mco_weights; positivity
/// is not checked.
DensityMatrix state_from_weights(const McoWeights& w, const MubSet& set);

/// Brukner-Zeilinger total error over a complete MUB set, computed two ways
/// that agree for any state and any complete set: the probability sum
/// sum_aj p_aj (1 - p_aj) and the closed form p - Tr{rho^2}.
struct BzError {
  double sum_form = 0.0;
  double closed_form = 0.0;
};

BzError bz_total_error(const DensityMatrix& rho, const MubSet& set);

/// Normalized invariant information (Tr{rho^2} - 1/p) / (1 - 1/p), in [0, 1].
double invariant_information(const DensityMatrix& rho);

}  // namespace tomoinfo
