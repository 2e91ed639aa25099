#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tomoinfo/density_matrix.hpp"
#include "tomoinfo/estimators.hpp"
#include "tomoinfo/measurement.hpp"
#include "tomoinfo/random.hpp"

namespace tomoinfo {

enum class EstimatorKind { direct, direct_projected, ml, ortho_inv };

std::string to_string(EstimatorKind e);
EstimatorKind estimator_from_string(const std::string& name);

/// Truth state for an experiment: either a fixed matrix or a seeded random
/// state drawn once per experiment (not per trial).
struct StateSpec {
  std::optional<DensityMatrix> fixed;
  StateKind kind = StateKind::purity_target;
  double lambda = 1.0;
};

struct ExperimentConfig {
  int dim = 2;
  Scheme scheme = Scheme::mub;
  EstimatorKind estimator = EstimatorKind::direct;
  long long shots = 100;
  long long trials = 1000;
  StateSpec state;
  std::uint64_t base_seed = 0;
  int jobs = 1;
  /// When true, non-converged ML trials are dropped from the summary moments
  /// (they are always counted in ml_nonconverged_count either way).
  bool exclude_nonconverged = false;
  MlOptions ml;
};

struct TrialRow {
  long long trial = 0;
  std::uint64_t seed = 0;
  double d = 0.0;              // squared Hilbert-Schmidt error of this trial
  bool converged = true;       // ML convergence; true for non-ML estimators
  double min_eigenvalue = 0.0; // of the (pre-projection) estimate
};

struct SummaryStats {
  double mean_d = 0.0;
  double std_error_of_mean = 0.0;
  Eigen::VectorXd coord_mean_sq_dev;  // <(a_hat_k - a_k)^2> per coordinate
  long long trials_used = 0;
  long long nonphysical_count = 0;    // trials whose raw estimate had min eig < 0
  long long ml_nonconverged_count = 0;
};

struct TrialsOutput {
  SummaryStats summary;
  std::vector<TrialRow> rows;  // in trial order, independent of `jobs`
};

/// Repeats simulate-measure-estimate `trials` times against one fixed truth
/// and aggregates the squared Hilbert-Schmidt error. Deterministic for a given
/// config: the truth uses split_seed(base_seed, 0), trial t uses
/// split_seed(base_seed, t + 1), and results are reduced in trial order in
/// fixed-size chunks, so the output is identical for every `jobs` value.
SummaryStats run_trials(const ExperimentConfig& config);

/// run_trials plus the per-trial rows (for CSV emission).
TrialsOutput run_trials_detailed(const ExperimentConfig& config);

enum class ScanQuantity { bz_error, crb_gauss, crb_multinomial, ortho_error };

std::string to_string(ScanQuantity q);
ScanQuantity scan_quantity_from_string(const std::string& name);

struct ScanPoint {
  int index = 0;
  double value = 0.0;
};

struct ScanResult {
  std::vector<ScanPoint> values;  // evaluated points only
  double min_value = 0.0;
  double max_value = 0.0;
  double mean_value = 0.0;
  double relative_spread = 0.0;   // (max - min) / mean
  long long skipped = 0;          // points outside a quantity's domain
};

/// Evaluates `quantity` on n_unitaries unitary rotations U_i rho U_i^dag of a
/// purity-target state (lambda, seeded from base_seed) and reports the spread.
/// bz_error and crb over MUBs are invariant; crb for p >= 3 and the quorum
/// error domain are not, which is exactly what the spread exposes.
ScanResult invariance_scan(int dim, double lambda, int n_unitaries, ScanQuantity quantity,
                           std::uint64_t base_seed, long long shots);

struct SweepRow {
  long long shots = 0;
  double n_mean_d_ml = 0.0;          // N <d> for the ML estimator
  double n_crb_multinomial = 0.0;    // N Tr F^{-1}, exact multinomial form
  double ratio = 0.0;                // n_mean_d_ml / n_crb_multinomial
  double n_mean_d_direct = 0.0;      // N <d> for direct inversion
  double bz_error = 0.0;             // E = N <d>_direct in expectation
  double ml_std_error = 0.0;         // std error of n_mean_d_ml
  double direct_std_error = 0.0;     // std error of n_mean_d_direct
};

/// ML-versus-bound sweep over ascending shot counts N, MUB scheme, fixed
/// truth. The ratio column approaching 1 from above is Cramer-Rao saturation;
/// the direct columns sit at the Brukner-Zeilinger error for every N.
std::vector<SweepRow> crb_saturation_sweep(int dim, const DensityMatrix& truth,
                                           const std::vector<long long>& shots_list,
                                           long long trials, std::uint64_t base_seed,
                                           int jobs);

}  // namespace tomoinfo
