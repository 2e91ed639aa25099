#include "tomoinfo/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tomoinfo/fisher.hpp"

namespace tomoinfo {

namespace {

// Fixed chunk size decouples the reduction order from the worker count, so
// summaries are byte-identical for every `jobs` value.
constexpr long long kChunk = 1024;

struct SharedSetup {
  DensityMatrix truth;
  HermitianBasis basis;
  std::optional<MubSet> set;
  std::optional<OrthoQuorum> quorum;
  std::vector<std::vector<double>> probs;
  BlochVector a_true;
  Eigen::MatrixXcd eig_vectors;  // eigen scheme: truth eigenvectors, descending
  Eigen::VectorXd eig_values;
};

struct ChunkAccum {
  double sum_d = 0.0;
  double sum_d2 = 0.0;
  Eigen::VectorXd sum_da2;
  long long used = 0;
  long long nonphysical = 0;
  long long nonconverged = 0;
};

void check_config(const ExperimentConfig& config) {
  if (config.dim < 2) throw std::invalid_argument("run_trials requires dim >= 2");
  if (config.shots < 1) throw std::invalid_argument("run_trials requires shots >= 1");
  if (config.trials < 1) throw std::invalid_argument("run_trials requires trials >= 1");
  if (config.jobs < 1) throw std::invalid_argument("run_trials requires jobs >= 1");
  const bool ok = (config.scheme == Scheme::mub &&
                   (config.estimator == EstimatorKind::direct ||
                    config.estimator == EstimatorKind::direct_projected ||
                    config.estimator == EstimatorKind::ml)) ||
                  (config.scheme == Scheme::ortho &&
                   (config.estimator == EstimatorKind::ortho_inv ||
                    config.estimator == EstimatorKind::ml)) ||
                  (config.scheme == Scheme::eigen &&
                   config.estimator == EstimatorKind::direct);
  if (!ok) {
    std::ostringstream msg;
    msg << "estimator " << to_string(config.estimator) << " is not available for scheme "
        << to_string(config.scheme);
    throw std::invalid_argument(msg.str());
  }
}

DensityMatrix resolve_truth(const ExperimentConfig& config) {
  if (config.state.fixed) {
    if (config.state.fixed->dim() != config.dim) {
      throw std::invalid_argument("configured state dimension does not match dim");
    }
    return *config.state.fixed;
  }
  return random_state(config.dim, config.state.kind, split_seed(config.base_seed, 0),
                      config.state.lambda);
}

SharedSetup make_setup(const ExperimentConfig& config) {
  SharedSetup s{resolve_truth(config), gell_mann_basis(config.dim), std::nullopt,
                std::nullopt,          {},                          {},
                {},                    {}};
  s.a_true = bloch_coords(s.truth, s.basis);
  const int p = config.dim;
  switch (config.scheme) {
    case Scheme::mub: {
      s.set = build_mub(p);
      const Eigen::MatrixXd probs = mub_probabilities(s.truth, *s.set);
      for (int a = 0; a <= p; ++a) {
        std::vector<double> row(static_cast<std::size_t>(p));
        for (int j = 0; j < p; ++j) row[static_cast<std::size_t>(j)] = probs(a, j);
        s.probs.push_back(std::move(row));
      }
      break;
    }
    case Scheme::ortho: {
      s.quorum = ortho_quorum(p, s.basis);
      const Eigen::VectorXd probs = ortho_quorum_probabilities(s.truth, s.basis);
      for (Eigen::Index j = 0; j < probs.size(); ++j) {
        s.probs.push_back({probs[j], 1.0 - probs[j]});
      }
      break;
    }
    case Scheme::eigen: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(s.truth.matrix());
      if (solver.eigenvalues().minCoeff() < -1e-10) {
        throw std::invalid_argument("eigen scheme requires a physical truth state");
      }
      s.eig_vectors.resize(p, p);
      s.eig_values.resize(p);
      std::vector<double> row(static_cast<std::size_t>(p));
      for (int j = 0; j < p; ++j) {
        // Descending order, matching eigenbasis_probabilities.
        s.eig_vectors.col(j) = solver.eigenvectors().col(p - 1 - j);
        s.eig_values[j] = std::max(solver.eigenvalues()[p - 1 - j], 0.0);
        row[static_cast<std::size_t>(j)] = s.eig_values[j];
      }
      // Round-off renormalization keeps the sampler's row-sum check happy.
      double sum = 0.0;
      for (double v : row) sum += v;
      for (double& v : row) v /= sum;
      s.probs.push_back(std::move(row));
      break;
    }
  }
  return s;
}

DensityMatrix estimate_one(const ExperimentConfig& config, const SharedSetup& s,
                           const MeasurementRecord& record, bool* converged) {
  *converged = true;
  switch (config.estimator) {
    case EstimatorKind::direct:
      if (config.scheme == Scheme::eigen) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(config.dim, config.dim);
        const double inv_n = 1.0 / static_cast<double>(record.shots);
        for (int j = 0; j < config.dim; ++j) {
          const double freq = static_cast<double>(record.counts[0][static_cast<std::size_t>(j)]) * inv_n;
          m += freq * (s.eig_vectors.col(j) * s.eig_vectors.col(j).adjoint());
        }
        m = 0.5 * (m + m.adjoint().eval());
        return DensityMatrix::unchecked(std::move(m));
      }
      return direct_inversion(record, *s.set);
    case EstimatorKind::direct_projected:
      return project_to_physical(direct_inversion(record, *s.set));
    case EstimatorKind::ml: {
      MlOptions options = config.ml;
      options.ll_history = nullptr;  // never shared across trials
      MlResult result = config.scheme == Scheme::mub ? ml_estimate(record, *s.set, options)
                                                     : ml_estimate(record, *s.quorum, options);
      *converged = result.converged;
      return result.state;
    }
    case EstimatorKind::ortho_inv:
      return ortho_inversion(record, s.basis);
  }
  throw std::invalid_argument("unknown estimator");
}

}  // namespace

std::string to_string(EstimatorKind e) {
  switch (e) {
    case EstimatorKind::direct: return "direct";
    case EstimatorKind::direct_projected: return "direct-projected";
    case EstimatorKind::ml: return "ml";
    case EstimatorKind::ortho_inv: return "ortho-inv";
  }
  throw std::invalid_argument("unknown estimator");
}

EstimatorKind estimator_from_string(const std::string& name) {
  if (name == "direct") return EstimatorKind::direct;
  if (name == "direct-projected") return EstimatorKind::direct_projected;
  if (name == "ml") return EstimatorKind::ml;
  if (name == "ortho-inv") return EstimatorKind::ortho_inv;
  throw std::invalid_argument("unknown estimator '" + name +
                              "' (expected direct, direct-projected, ml or ortho-inv)");
}

std::string to_string(ScanQuantity q) {
  switch (q) {
    case ScanQuantity::bz_error: return "bz_error";
    case ScanQuantity::crb_gauss: return "crb_gauss";
    case ScanQuantity::crb_multinomial: return "crb_multinomial";
    case ScanQuantity::ortho_error: return "ortho_error";
  }
  throw std::invalid_argument("unknown scan quantity");
}

ScanQuantity scan_quantity_from_string(const std::string& name) {
  if (name == "bz_error") return ScanQuantity::bz_error;
  if (name == "crb_gauss") return ScanQuantity::crb_gauss;
  if (name == "crb_multinomial") return ScanQuantity::crb_multinomial;
  if (name == "ortho_error") return ScanQuantity::ortho_error;
  throw std::invalid_argument(
      "unknown scan quantity '" + name +
      "' (expected bz_error, crb_gauss, crb_multinomial or ortho_error)");
}

TrialsOutput run_trials_detailed(const ExperimentConfig& config) {
  check_config(config);
  const SharedSetup setup = make_setup(config);
  const int n_coords = setup.basis.size();

  const long long trials = config.trials;
  const long long n_chunks = (trials + kChunk - 1) / kChunk;
  std::vector<TrialRow> rows(static_cast<std::size_t>(trials));
  std::vector<ChunkAccum> accums(static_cast<std::size_t>(n_chunks));
  for (auto& acc : accums) acc.sum_da2 = Eigen::VectorXd::Zero(n_coords);

  const auto process_chunk = [&](long long c) {
    ChunkAccum& acc = accums[static_cast<std::size_t>(c)];
    const long long begin = c * kChunk;
    const long long end = std::min(trials, begin + kChunk);
    for (long long t = begin; t < end; ++t) {
      const std::uint64_t seed_t = split_seed(config.base_seed, static_cast<std::uint64_t>(t) + 1);
      const MeasurementRecord record =
          sample_counts(config.scheme, config.dim, setup.probs, config.shots, seed_t);
      bool converged = true;
      const DensityMatrix estimate = estimate_one(config, setup, record, &converged);
      const double min_eig = estimate.min_eigenvalue();
      const double d = hs_distance(estimate, setup.truth);

      TrialRow& row = rows[static_cast<std::size_t>(t)];
      row.trial = t;
      row.seed = seed_t;
      row.d = d;
      row.converged = converged;
      row.min_eigenvalue = min_eig;

      if (!converged) ++acc.nonconverged;
      if (min_eig < -1e-12) ++acc.nonphysical;
      if (!converged && config.exclude_nonconverged) continue;
      const BlochVector a_hat = bloch_coords(estimate, setup.basis);
      acc.sum_d += d;
      acc.sum_d2 += d * d;
      acc.sum_da2 += (a_hat.coords - setup.a_true.coords).cwiseAbs2();
      ++acc.used;
    }
  };

  const int jobs = static_cast<int>(std::min<long long>(config.jobs, n_chunks));
  if (jobs <= 1) {
    for (long long c = 0; c < n_chunks; ++c) process_chunk(c);
  } else {
    std::atomic<long long> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          const long long c = next.fetch_add(1);
          if (c >= n_chunks) return;
          process_chunk(c);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }

  // Chunk-ordered reduction: independent of worker scheduling.
  ChunkAccum total;
  total.sum_da2 = Eigen::VectorXd::Zero(n_coords);
  for (const auto& acc : accums) {
    total.sum_d += acc.sum_d;
    total.sum_d2 += acc.sum_d2;
    total.sum_da2 += acc.sum_da2;
    total.used += acc.used;
    total.nonphysical += acc.nonphysical;
    total.nonconverged += acc.nonconverged;
  }
  if (total.used == 0) {
    throw std::runtime_error("run_trials: every trial was excluded from the summary");
  }

  TrialsOutput out;
  out.rows = std::move(rows);
  out.summary.mean_d = total.sum_d / static_cast<double>(total.used);
  if (total.used >= 2) {
    const double n = static_cast<double>(total.used);
    const double var =
        std::max(0.0, (total.sum_d2 - n * out.summary.mean_d * out.summary.mean_d) / (n - 1.0));
    out.summary.std_error_of_mean = std::sqrt(var / n);
  }
  out.summary.coord_mean_sq_dev = total.sum_da2 / static_cast<double>(total.used);
  out.summary.trials_used = total.used;
  out.summary.nonphysical_count = total.nonphysical;
  out.summary.ml_nonconverged_count = total.nonconverged;
  return out;
}

SummaryStats run_trials(const ExperimentConfig& config) {
  return run_trials_detailed(config).summary;
}

ScanResult invariance_scan(int dim, double lambda, int n_unitaries, ScanQuantity quantity,
                           std::uint64_t base_seed, long long shots) {
  if (dim < 2) throw std::invalid_argument("invariance_scan requires dim >= 2");
  if (n_unitaries < 2) throw std::invalid_argument("invariance_scan requires >= 2 unitaries");
  if (shots < 1) throw std::invalid_argument("invariance_scan requires shots >= 1");
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("invariance_scan requires purity weight in [0, 1]");
  }

  const DensityMatrix base_state =
      random_state(dim, StateKind::purity_target, split_seed(base_seed, 0), lambda);
  std::optional<MubSet> set;
  if (quantity != ScanQuantity::ortho_error) set = build_mub(dim);
  const HermitianBasis basis = gell_mann_basis(dim);

  ScanResult result;
  double sum = 0.0;
  for (int i = 0; i < n_unitaries; ++i) {
    const Eigen::MatrixXcd u = random_unitary(dim, split_seed(base_seed, static_cast<std::uint64_t>(i) + 1));
    Eigen::MatrixXcd m = u * base_state.matrix() * u.adjoint();
    m = 0.5 * (m + m.adjoint().eval());
    const DensityMatrix rho = DensityMatrix::physical(std::move(m));
    double value = 0.0;
    try {
      switch (quantity) {
        case ScanQuantity::bz_error:
          value = bz_total_error(rho, *set).sum_form;
          break;
        case ScanQuantity::crb_gauss:
          value = crb_trace(fisher_gaussian(rho, *set, basis, shots)).trace_inverse;
          break;
        case ScanQuantity::crb_multinomial:
          value = crb_trace(fisher_multinomial(rho, *set, basis, shots)).trace_inverse;
          break;
        case ScanQuantity::ortho_error:
          value = ortho_quorum_error(rho, shots).sum_form;
          break;
      }
    } catch (const std::invalid_argument&) {
      // Out of the quantity's domain for this rotation (for example a quorum
      // probability outside [0, 1]); reported, not fatal.
      ++result.skipped;
      continue;
    }
    result.values.push_back(ScanPoint{i, value});
    sum += value;
  }
  if (result.values.empty()) {
    throw std::runtime_error("invariance_scan: no rotation lay inside the quantity's domain");
  }
  result.min_value = result.values.front().value;
  result.max_value = result.values.front().value;
  for (const auto& point : result.values) {
    result.min_value = std::min(result.min_value, point.value);
    result.max_value = std::max(result.max_value, point.value);
  }
  result.mean_value = sum / static_cast<double>(result.values.size());
  result.relative_spread = (result.max_value - result.min_value) / result.mean_value;
  return result;
}

std::vector<SweepRow> crb_saturation_sweep(int dim, const DensityMatrix& truth,
                                           const std::vector<long long>& shots_list,
                                           long long trials, std::uint64_t base_seed,
                                           int jobs) {
  if (shots_list.empty()) throw std::invalid_argument("sweep requires at least one shot count");
  for (std::size_t i = 0; i < shots_list.size(); ++i) {
    if (shots_list[i] < 1) throw std::invalid_argument("sweep shot counts must be >= 1");
    if (i > 0 && shots_list[i] <= shots_list[i - 1]) {
      throw std::invalid_argument("sweep shot counts must be strictly ascending");
    }
  }
  if (trials < 2) throw std::invalid_argument("sweep requires trials >= 2");

  const MubSet set = build_mub(dim);
  const HermitianBasis basis = gell_mann_basis(dim);
  const double bz = bz_total_error(truth, set).closed_form;

  std::vector<SweepRow> rows;
  rows.reserve(shots_list.size());
  for (long long shots : shots_list) {
    ExperimentConfig config;
    config.dim = dim;
    config.scheme = Scheme::mub;
    config.shots = shots;
    config.trials = trials;
    config.state.fixed = truth;
    config.base_seed = base_seed;
    config.jobs = jobs;

    config.estimator = EstimatorKind::ml;
    const SummaryStats ml = run_trials(config);
    // Same base seed, so the direct estimator sees the same simulated records.
    config.estimator = EstimatorKind::direct;
    const SummaryStats direct = run_trials(config);

    const double n = static_cast<double>(shots);
    const double crb = crb_trace(fisher_multinomial(truth, set, basis, shots)).trace_inverse;

    SweepRow row;
    row.shots = shots;
    row.n_mean_d_ml = n * ml.mean_d;
    row.n_crb_multinomial = n * crb;
    row.ratio = row.n_mean_d_ml / row.n_crb_multinomial;
    row.n_mean_d_direct = n * direct.mean_d;
    row.bz_error = bz;
    row.ml_std_error = n * ml.std_error_of_mean;
    row.direct_std_error = n * direct.std_error_of_mean;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tomoinfo
