#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "test_helpers.hpp"
#include "tomoinfo/estimators.hpp"
#include "tomoinfo/measurement.hpp"
#include "tomoinfo/mub.hpp"
#include "tomoinfo/random.hpp"

using namespace tomoinfo;
using namespace tomoinfo::testing;

namespace {

std::vector<std::vector<double>> rows_of(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> rows(m.rows());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows[r].assign(m.row(r).begin(), m.row(r).end());
  }
  return rows;
}

MeasurementRecord mub_record(const DensityMatrix& rho, const MubSet& set, long long shots,
                             std::uint64_t seed) {
  return sample_counts(Scheme::mub, rho.dim(), rows_of(mub_probabilities(rho, set)), shots,
                       seed);
}

MeasurementRecord ortho_record(const DensityMatrix& rho, const HermitianBasis& basis,
                               long long shots, std::uint64_t seed) {
  const Eigen::VectorXd p = ortho_quorum_probabilities(rho, basis);
  std::vector<std::vector<double>> rows(p.size());
  for (Eigen::Index j = 0; j < p.size(); ++j) rows[j] = {p[j], 1.0 - p[j]};
  return sample_counts(Scheme::ortho, rho.dim(), rows, shots, seed);
}

}  // namespace

TEST_CASE("direct_inversion recovers exact-frequency records") {
  const MubSet set2 = build_mub(2);
  // Counts (3,1), (2,2), (2,2) at N=4: frequencies match diag(3/4, 1/4).
  const MeasurementRecord rec{2, Scheme::mub, 4, {{3, 1}, {2, 2}, {2, 2}}};
  const DensityMatrix est = direct_inversion(rec, set2);
  Eigen::Matrix2cd expected;
  expected << 0.75, 0, 0, 0.25;
  CHECK(max_abs(est.matrix() - expected) <= 1e-12);

  // p=3 diagonal truth with rational spectrum: counts are noise-free.
  const MubSet set3 = build_mub(3);
  const MeasurementRecord rec3{3, Scheme::mub, 6,
                               {{3, 2, 1}, {2, 2, 2}, {2, 2, 2}, {2, 2, 2}}};
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(3, 3);
  diag(0, 0) = 0.5;
  diag(1, 1) = 1.0 / 3.0;
  diag(2, 2) = 1.0 / 6.0;
  CHECK(max_abs(direct_inversion(rec3, set3).matrix() - diag) <= 1e-12);

  // Uniform counts reconstruct I/3 exactly.
  const MeasurementRecord flat{3, Scheme::mub, 3, {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}}};
  CHECK(max_abs(direct_inversion(flat, set3).matrix() -
                Eigen::MatrixXcd::Identity(3, 3) / 3.0) <= 1e-12);
}

TEST_CASE("direct_inversion of all-(N,0) qubit counts is the known unphysical matrix") {
  const MubSet set = build_mub(2);
  const MeasurementRecord rec{2, Scheme::mub, 10, {{10, 0}, {10, 0}, {10, 0}}};
  const DensityMatrix est = direct_inversion(rec, set);
  CHECK(est.min_eigenvalue() == doctest::Approx((1.0 - std::sqrt(3.0)) / 2.0).epsilon(1e-12));
  CHECK(purity(est) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("direct_inversion reproduces the sampled frequencies") {
  const MubSet set = build_mub(3);
  const DensityMatrix truth = interior_state(3, 5);
  const MeasurementRecord rec = mub_record(truth, set, 60, 99);
  const DensityMatrix est = direct_inversion(rec, set);
  const Eigen::MatrixXd model = mub_probabilities(DensityMatrix::unchecked(est.matrix()), set);
  for (int b = 0; b < 4; ++b) {
    for (int j = 0; j < 3; ++j) {
      const double f = static_cast<double>(rec.counts[b][j]) / 60.0;
      CHECK(std::abs(model(b, j) - f) <= 1e-12);
    }
  }
}

TEST_CASE("direct_inversion is unbiased") {
  const MubSet set = build_mub(2);
  const HermitianBasis basis = gell_mann_basis(2);
  const DensityMatrix truth = random_state(2, StateKind::purity_target, 12, 0.6);
  const Eigen::VectorXd a_true = bloch_coords(truth, basis).coords;

  const int trials = 100000;
  const long long shots = 10;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(3);
  for (int t = 0; t < trials; ++t) {
    const MeasurementRecord rec = mub_record(truth, set, shots, split_seed(500, t));
    const Eigen::VectorXd a = bloch_coords(direct_inversion(rec, set), basis).coords;
    sum += a;
    sum_sq += a.cwiseProduct(a);
  }
  for (int k = 0; k < 3; ++k) {
    const double mean = sum[k] / trials;
    const double var = sum_sq[k] / trials - mean * mean;
    const double se = std::sqrt(var / trials);
    CHECK(std::abs(mean - a_true[k]) <= 4.0 * se);
  }
}

TEST_CASE("direct_inversion is equivariant under set rotation") {
  const MubSet set = build_mub(3);
  const Eigen::MatrixXcd u = random_unitary(3, 77);
  const MubSet rotated = set.rotated(u);
  const DensityMatrix truth = interior_state(3, 6);
  const MeasurementRecord rec = mub_record(truth, set, 50, 1234);

  const Eigen::MatrixXcd direct = direct_inversion(rec, set).matrix();
  const Eigen::MatrixXcd conj = direct_inversion(rec, rotated).matrix();
  CHECK(max_abs(conj - u * direct * u.adjoint()) <= 1e-12);
}

TEST_CASE("project_to_physical fixes unphysical estimates and keeps physical ones") {
  const DensityMatrix physical = random_state(3, StateKind::hs_mixed, 21);
  CHECK(max_abs(project_to_physical(physical).matrix() - physical.matrix()) <= 1e-12);

  Eigen::Matrix2cd indefinite;
  indefinite << 1.2, 0, 0, -0.2;
  Eigen::Matrix2cd clipped;
  clipped << 1.0, 0, 0, 0.0;
  CHECK(max_abs(project_to_physical(DensityMatrix::unchecked(indefinite)).matrix() -
                clipped) <= 1e-12);

  // The all-(N,0) qubit estimate projects onto the pure state along the same axis.
  const MubSet set = build_mub(2);
  const MeasurementRecord rec{2, Scheme::mub, 10, {{10, 0}, {10, 0}, {10, 0}}};
  const DensityMatrix raw = direct_inversion(rec, set);
  const DensityMatrix proj = project_to_physical(raw);
  const double s = 1.0 / std::sqrt(3.0);
  const Eigen::Matrix2cd expected =
      0.5 * (Eigen::Matrix2cd::Identity() + s * (pauli_x() - pauli_y() + pauli_z()));
  CHECK(max_abs(proj.matrix() - expected) <= 1e-12);
  CHECK(purity(proj) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(proj.min_eigenvalue() >= -1e-12);

  // No physical candidate sits closer to the raw estimate.
  const DensityMatrix mixed = DensityMatrix::physical(Eigen::Matrix2cd::Identity() / 2.0);
  CHECK(hs_distance(proj, raw) <= hs_distance(mixed, raw) + 1e-12);
}

TEST_CASE("ortho_inversion recovers exact-frequency records") {
  const HermitianBasis basis = gell_mann_basis(2);
  // Probabilities (1/2, 1/2, 3/4) for diag(3/4, 1/4).
  const MeasurementRecord rec{2, Scheme::ortho, 4, {{2, 2}, {2, 2}, {3, 1}}};
  Eigen::Matrix2cd expected;
  expected << 0.75, 0, 0, 0.25;
  CHECK(max_abs(ortho_inversion(rec, basis).matrix() - expected) <= 1e-12);

  const MeasurementRecord fair{2, Scheme::ortho, 4, {{2, 2}, {2, 2}, {2, 2}}};
  CHECK(max_abs(ortho_inversion(fair, basis).matrix() -
                Eigen::MatrixXcd::Identity(2, 2) / 2.0) <= 1e-12);
}

TEST_CASE("ortho_inversion coordinate variance is 2 p (1 - p) / N") {
  const HermitianBasis basis = gell_mann_basis(2);
  Eigen::Matrix2cd m;
  m << 0.75, 0, 0, 0.25;
  const DensityMatrix truth = DensityMatrix::physical(m);
  const long long shots = 25;
  const int trials = 10000;

  std::vector<double> a2(trials);
  for (int t = 0; t < trials; ++t) {
    const MeasurementRecord rec = ortho_record(truth, basis, shots, split_seed(808, t));
    a2[t] = bloch_coords(ortho_inversion(rec, basis), basis).coords[2];
  }
  double mean = 0.0;
  for (double v : a2) mean += v;
  mean /= trials;
  double var = 0.0, m4 = 0.0;
  for (double v : a2) {
    const double d = v - mean;
    var += d * d;
    m4 += d * d * d * d;
  }
  var /= trials - 1;
  m4 /= trials;
  const double se_var = std::sqrt(std::max(0.0, m4 - var * var) / trials);
  const double expected = 2.0 * 0.75 * 0.25 / shots;
  CHECK(std::abs(var - expected) <= 3.0 * se_var);
}

TEST_CASE("ml_estimate reaches the truth on a noise-free interior record") {
  const MubSet set = build_mub(2);
  const MeasurementRecord rec{2, Scheme::mub, 4, {{3, 1}, {2, 2}, {2, 2}}};
  Eigen::Matrix2cd m;
  m << 0.75, 0, 0, 0.25;
  const DensityMatrix truth = DensityMatrix::physical(m);

  std::vector<double> history;
  MlOptions options;
  options.ll_history = &history;
  const MlResult result = ml_estimate(rec, set, options);

  CHECK(result.converged);
  CHECK_FALSE(result.probability_floored);
  CHECK(hs_distance(result.state, truth) <= 1e-6);
  CHECK(result.state.min_eigenvalue() >= -1e-12);
  CHECK(std::abs(result.state.matrix().trace() - 1.0) <= 1e-12);

  REQUIRE(!history.empty());
  for (std::size_t i = 1; i < history.size(); ++i) {
    CHECK(history[i] >= history[i - 1]);
  }
  CHECK(history.back() == doctest::Approx(result.log_likelihood));
}

TEST_CASE("ml_estimate stays physical on boundary-pushing records") {
  const MubSet set = build_mub(2);
  const MeasurementRecord rec{2, Scheme::mub, 10, {{10, 0}, {10, 0}, {10, 0}}};
  const MlResult result = ml_estimate(rec, set);
  CHECK(result.converged);
  CHECK(result.state.min_eigenvalue() >= -1e-12);
  CHECK(std::abs(result.state.matrix().trace() - 1.0) <= 1e-12);
  // The raw inversion of this record is far outside the state space.
  CHECK(purity(result.state) <= 1.0 + 1e-12);
}

TEST_CASE("ml_estimate handles the two-outcome quorum") {
  const HermitianBasis basis = gell_mann_basis(2);
  const OrthoQuorum quorum = ortho_quorum(2, basis);
  const MeasurementRecord rec{2, Scheme::ortho, 4, {{2, 2}, {2, 2}, {3, 1}}};
  Eigen::Matrix2cd m;
  m << 0.75, 0, 0, 0.25;
  const MlResult result = ml_estimate(rec, quorum, {});
  CHECK(result.converged);
  CHECK(hs_distance(result.state, DensityMatrix::physical(m)) <= 1e-6);
}

TEST_CASE("ml_estimate validates its options") {
  const MubSet set = build_mub(2);
  const MeasurementRecord rec{2, Scheme::mub, 4, {{3, 1}, {2, 2}, {2, 2}}};
  MlOptions bad;
  bad.max_iter = 0;
  CHECK_THROWS_AS(ml_estimate(rec, set, bad), std::invalid_argument);
  bad = {};
  bad.tol = 0.0;
  CHECK_THROWS_AS(ml_estimate(rec, set, bad), std::invalid_argument);
  bad = {};
  bad.dilution = 0.0;
  CHECK_THROWS_AS(ml_estimate(rec, set, bad), std::invalid_argument);
  bad = {};
  bad.dilution = 1.5;
  CHECK_THROWS_AS(ml_estimate(rec, set, bad), std::invalid_argument);
}

TEST_CASE("ml_estimate beats or matches direct inversion at high N") {
  const MubSet set = build_mub(2);
  const DensityMatrix truth = random_state(2, StateKind::purity_target, 40, 0.0);
  const long long shots = 10000;
  const int trials = 400;

  int wins = 0;
  double ml_mean = 0.0, direct_mean = 0.0;
  for (int t = 0; t < trials; ++t) {
    const MeasurementRecord rec = mub_record(truth, set, shots, split_seed(900, t));
    const double d_ml = hs_distance(ml_estimate(rec, set).state, truth);
    const double d_direct = hs_distance(direct_inversion(rec, set), truth);
    if (d_ml <= d_direct) ++wins;
    ml_mean += d_ml;
    direct_mean += d_direct;
  }
  ml_mean /= trials;
  direct_mean /= trials;

  CHECK(wins >= static_cast<int>(0.6 * trials));
  CHECK(ml_mean <= direct_mean);
}

TEST_CASE("estimators reject mismatched records") {
  const MubSet set = build_mub(2);
  const HermitianBasis basis = gell_mann_basis(2);
  const MeasurementRecord ortho{2, Scheme::ortho, 4, {{2, 2}, {2, 2}, {3, 1}}};
  CHECK_THROWS_AS(direct_inversion(ortho, set), std::invalid_argument);
  CHECK_THROWS_AS(ml_estimate(ortho, set), std::invalid_argument);

  const MeasurementRecord mub{2, Scheme::mub, 4, {{3, 1}, {2, 2}, {2, 2}}};
  CHECK_THROWS_AS(ortho_inversion(mub, basis), std::invalid_argument);

  const MeasurementRecord wrong_dim{3, Scheme::mub, 4,
                                    {{2, 1, 1}, {2, 1, 1}, {2, 1, 1}, {2, 1, 1}}};
  CHECK_THROWS_AS(direct_inversion(wrong_dim, set), std::invalid_argument);
}
