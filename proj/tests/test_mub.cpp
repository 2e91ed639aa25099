#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "test_helpers.hpp"
#include "tomoinfo/mub.hpp"
#include "tomoinfo/random.hpp"

using namespace tomoinfo;
using namespace tomoinfo::testing;

TEST_CASE("build_mub(2) is the Z, X, Y eigenbasis triple") {
  const MubSet set = build_mub(2);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  CHECK(max_abs(set.projector(0, 0) - 0.5 * (id + pauli_z())) <= 1e-14);
  CHECK(max_abs(set.projector(0, 1) - 0.5 * (id - pauli_z())) <= 1e-14);
  CHECK(max_abs(set.projector(1, 0) - 0.5 * (id + pauli_x())) <= 1e-14);
  CHECK(max_abs(set.projector(1, 1) - 0.5 * (id - pauli_x())) <= 1e-14);
  CHECK(max_abs(set.projector(2, 0) - 0.5 * (id - pauli_y())) <= 1e-14);
  CHECK(max_abs(set.projector(2, 1) - 0.5 * (id + pauli_y())) <= 1e-14);
}

TEST_CASE("build_mub passes complementarity for p in {2,3,5,7}") {
  for (int p : {2, 3, 5, 7}) {
    CAPTURE(p);
    const ComplementarityReport report = verify_complementarity(build_mub(p));
    CHECK(report.pass);
    CHECK(report.max_deviation <= 1e-12);
  }
}

TEST_CASE("build_mub rejects non-prime or unsupported dimensions") {
  for (int p : {1, 4, 6, 8, 9, 11}) {
    CAPTURE(p);
    try {
      build_mub(p);
      FAIL("expected an exception for p = " << p);
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("unsupported dimension") != std::string::npos);
    }
  }
}

TEST_CASE("verify_complementarity fails a duplicated basis") {
  const MubSet good = build_mub(3);
  std::vector<Eigen::MatrixXcd> projectors;
  for (int b = 0; b < good.n_bases(); ++b) {
    for (int j = 0; j < 3; ++j) {
      // Replace basis 1 with a copy of the computational basis.
      projectors.push_back(good.projector(b == 1 ? 0 : b, j));
    }
  }
  const MubSet broken = MubSet::from_projectors(3, std::move(projectors));
  const ComplementarityReport report = verify_complementarity(broken);
  CHECK_FALSE(report.pass);
  CHECK(report.max_deviation == doctest::Approx(1.0 - 1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("from_projectors rejects matrices that are not rank-1 projectors") {
  std::vector<Eigen::MatrixXcd> projectors(6, Eigen::MatrixXcd::Identity(2, 2) / 2.0);
  CHECK_THROWS_AS(MubSet::from_projectors(2, std::move(projectors)), std::invalid_argument);
}

TEST_CASE("a rotated set is again complementary") {
  for (int p : {2, 3, 5}) {
    const MubSet rotated = build_mub(p).rotated(random_unitary(p, 314));
    const ComplementarityReport report = verify_complementarity(rotated);
    CHECK(report.pass);
    CHECK(report.max_deviation <= 1e-11);
  }
}

TEST_CASE("mco_weights reference values") {
  const MubSet set2 = build_mub(2);

  const DensityMatrix mixed = DensityMatrix::physical(Eigen::MatrixXcd::Identity(2, 2) / 2.0);
  const McoWeights wm = mco_weights(mixed, set2);
  for (int b = 0; b < 3; ++b) {
    for (int j = 0; j < 2; ++j) {
      CHECK(wm.weights(b, j) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    }
  }

  const DensityMatrix zero = DensityMatrix::physical(basis_projector(2, 0));
  const McoWeights wz = mco_weights(zero, set2);
  CHECK(wz.weights(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(wz.weights(0, 1) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  for (int b = 1; b < 3; ++b) {
    for (int j = 0; j < 2; ++j) {
      CHECK(wz.weights(b, j) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    }
  }

  // Each row sums to 1 - p/(p+1) = 1/(p+1).
  for (int b = 0; b < 3; ++b) {
    CHECK(wz.weights.row(b).sum() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("weights are equivariant under joint rotation of state and set") {
  const MubSet set = build_mub(3);
  const Eigen::MatrixXcd u = random_unitary(3, 2024);
  const DensityMatrix rho = random_state(3, StateKind::hs_mixed, 8);
  const DensityMatrix rotated = DensityMatrix::physical(u * rho.matrix() * u.adjoint());

  const McoWeights base = mco_weights(rho, set);
  const McoWeights conj = mco_weights(rotated, set.rotated(u));
  CHECK((base.weights - conj.weights).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("state_from_weights inverts mco_weights") {
  for (int p : {2, 3, 5}) {
    const MubSet set = build_mub(p);
    for (std::uint64_t s = 0; s < 4; ++s) {
      const DensityMatrix rho = random_state(p, StateKind::hs_mixed, split_seed(33, s));
      const DensityMatrix back = state_from_weights(mco_weights(rho, set), set);
      CHECK(max_abs(rho.matrix() - back.matrix()) <= 1e-12);
    }
  }
}

TEST_CASE("all-equal weights reconstruct the maximally mixed state") {
  const MubSet set = build_mub(3);
  McoWeights w{3, Eigen::MatrixXd::Constant(4, 3, 1.0 / 12.0)};
  const DensityMatrix rho = state_from_weights(w, set);
  CHECK(max_abs(rho.matrix() - Eigen::MatrixXcd::Identity(3, 3) / 3.0) <= 1e-12);
}

TEST_CASE("extreme frequencies reconstruct an unphysical matrix") {
  // Frequencies (1, 0) in all three qubit bases: w = (2/3, -1/3) per basis.
  const MubSet set = build_mub(2);
  Eigen::MatrixXd w(3, 2);
  w << 2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0;
  const DensityMatrix rho = state_from_weights(McoWeights{2, w}, set);
  CHECK(rho.min_eigenvalue() ==
        doctest::Approx((1.0 - std::sqrt(3.0)) / 2.0).epsilon(1e-12));
  CHECK(purity(rho) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("total error: sum and closed form agree and hit reference values") {
  const MubSet set2 = build_mub(2);
  const DensityMatrix pure = DensityMatrix::physical(basis_projector(2, 0));
  const BzError pure_err = bz_total_error(pure, set2);
  CHECK(pure_err.sum_form == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pure_err.closed_form == doctest::Approx(1.0).epsilon(1e-12));

  const MubSet set3 = build_mub(3);
  const DensityMatrix mixed3 = DensityMatrix::physical(Eigen::MatrixXcd::Identity(3, 3) / 3.0);
  const BzError mixed_err = bz_total_error(mixed3, set3);
  CHECK(mixed_err.sum_form == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
  CHECK(mixed_err.closed_form == doctest::Approx(8.0 / 3.0).epsilon(1e-12));

  const MubSet set5 = build_mub(5);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const DensityMatrix rho = random_state(5, StateKind::hs_mixed, split_seed(44, s));
    const BzError err = bz_total_error(rho, set5);
    CHECK(std::abs(err.sum_form - err.closed_form) <= 1e-10);
  }
}

TEST_CASE("total error is invariant under rotations of state or set") {
  const MubSet set = build_mub(3);
  const DensityMatrix rho = random_state(3, StateKind::purity_target, 17, 0.8);
  const double reference = bz_total_error(rho, set).sum_form;

  for (std::uint64_t s = 0; s < 20; ++s) {
    const Eigen::MatrixXcd u = random_unitary(3, split_seed(55, s));
    const DensityMatrix rotated = DensityMatrix::physical(u * rho.matrix() * u.adjoint());
    CHECK(std::abs(bz_total_error(rotated, set).sum_form - reference) <= 1e-10);
    CHECK(std::abs(bz_total_error(rho, set.rotated(u)).sum_form - reference) <= 1e-10);
  }
}

TEST_CASE("invariant_information reference values") {
  const DensityMatrix pure = DensityMatrix::physical(basis_projector(3, 1));
  CHECK(invariant_information(pure) == doctest::Approx(1.0).epsilon(1e-12));

  const DensityMatrix mixed = DensityMatrix::physical(Eigen::MatrixXcd::Identity(5, 5) / 5.0);
  CHECK(std::abs(invariant_information(mixed)) <= 1e-12);

  // Tr rho^2 = 5/8 at p=2 normalizes to (5/8 - 1/2)/(1/2) = 1/4.
  const DensityMatrix half = random_state(2, StateKind::purity_target, 3, 0.5);
  CHECK(invariant_information(half) == doctest::Approx(0.25).epsilon(1e-12));

  const Eigen::MatrixXcd u = random_unitary(5, 8);
  const DensityMatrix rho = random_state(5, StateKind::hs_mixed, 9);
  const DensityMatrix rotated = DensityMatrix::physical(u * rho.matrix() * u.adjoint());
  CHECK(std::abs(invariant_information(rotated) - invariant_information(rho)) <= 1e-12);
}
