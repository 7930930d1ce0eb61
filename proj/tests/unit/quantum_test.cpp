#include "tempcorr/quantum.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "tempcorr/error.hpp"
#include "test_util.hpp"

namespace tempcorr {
namespace {

using std::numbers::pi;
using testing::expect_matrix_near;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no tempcorr::Error thrown";
  return ErrorCode::InvalidState;
}

TEST(DensityMatrix, RejectsInvalidInput) {
  EXPECT_EQ(code_of([] { DensityMatrix(pauli::z()); }), ErrorCode::InvalidState);
  EXPECT_EQ(code_of([] { DensityMatrix(pauli::identity()); }), ErrorCode::InvalidState);
  EXPECT_EQ(code_of([] { DensityMatrix(CMatrix(pauli::lowering() + pauli::identity() / 2.0)); }),
            ErrorCode::InvalidState);
}

TEST(DensityMatrix, BlochRoundTrip) {
  const DensityMatrix rho = DensityMatrix::from_bloch(0.3, -0.4, 0.5);
  const Eigen::Vector3d r = rho.bloch();
  EXPECT_NEAR(r.x(), 0.3, kConstructionTol);
  EXPECT_NEAR(r.y(), -0.4, kConstructionTol);
  EXPECT_NEAR(r.z(), 0.5, kConstructionTol);
}

TEST(RotatedObservable, NamedAngles) {
  expect_matrix_near(rotated_observable(0.0).mat(), pauli::z(), kConstructionTol);
  expect_matrix_near(rotated_observable(pi / 2).mat(), pauli::x(), kConstructionTol);
  expect_matrix_near(rotated_observable(pi / 4).mat(), (pauli::z() + pauli::x()) / std::sqrt(2.0), kConstructionTol);
  expect_matrix_near(rotated_observable(3 * pi / 4).mat(), (pauli::x() - pauli::z()) / std::sqrt(2.0),
                     kConstructionTol);
  EXPECT_TRUE(rotated_observable(1.234).is_dichotomic());
}

TEST(UnsharpPovm, SharpLimitAndDiagonalEffects) {
  const Povm sharp = unsharp_povm(Axis::Z, 1.0);
  ASSERT_EQ(sharp.size(), 2u);
  expect_matrix_near(sharp.effects()[0].mat, DensityMatrix::basis(2, 0).mat(), kConstructionTol);
  expect_matrix_near(sharp.effects()[1].mat, DensityMatrix::basis(2, 1).mat(), kConstructionTol);
  EXPECT_EQ(sharp.effects()[0].outcome, 1);
  EXPECT_EQ(sharp.effects()[1].outcome, -1);

  const Povm half = unsharp_povm(Axis::Z, 0.5);
  CMatrix plus = CMatrix::Zero(2, 2);
  plus(0, 0) = 0.75;
  plus(1, 1) = 0.25;
  expect_matrix_near(half.effects()[0].mat, plus, kConstructionTol);
  expect_matrix_near(half.effects()[1].mat, pauli::identity() - plus, kConstructionTol);
  EXPECT_DOUBLE_EQ(*half.sharpness(), 0.5);
}

TEST(UnsharpPovm, XAxisAtJointMeasurabilityBoundary) {
  const double eta = 1.0 / std::sqrt(3.0);
  const Povm povm = unsharp_povm(Axis::X, eta);
  for (const Effect& e : povm.effects()) {
    const EigenSystem es = eig_hermitian(e.mat);
    EXPECT_NEAR(es.values[0], (1.0 - eta) / 2.0, kDerivedTol);
    EXPECT_NEAR(es.values[1], (1.0 + eta) / 2.0, kDerivedTol);
  }
}

TEST(UnsharpPovm, RejectsBadSharpness) {
  EXPECT_EQ(code_of([] { unsharp_povm(Axis::X, 0.0); }), ErrorCode::InvalidSharpness);
  EXPECT_EQ(code_of([] { unsharp_povm(Axis::X, 1.1); }), ErrorCode::InvalidSharpness);
  EXPECT_EQ(code_of([] { unsharp_povm(Axis::X, -0.5); }), ErrorCode::InvalidSharpness);
}

TEST(ProjectivePovm, QubitAndGroupedSpectrum) {
  const Povm pz = projective_povm(Observable(pauli::z()));
  ASSERT_EQ(pz.size(), 2u);
  EXPECT_EQ(pz.effects()[0].outcome, 1);
  expect_matrix_near(pz.effects()[0].mat, DensityMatrix::basis(2, 0).mat(), kConstructionTol);

  const Povm pq = projective_povm(rotated_observable(pi / 4));
  const Eigen::Vector3d n = rotated_axis(pi / 4);
  expect_matrix_near(pq.effects()[0].mat, DensityMatrix::from_bloch(n.x(), n.y(), n.z()).mat(), kDerivedTol);

  const CMatrix q4 = direct_sum(pauli::z(), pauli::z()) / 2.0;
  const Povm p4 = projective_povm(Observable(q4));
  ASSERT_EQ(p4.size(), 2u);
  for (const Effect& e : p4.effects()) {
    expect_matrix_near(e.mat * e.mat, e.mat, kDerivedTol);
    EXPECT_NEAR(real_trace(e.mat), 2.0, kDerivedTol);
  }
}

TEST(Luders, ExamplesFromDefinition) {
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  const Effect ground{DensityMatrix::basis(2, 0).mat(), 1};
  const LudersResult r = luders_update(mixed, ground);
  EXPECT_NEAR(r.prob, 0.5, kConstructionTol);
  expect_matrix_near(r.post.mat(), ground.mat, kConstructionTol);

  // sqrt M = diag(sqrt 0.9, sqrt 0.1): post = diag(0.9, 0.1)
  const LudersResult u = luders_update(mixed, unsharp_povm(Axis::Z, 0.8).effects()[0]);
  EXPECT_NEAR(u.prob, 0.5, kConstructionTol);
  CMatrix expect = CMatrix::Zero(2, 2);
  expect(0, 0) = 0.9;
  expect(1, 1) = 0.1;
  expect_matrix_near(u.post.mat(), expect, kConstructionTol);

  EXPECT_EQ(code_of([&] { luders_update(DensityMatrix::basis(2, 0), Effect{DensityMatrix::basis(2, 1).mat(), -1}); }),
            ErrorCode::ZeroProbabilityBranch);
}

TEST(MeasureStatistics, Examples) {
  const auto sharp = measure_statistics(DensityMatrix::maximally_mixed(2), unsharp_povm(Axis::Z, 1.0));
  ASSERT_EQ(sharp.size(), 2u);
  EXPECT_NEAR(sharp[0].prob, 0.5, kConstructionTol);
  expect_matrix_near(sharp[1].post.mat(), DensityMatrix::basis(2, 1).mat(), kConstructionTol);

  const auto unbiased = measure_statistics(DensityMatrix::basis(2, 0), unsharp_povm(Axis::X, 1.0));
  expect_matrix_near(unbiased[0].post.mat(), DensityMatrix::from_bloch(1, 0, 0).mat(), kConstructionTol);
  expect_matrix_near(unbiased[1].post.mat(), DensityMatrix::from_bloch(-1, 0, 0).mat(), kConstructionTol);

  const auto orth = measure_statistics(DensityMatrix::basis(2, 0), unsharp_povm(Axis::Z, 1.0));
  EXPECT_TRUE(orth[0].used);
  EXPECT_FALSE(orth[1].used);
  EXPECT_EQ(orth[1].prob, 0.0);
}

TEST(MeasureStatistics, UnsharpSmoothing) {
  for (double eta : {0.1, 0.5, 0.8, 1.0}) {
    const auto b = measure_statistics(DensityMatrix::maximally_mixed(2), unsharp_povm(Axis::Z, eta));
    EXPECT_NEAR(b[0].post.expectation(pauli::z()), eta, kConstructionTol);
    EXPECT_NEAR(b[1].post.expectation(pauli::z()), -eta, kConstructionTol);
  }
}

TEST(Properties, CompletenessOverRandomStates) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> eta_dist(0.05, 1.0);
  for (int k = 0; k < 100; ++k) {
    const DensityMatrix rho = testing::random_state(rng, 2);
    Eigen::Vector3d n(u(rng), u(rng), u(rng));
    n.normalize();
    const Povm povm = unsharp_povm(n, eta_dist(rng));
    double total = 0.0;
    for (const Effect& e : povm.effects()) total += rho.expectation(e.mat);
    EXPECT_NEAR(total, 1.0, kDerivedTol);
    double branch_total = 0.0;
    for (const Branch& b : measure_statistics(rho, povm)) {
      branch_total += b.prob;
      EXPECT_NEAR(real_trace(b.post.mat()), 1.0, kConstructionTol);
      EXPECT_GE(min_eigenvalue(b.post.mat()), -kPositivityTol);
    }
    EXPECT_NEAR(branch_total, 1.0, kDerivedTol);
  }
}

TEST(Properties, LudersIdempotentForProjectors) {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 50; ++k) {
    const DensityMatrix rho = testing::random_state(rng, 3);
    const Povm povm = projective_povm(Observable(testing::random_hermitian(rng, 3)));
    for (const Effect& e : povm.effects()) {
      const LudersResult once = luders_update(rho, e);
      const LudersResult twice = luders_update(once.post, e);
      EXPECT_NEAR(twice.prob, 1.0, kDerivedTol);
      expect_matrix_near(twice.post.mat(), once.post.mat(), kDerivedTol);
    }
  }
}

TEST(Properties, NoSignallingAverageForProjectiveOnMixed) {
  for (double theta : {0.0, 0.3, 1.1, 2.5}) {
    CMatrix avg = CMatrix::Zero(2, 2);
    for (const Branch& b : measure_statistics(DensityMatrix::maximally_mixed(2), projective_povm(rotated_observable(theta))))
      avg += b.prob * b.post.mat();
    expect_matrix_near(avg, pauli::identity() / 2.0, kConstructionTol);
  }
}

TEST(Povm, RejectsIncompleteSet) {
  EXPECT_EQ(code_of([] { Povm({Effect{DensityMatrix::basis(2, 0).mat(), 1}}); }), ErrorCode::InvalidEffect);
  EXPECT_EQ(code_of([] { validate_effect(Effect{2.0 * pauli::identity(), 1}); }), ErrorCode::InvalidEffect);
}

}  // namespace
}  // namespace tempcorr
