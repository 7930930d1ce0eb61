#include "tempcorr/oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "tempcorr/evolve.hpp"
#include "tempcorr/scenarios.hpp"
#include "tempcorr/seqcorr.hpp"

namespace tempcorr {
namespace {

using std::numbers::pi;
using std::numbers::sqrt2;

double max_gap(const JointDistribution& a, const JointDistribution& b) {
  EXPECT_EQ(a.size(), b.size());
  double worst = 0.0;
  for (const auto& [key, p] : a) worst = std::max(worst, std::abs(p - b.at(key)));
  return worst;
}

TEST(BruteForce, RepeatedSharpZ) {
  const Povm z = unsharp_povm(Axis::Z, 1.0);
  const Scenario sc(DensityMatrix::maximally_mixed(2), {alice_setting(z)}, Channel::identity(2), {z});
  EXPECT_LE(max_gap(oracle::brute_force_joint(sc, 0, 0), joint_probability(sc, 0, 0)), 1e-14);
}

TEST(BruteForce, K5ForwardCorrelators) {
  const MappedLg m = mapped_lg(5, 1.0, pi / 5);
  for (std::size_t k = 0; k + 1 < m.pairs.size(); ++k) {
    const JointDistribution p = oracle::brute_force_joint(m.scenario, m.pairs[k].first, m.pairs[k].second);
    double e = 0.0;
    for (const auto& [ab, prob] : p) e += ab.first * ab.second * prob;
    EXPECT_NEAR(e, std::cos(pi / 5), kDerivedTol);
  }
}

TEST(BruteForce, DampedSigmaXThroughIntegrator) {
  const Povm x = projective_povm(Observable(pauli::x()));
  const Scenario sc(DensityMatrix::maximally_mixed(2), {alice_setting(x)},
                    amplitude_damping_channel(0.3, pi / 4, 1.0), {x});
  const auto kraus = oracle::brute_force_joint(sc, 0, 0, oracle::Propagation::Kraus);
  const auto rk4 = oracle::brute_force_joint(sc, 0, 0, oracle::Propagation::Integrator);
  EXPECT_LE(max_gap(kraus, rk4), kPhysicsTol);
  double e = 0.0;
  for (const auto& [ab, prob] : rk4) e += ab.first * ab.second * prob;
  EXPECT_NEAR(e, 0.6086124467515095, kPhysicsTol);
}

TEST(BruteForce, RandomScenariosMatchSeqcorr) {
  std::mt19937_64 rng(20240611);
  for (int k = 0; k < 200; ++k) {
    const Scenario sc = oracle::random_scenario(rng);
    for (std::size_t i = 0; i < sc.alice().size(); ++i)
      for (std::size_t j = 0; j < sc.bob().size(); ++j) {
        const JointDistribution ref = joint_probability(sc, i, j);
        const JointDistribution brute = oracle::brute_force_joint(sc, i, j);
        double total = 0.0;
        for (const auto& [ab, p] : brute) total += p;
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_LE(max_gap(brute, ref), kDerivedTol) << "scenario " << k;
        EXPECT_LE(max_gap(oracle::brute_force_joint(sc, i, j, oracle::Propagation::Integrator), ref), kPhysicsTol)
            << "scenario " << k;
      }
  }
}

TEST(Extremal, KnownMaxima) {
  const oracle::GridSpec spec{{{0.0, pi}}, 200, 1e-6};
  const auto chsh = oracle::extremal_search("temporal_chsh", spec);
  EXPECT_NEAR(chsh.best_value, 2 * sqrt2, 1e-5);
  const auto steer = oracle::extremal_search("steering_sum", spec);
  EXPECT_NEAR(steer.best_value, 2 * sqrt2, 1e-5);
  const auto k5 = oracle::extremal_search("k5", spec);
  EXPECT_NEAR(k5.best_value, 4.045084971874737, 1e-5);
  const auto k6 = oracle::extremal_search("k6", spec);
  EXPECT_NEAR(k6.best_value, 5.196152422706632, 1e-5);
}

TEST(Extremal, StableUnderRefinement) {
  for (const char* name : {"temporal_chsh", "k5"}) {
    const auto coarse = oracle::extremal_search(name, oracle::GridSpec{{{0.0, pi}}, 200, 1e-6});
    const auto fine = oracle::extremal_search(name, oracle::GridSpec{{{0.0, pi}}, 400, 1e-6});
    EXPECT_LT(std::abs(coarse.best_value - fine.best_value), 1e-6) << name;
  }
}

TEST(Extremal, TwoParameterObjective) {
  // max of cos(a) + cos(b - 1) is 2 at (0, 1)
  const oracle::Objective f = [](std::span<const double> p) { return std::cos(p[0]) + std::cos(p[1] - 1.0); };
  const auto r = oracle::extremal_search(f, oracle::GridSpec{{{-2.0, 2.0}, {-2.0, 2.0}}, 200, 1e-8});
  EXPECT_NEAR(r.best_value, 2.0, 1e-10);
  EXPECT_NEAR(r.best_params[0], 0.0, 1e-6);
  EXPECT_NEAR(r.best_params[1], 1.0, 1e-6);
}

TEST(Extremal, RejectsCoarseGrid) {
  EXPECT_ANY_THROW(oracle::extremal_search("k5", oracle::GridSpec{{{0.0, pi}}, 50, 1e-6}));
}

TEST(Extremal, SpinJEmbeddings) {
  for (const char* name : {"spinj_k4:2", "spinj_k4:4", "spinj_k4:8"}) {
    const auto r = oracle::extremal_search(name, oracle::GridSpec{{{0.0, pi / 2}}, 200, 1e-8});
    EXPECT_NEAR(r.best_value, 2 * sqrt2, 1e-6) << name;
  }
}

TEST(Report, PassPredicate) {
  const auto ok = oracle::make_report("q", 1.0, 1.0 + 1e-12, 1e-10);
  EXPECT_TRUE(ok.passes());
  const auto bad = oracle::make_report("q", 1.0, 1.1, 1e-10);
  EXPECT_FALSE(bad.passes());
  EXPECT_NEAR(bad.abs_diff, 0.1, 1e-15);
}

}  // namespace
}  // namespace tempcorr
