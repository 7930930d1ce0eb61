#pragma once

// Two-measurement sequential statistics on a single system: Alice measures
// with a Lüders instrument, the system passes through a channel, Bob measures.

#include <cstddef>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tempcorr/evolve.hpp"
#include "tempcorr/quantum.hpp"

namespace tempcorr {

struct AliceSetting {
  Povm povm;
  Channel pre;                   // evolution before Alice measures
  std::optional<Channel> inter;  // overrides Scenario::inter() for this setting
};

class Scenario {
 public:
  Scenario(DensityMatrix initial, std::vector<AliceSetting> alice, Channel inter, std::vector<Povm> bob);

  const DensityMatrix& initial() const noexcept { return initial_; }
  const std::vector<AliceSetting>& alice() const noexcept { return alice_; }
  const std::vector<Povm>& bob() const noexcept { return bob_; }
  const Channel& inter() const noexcept { return inter_; }
  // Channel between Alice's setting i and Bob.
  const Channel& inter_for(std::size_t i) const;
  Eigen::Index dim() const noexcept { return initial_.dim(); }

 private:
  DensityMatrix initial_;
  std::vector<AliceSetting> alice_;
  Channel inter_;
  std::vector<Povm> bob_;
};

// Alice setting with no pre-evolution.
AliceSetting alice_setting(Povm povm);
AliceSetting alice_setting(Povm povm, Channel pre, std::optional<Channel> inter = std::nullopt);

// (a, b) -> p(a, b)
using JointDistribution = std::map<std::pair<int, int>, double>;

JointDistribution joint_probability(const Scenario& sc, std::size_t i, std::size_t j);

// sum_{a,b} a b p(a, b); throws NonDichotomic unless both settings have +/-1 outcomes.
double correlator(const Scenario& sc, std::size_t i, std::size_t j);

struct CorrelationTable {
  // (i, a, j, b) -> probability
  std::map<std::tuple<std::size_t, int, std::size_t, int>, double> joint;
  // E(A_i, B_j)
  Eigen::MatrixXd correlators;
};

CorrelationTable correlation_table(const Scenario& sc);

// sum_b b tr[rho M_b]; equals tr[rho B] for a projective +/-1 observable.
double povm_expectation(const DensityMatrix& rho, const Povm& povm);

double conditional_bob_expectation(const Scenario& sc, std::size_t i, int a, std::size_t j);

struct ConditionalExpectation {
  int outcome;
  double prob;
  double expectation;  // 0 for zero-probability outcomes
};

// For each outcome a of Alice's setting i: p(a) and <B_j> on the evolved post-state.
std::vector<ConditionalExpectation> conditional_expectations(const Scenario& sc, std::size_t i, std::size_t j);

struct SymmetrizedCorrelator {
  double forward;   // A then B
  double reverse;   // B then A
  double anticomm;  // tr[rho {A, B}] / 2
};

SymmetrizedCorrelator symmetrized_correlator_check(const DensityMatrix& rho, const Observable& a,
                                                   const Observable& b);

Assemblage assemblage(const DensityMatrix& rho, const std::vector<Povm>& povms, const Channel& inter);

// U^dag op U
CMatrix heisenberg(const CMatrix& op, const CMatrix& u);

}  // namespace tempcorr
