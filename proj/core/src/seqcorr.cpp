#include "tempcorr/seqcorr.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "tempcorr/error.hpp"

namespace tempcorr {

Scenario::Scenario(DensityMatrix initial, std::vector<AliceSetting> alice, Channel inter, std::vector<Povm> bob)
    : initial_(std::move(initial)), alice_(std::move(alice)), inter_(std::move(inter)), bob_(std::move(bob)) {
  const Eigen::Index d = initial_.dim();
  auto check = [d](Eigen::Index other, const char* what) {
    if (other != d) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " dimension differs from state");
  };
  check(inter_.dim(), "inter channel");
  for (const AliceSetting& s : alice_) {
    check(s.povm.dim(), "Alice POVM");
    check(s.pre.dim(), "Alice pre-channel");
    if (s.inter) check(s.inter->dim(), "Alice inter-channel");
  }
  for (const Povm& p : bob_) check(p.dim(), "Bob POVM");
}

const Channel& Scenario::inter_for(std::size_t i) const {
  const AliceSetting& s = alice_.at(i);
  return s.inter ? *s.inter : inter_;
}

AliceSetting alice_setting(Povm povm) {
  const auto d = static_cast<std::size_t>(povm.dim());
  return AliceSetting{std::move(povm), Channel::identity(d), std::nullopt};
}

AliceSetting alice_setting(Povm povm, Channel pre, std::optional<Channel> inter) {
  return AliceSetting{std::move(povm), std::move(pre), std::move(inter)};
}

namespace {

// Post-measurement branches of Alice's setting i, already evolved to Bob's time.
std::vector<Branch> evolved_branches(const Scenario& sc, std::size_t i) {
  const AliceSetting& setting = sc.alice().at(i);
  const DensityMatrix before = apply_channel(sc.initial(), setting.pre);
  std::vector<Branch> branches = measure_statistics(before, setting.povm);
  const Channel& inter = sc.inter_for(i);
  for (Branch& b : branches) {
    if (b.used) b.post = apply_channel(b.post, inter);
  }
  return branches;
}

}  // namespace

JointDistribution joint_probability(const Scenario& sc, std::size_t i, std::size_t j) {
  const Povm& bob = sc.bob().at(j);
  JointDistribution out;
  for (const Branch& a : evolved_branches(sc, i)) {
    for (const Effect& e : bob.effects()) {
      const double pb = a.used ? a.post.expectation(e.mat) : 0.0;
      out[{a.outcome, e.outcome}] += a.prob * pb;
    }
  }
  return out;
}

double correlator(const Scenario& sc, std::size_t i, std::size_t j) {
  if (!sc.alice().at(i).povm.is_dichotomic() || !sc.bob().at(j).is_dichotomic()) {
    throw Error(ErrorCode::NonDichotomic, "correlator needs +/-1 outcomes on both sides");
  }
  double e = 0.0;
  for (const auto& [ab, p] : joint_probability(sc, i, j)) e += ab.first * ab.second * p;
  return e;
}

CorrelationTable correlation_table(const Scenario& sc) {
  CorrelationTable table;
  table.correlators = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sc.alice().size()),
                                            static_cast<Eigen::Index>(sc.bob().size()));
  for (std::size_t i = 0; i < sc.alice().size(); ++i) {
    for (std::size_t j = 0; j < sc.bob().size(); ++j) {
      double total = 0.0;
      double e = 0.0;
      for (const auto& [ab, p] : joint_probability(sc, i, j)) {
        table.joint[{i, ab.first, j, ab.second}] = p;
        total += p;
        e += ab.first * ab.second * p;
      }
      if (std::abs(total - 1.0) > kDerivedTol) {
        throw Error(ErrorCode::InvalidState, "joint distribution does not normalize");
      }
      table.correlators(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = e;
    }
  }
  return table;
}

double povm_expectation(const DensityMatrix& rho, const Povm& povm) {
  double e = 0.0;
  for (const Effect& eff : povm.effects()) e += eff.outcome * rho.expectation(eff.mat);
  return e;
}

double conditional_bob_expectation(const Scenario& sc, std::size_t i, int a, std::size_t j) {
  for (const Branch& b : evolved_branches(sc, i)) {
    if (b.outcome != a) continue;
    if (!b.used) {
      throw Error(ErrorCode::ZeroProbabilityBranch, "Alice outcome " + std::to_string(a) + " never occurs");
    }
    return povm_expectation(b.post, sc.bob().at(j));
  }
  throw Error(ErrorCode::ZeroProbabilityBranch, "Alice setting has no outcome " + std::to_string(a));
}

std::vector<ConditionalExpectation> conditional_expectations(const Scenario& sc, std::size_t i, std::size_t j) {
  std::vector<ConditionalExpectation> out;
  const Povm& bob = sc.bob().at(j);
  for (const Branch& b : evolved_branches(sc, i)) {
    out.push_back({b.outcome, b.prob, b.used ? povm_expectation(b.post, bob) : 0.0});
  }
  return out;
}

SymmetrizedCorrelator symmetrized_correlator_check(const DensityMatrix& rho, const Observable& a,
                                                   const Observable& b) {
  const auto d = static_cast<std::size_t>(rho.dim());
  auto sequential = [&](const Observable& first, const Observable& second) {
    Scenario sc(rho, {alice_setting(projective_povm(first))}, Channel::identity(d), {projective_povm(second)});
    return correlator(sc, 0, 0);
  };
  return {sequential(a, b), sequential(b, a), 0.5 * rho.expectation(anticommutator(a.mat(), b.mat()))};
}

Assemblage assemblage(const DensityMatrix& rho, const std::vector<Povm>& povms, const Channel& inter) {
  std::vector<std::vector<Branch>> members;
  members.reserve(povms.size());
  for (const Povm& p : povms) {
    std::vector<Branch> branches = measure_statistics(rho, p);
    for (Branch& b : branches) {
      if (b.used) b.post = apply_channel(b.post, inter);
    }
    members.push_back(std::move(branches));
  }
  return Assemblage(std::move(members));
}

CMatrix heisenberg(const CMatrix& op, const CMatrix& u) { return u.adjoint() * op * u; }

}  // namespace tempcorr
