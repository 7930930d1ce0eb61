#pragma once

// States, observables, effects and the Lüders instrument.

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tempcorr/matcore.hpp"

namespace tempcorr {

// Positive, unit-trace hermitian operator. Construction validates the
// invariants at `tol` (trace and hermiticity) and kPositivityTol-style slack
// scaled to `tol` for the smallest eigenvalue.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix mat, double tol = kConstructionTol);

  static DensityMatrix maximally_mixed(std::size_t dim);
  static DensityMatrix pure(const CVector& psi);
  static DensityMatrix from_bloch(double x, double y, double z);
  static DensityMatrix basis(std::size_t dim, std::size_t index);

  const CMatrix& mat() const noexcept { return mat_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }

  double expectation(const CMatrix& op) const;
  // Qubit only: (<sx>, <sy>, <sz>).
  Eigen::Vector3d bloch() const;

 private:
  CMatrix mat_;
};

class Observable {
 public:
  explicit Observable(CMatrix mat);

  const CMatrix& mat() const noexcept { return mat_; }
  // Ascending eigenvalues.
  const RVector& outcome_values() const noexcept { return values_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }
  bool is_dichotomic(double tol = kDerivedTol) const;

 private:
  CMatrix mat_;
  RVector values_;
};

struct Effect {
  CMatrix mat;
  int outcome = 0;
};

// 0 <= E <= 1 and hermitian; throws Error{InvalidEffect} otherwise.
void validate_effect(const Effect& effect);

class Povm {
 public:
  explicit Povm(std::vector<Effect> effects, std::optional<double> sharpness = std::nullopt);

  const std::vector<Effect>& effects() const noexcept { return effects_; }
  std::optional<double> sharpness() const noexcept { return sharpness_; }
  Eigen::Index dim() const noexcept { return effects_.front().mat.rows(); }
  std::size_t size() const noexcept { return effects_.size(); }
  bool is_dichotomic() const noexcept;

 private:
  std::vector<Effect> effects_;
  std::optional<double> sharpness_;
};

enum class Axis { X, Y, Z };

Eigen::Vector3d axis_vector(Axis axis);
// n.sigma for a real 3-vector.
CMatrix bloch_operator(const Eigen::Vector3d& n);

// sigma_z cos(theta) + sigma_x sin(theta).
Observable rotated_observable(double theta);
// Unit Bloch vector of rotated_observable(theta).
Eigen::Vector3d rotated_axis(double theta);

// Two effects (1 +/- eta n.sigma)/2 labelled +1 and -1.
Povm unsharp_povm(const Eigen::Vector3d& axis, double eta);
Povm unsharp_povm(Axis axis, double eta);

// One projector per distinct eigenvalue, labelled by the sign of the eigenvalue.
Povm projective_povm(const Observable& obs);
// Two projectors onto the positive and non-positive eigenspaces, labelled +1/-1.
Povm sign_povm(const Observable& obs);

struct LudersResult {
  double prob;
  DensityMatrix post;
};

// Probability threshold below which a branch is treated as impossible.
inline constexpr double kZeroProbability = 1e-14;

// p = tr[rho E], post = sqrt(E) rho sqrt(E) / p. Throws ZeroProbabilityBranch
// when p < 1e-14; the caller decides whether to skip the branch.
LudersResult luders_update(const DensityMatrix& rho, const Effect& effect);

struct Branch {
  int outcome;
  double prob;
  DensityMatrix post;
  bool used;  // false for zero-probability branches; `post` is then a placeholder
};

std::vector<Branch> measure_statistics(const DensityMatrix& rho, const Povm& povm);

// Weighted conditional states indexed by (setting, outcome).
class Assemblage {
 public:
  explicit Assemblage(std::vector<std::vector<Branch>> members);

  const std::vector<std::vector<Branch>>& members() const noexcept { return members_; }
  std::size_t settings() const noexcept { return members_.size(); }
  const std::vector<Branch>& setting(std::size_t k) const { return members_.at(k); }
  // Unnormalized member weight * state.
  CMatrix unnormalized(std::size_t k, std::size_t a) const;

 private:
  std::vector<std::vector<Branch>> members_;
};

}  // namespace tempcorr
