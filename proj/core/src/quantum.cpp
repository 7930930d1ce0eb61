#include "tempcorr/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "tempcorr/error.hpp"

namespace tempcorr {

namespace {

std::string fmt_double(double v) { return std::to_string(v); }

}  // namespace

DensityMatrix::DensityMatrix(CMatrix mat, double tol) : mat_(std::move(mat)) {
  if (mat_.rows() == 0 || mat_.rows() != mat_.cols()) {
    throw Error(ErrorCode::InvalidState, "density matrix must be square and non-empty");
  }
  if (!is_hermitian(mat_, tol)) {
    throw Error(ErrorCode::InvalidState, "density matrix is not hermitian");
  }
  mat_ = hermitian_part(mat_);
  const double tr = real_trace(mat_);
  if (std::abs(tr - 1.0) > tol) {
    throw Error(ErrorCode::InvalidState, "density matrix trace is " + fmt_double(tr));
  }
  const double lo = min_eigenvalue(mat_);
  if (lo < -std::max(kPositivityTol, tol)) {
    throw Error(ErrorCode::InvalidState, "density matrix has eigenvalue " + fmt_double(lo));
  }
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix(pauli::identity(dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const CVector v = psi.normalized();
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::from_bloch(double x, double y, double z) {
  return DensityMatrix(0.5 * (pauli::identity(2) + x * pauli::x() + y * pauli::y() + z * pauli::z()));
}

DensityMatrix DensityMatrix::basis(std::size_t dim, std::size_t index) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return DensityMatrix(std::move(m));
}

double DensityMatrix::expectation(const CMatrix& op) const {
  if (op.rows() != dim() || op.cols() != dim()) {
    throw Error(ErrorCode::DimensionMismatch, "operator and state dimensions differ");
  }
  return (mat_ * op).trace().real();
}

Eigen::Vector3d DensityMatrix::bloch() const {
  if (dim() != 2) throw Error(ErrorCode::InvalidDimension, "Bloch vector needs a qubit state");
  return {expectation(pauli::x()), expectation(pauli::y()), expectation(pauli::z())};
}

Observable::Observable(CMatrix mat) : mat_(std::move(mat)) {
  require_hermitian(mat_, "observable");
  mat_ = hermitian_part(mat_);
  values_ = eig_hermitian(mat_).values;
}

bool Observable::is_dichotomic(double tol) const {
  return std::all_of(values_.begin(), values_.end(),
                     [tol](double v) { return std::abs(std::abs(v) - 1.0) <= tol; });
}

void validate_effect(const Effect& effect) {
  const CMatrix& m = effect.mat;
  if (m.rows() == 0 || m.rows() != m.cols() || !is_hermitian(m, kConstructionTol)) {
    throw Error(ErrorCode::InvalidEffect, "effect is not a square hermitian matrix");
  }
  const RVector ev = eig_hermitian(m).values;
  if (ev[0] < -kPositivityTol || ev[ev.size() - 1] > 1.0 + kPositivityTol) {
    throw Error(ErrorCode::InvalidEffect, "effect spectrum leaves [0, 1]: [" + fmt_double(ev[0]) +
                                              ", " + fmt_double(ev[ev.size() - 1]) + "]");
  }
}

Povm::Povm(std::vector<Effect> effects, std::optional<double> sharpness)
    : effects_(std::move(effects)), sharpness_(sharpness) {
  if (effects_.empty()) throw Error(ErrorCode::InvalidEffect, "POVM has no effects");
  const Eigen::Index d = effects_.front().mat.rows();
  CMatrix total = CMatrix::Zero(d, d);
  for (auto& e : effects_) {
    if (e.mat.rows() != d) throw Error(ErrorCode::DimensionMismatch, "POVM effects differ in dimension");
    validate_effect(e);
    e.mat = hermitian_part(e.mat);
    total += e.mat;
  }
  if (max_abs_diff(total, pauli::identity(static_cast<std::size_t>(d))) > kDerivedTol) {
    throw Error(ErrorCode::InvalidEffect, "POVM effects do not sum to identity");
  }
}

bool Povm::is_dichotomic() const noexcept {
  return std::all_of(effects_.begin(), effects_.end(),
                     [](const Effect& e) { return e.outcome == 1 || e.outcome == -1; });
}

Eigen::Vector3d axis_vector(Axis axis) {
  switch (axis) {
    case Axis::X: return Eigen::Vector3d::UnitX();
    case Axis::Y: return Eigen::Vector3d::UnitY();
    case Axis::Z: return Eigen::Vector3d::UnitZ();
  }
  return Eigen::Vector3d::UnitZ();
}

CMatrix bloch_operator(const Eigen::Vector3d& n) {
  return n.x() * pauli::x() + n.y() * pauli::y() + n.z() * pauli::z();
}

Observable rotated_observable(double theta) {
  return Observable(std::cos(theta) * pauli::z() + std::sin(theta) * pauli::x());
}

Eigen::Vector3d rotated_axis(double theta) { return {std::sin(theta), 0.0, std::cos(theta)}; }

Povm unsharp_povm(const Eigen::Vector3d& axis, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw Error(ErrorCode::InvalidSharpness, "sharpness must lie in (0, 1], got " + fmt_double(eta));
  }
  if (std::abs(axis.norm() - 1.0) > kConstructionTol) {
    throw Error(ErrorCode::InvalidEffect, "measurement axis is not a unit vector");
  }
  const CMatrix id = pauli::identity(2);
  const CMatrix n = bloch_operator(axis);
  return Povm({Effect{0.5 * (id + eta * n), +1}, Effect{0.5 * (id - eta * n), -1}}, eta);
}

Povm unsharp_povm(Axis axis, double eta) { return unsharp_povm(axis_vector(axis), eta); }

Povm projective_povm(const Observable& obs) {
  const EigenSystem es = eig_hermitian(obs.mat());
  std::vector<Effect> effects;
  const Eigen::Index d = es.values.size();
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index stop = start + 1;
    while (stop < d && es.values[stop] - es.values[start] <= kDerivedTol) ++stop;
    const CMatrix block = es.vectors.middleCols(start, stop - start);
    const double value = es.values[start];
    const int label = value > kDerivedTol ? 1 : (value < -kDerivedTol ? -1 : 0);
    effects.push_back(Effect{block * block.adjoint(), label});
    start = stop;
  }
  // Highest eigenvalue first so qubit dichotomic observables list outcome +1 first.
  std::reverse(effects.begin(), effects.end());
  return Povm(std::move(effects), 1.0);
}

Povm sign_povm(const Observable& obs) {
  const EigenSystem es = eig_hermitian(obs.mat());
  const Eigen::Index d = es.values.size();
  CMatrix plus = CMatrix::Zero(d, d);
  CMatrix minus = CMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const CVector v = es.vectors.col(k);
    (es.values[k] > 0.0 ? plus : minus) += v * v.adjoint();
  }
  std::vector<Effect> effects;
  if (plus.cwiseAbs().maxCoeff() > 0.0) effects.push_back(Effect{plus, +1});
  if (minus.cwiseAbs().maxCoeff() > 0.0) effects.push_back(Effect{minus, -1});
  return Povm(std::move(effects), 1.0);
}

LudersResult luders_update(const DensityMatrix& rho, const Effect& effect) {
  if (effect.mat.rows() != rho.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "effect and state dimensions differ");
  }
  const double p = rho.expectation(effect.mat);
  if (p < kZeroProbability) {
    throw Error(ErrorCode::ZeroProbabilityBranch, "outcome " + std::to_string(effect.outcome) +
                                                      " has probability " + fmt_double(p));
  }
  const CMatrix root = sqrt_psd(effect.mat);
  CMatrix post = hermitian_part(root * rho.mat() * root);
  // tr[sqrt(E) rho sqrt(E)] equals p analytically; dividing by the computed
  // trace keeps the post-state normalized when p is small.
  post /= real_trace(post);
  return LudersResult{p, DensityMatrix(std::move(post), kDerivedTol)};
}

std::vector<Branch> measure_statistics(const DensityMatrix& rho, const Povm& povm) {
  std::vector<Branch> out;
  out.reserve(povm.size());
  for (const Effect& e : povm.effects()) {
    const double p = rho.expectation(e.mat);
    if (p < kZeroProbability) {
      out.push_back(Branch{e.outcome, 0.0, DensityMatrix::maximally_mixed(static_cast<std::size_t>(rho.dim())), false});
      continue;
    }
    LudersResult r = luders_update(rho, e);
    out.push_back(Branch{e.outcome, r.prob, std::move(r.post), true});
  }
  return out;
}

Assemblage::Assemblage(std::vector<std::vector<Branch>> members) : members_(std::move(members)) {
  for (const auto& setting : members_) {
    double total = 0.0;
    for (const Branch& b : setting) {
      if (b.prob < 0.0) throw Error(ErrorCode::InvalidState, "negative assemblage weight");
      total += b.prob;
    }
    if (std::abs(total - 1.0) > kDerivedTol) {
      throw Error(ErrorCode::InvalidState, "assemblage weights sum to " + fmt_double(total));
    }
  }
}

CMatrix Assemblage::unnormalized(std::size_t k, std::size_t a) const {
  const Branch& b = members_.at(k).at(a);
  return b.prob * b.post.mat();
}

}  // namespace tempcorr
