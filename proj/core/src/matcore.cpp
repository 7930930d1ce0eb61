#include "tempcorr/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tempcorr/error.hpp"

namespace tempcorr {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::InvalidSharpness: return "InvalidSharpness";
    case ErrorCode::ZeroProbabilityBranch: return "ZeroProbabilityBranch";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::StepCountTooSmall: return "StepCountTooSmall";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonDichotomic: return "NonDichotomic";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidEffect: return "InvalidEffect";
  }
  return "Unknown";
}

namespace pauli {

CMatrix identity(std::size_t dim) {
  return CMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

CMatrix x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

CMatrix y() {
  CMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

CMatrix z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

CMatrix lowering() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  return m;
}

CMatrix raising() { return lowering().adjoint(); }

}  // namespace pauli

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs_diff(m, m.adjoint()) <= tol;
}

bool is_unitary(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs_diff(m.adjoint() * m, CMatrix::Identity(m.rows(), m.cols())) <= tol;
}

bool is_positive_semidefinite(const CMatrix& m, double tol) {
  if (!is_hermitian(m, kConstructionTol)) return false;
  return min_eigenvalue(m) >= -tol;
}

void require_hermitian(const CMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw Error(ErrorCode::NonHermitianInput, std::string(what) + " is not square");
  }
  if (!is_hermitian(m, kConstructionTol)) {
    throw Error(ErrorCode::NonHermitianInput,
                std::string(what) + " deviates from hermiticity by " +
                    std::to_string(max_abs_diff(m, m.adjoint())));
  }
}

EigenSystem eig_hermitian(const CMatrix& m) {
  require_hermitian(m, "eig_hermitian input");
  // Eigen's self-adjoint solver reads only the lower triangle; symmetrize first
  // so the result does not depend on which half carries the round-off.
  const Eigen::MatrixXcd h = hermitian_part(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const CMatrix& m) { return eig_hermitian(m).values[0]; }

CMatrix expm_antihermitian(const CMatrix& hamiltonian, double t, double hbar) {
  require_hermitian(hamiltonian, "generator");
  const double scale = t / hbar;
  CMatrix u = spectral_apply(hamiltonian, [scale](double lambda) {
    return std::exp(-kI * lambda * scale);
  });
  return u;
}

CMatrix sqrt_psd(const CMatrix& m) {
  const EigenSystem es = eig_hermitian(m);
  // Eigenvalues within round-off of zero are exact zeros (projector kernels);
  // taking their square root would turn 1e-17 noise into 3e-9 error.
  const double scale = std::max(1.0, es.values.cwiseAbs().maxCoeff());
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale * static_cast<double>(m.rows());
  CVector mapped(es.values.size());
  for (Eigen::Index k = 0; k < es.values.size(); ++k)
    mapped[k] = es.values[k] <= floor ? 0.0 : std::sqrt(es.values[k]);
  return es.vectors * mapped.asDiagonal() * es.vectors.adjoint();
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

CMatrix anticommutator(const CMatrix& a, const CMatrix& b) { return a * b + b * a; }

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

double real_trace(const CMatrix& m) { return m.trace().real(); }

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "max_abs_diff operands differ in shape");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace tempcorr
