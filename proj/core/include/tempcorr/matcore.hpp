#pragma once

// Dense complex matrices for the small dimensions (d <= ~32) that appear in
// qubit and block-embedded spin-j problems.

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace tempcorr {

using Complex = std::complex<double>;
using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

// Tolerance ladder: representation checks, linear-algebra derived quantities,
// and physics-level comparisons against integrated dynamics.
inline constexpr double kConstructionTol = 1e-12;
inline constexpr double kDerivedTol = 1e-10;
inline constexpr double kPhysicsTol = 1e-6;

// Slack used when testing positivity of a computed operator.
inline constexpr double kPositivityTol = 1e-10;

namespace pauli {
CMatrix identity(std::size_t dim = 2);
CMatrix x();
CMatrix y();
CMatrix z();
// Lowering operator |0><1| in the convention where |0> is the ground state.
CMatrix lowering();
CMatrix raising();
}  // namespace pauli

struct EigenSystem {
  RVector values;   // ascending
  CMatrix vectors;  // orthonormal columns
};

bool is_hermitian(const CMatrix& m, double tol = kConstructionTol);
bool is_unitary(const CMatrix& m, double tol = kConstructionTol);
bool is_positive_semidefinite(const CMatrix& m, double tol = kPositivityTol);

// Throws Error{NonHermitianInput} when `m` is not square and hermitian within 1e-12.
void require_hermitian(const CMatrix& m, const char* what);

EigenSystem eig_hermitian(const CMatrix& m);
double min_eigenvalue(const CMatrix& m);

// exp(-i H t / hbar) from the spectral decomposition of H.
CMatrix expm_antihermitian(const CMatrix& hamiltonian, double t, double hbar = 1.0);

// f(M) = V diag(f(lambda)) V^dagger for hermitian M.
template <typename F>
CMatrix spectral_apply(const CMatrix& m, F&& f) {
  const EigenSystem es = eig_hermitian(m);
  CVector mapped(es.values.size());
  for (Eigen::Index k = 0; k < es.values.size(); ++k) mapped[k] = f(es.values[k]);
  return es.vectors * mapped.asDiagonal() * es.vectors.adjoint();
}

// Principal square root of a positive semidefinite hermitian matrix; tiny
// negative eigenvalues from round-off are clamped to zero.
CMatrix sqrt_psd(const CMatrix& m);

CMatrix hermitian_part(const CMatrix& m);
CMatrix anticommutator(const CMatrix& a, const CMatrix& b);
CMatrix commutator(const CMatrix& a, const CMatrix& b);
double real_trace(const CMatrix& m);

// Entrywise max |a - b|; dims must match.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

CMatrix direct_sum(const CMatrix& a, const CMatrix& b);

}  // namespace tempcorr
