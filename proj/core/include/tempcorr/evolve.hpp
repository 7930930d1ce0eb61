#pragma once

// Time-evolution channels: unitary propagators, amplitude damping in closed
// Kraus form, and a fixed-step RK4 integrator for the Lindblad master
// equation that serves as an independent check on the closed forms.

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tempcorr/matcore.hpp"
#include "tempcorr/quantum.hpp"

namespace tempcorr {

// drho/dt = -i[H, rho] + gamma (L rho L^dag - {L^dag L, rho}/2), hbar = 1.
struct LindbladSpec {
  CMatrix hamiltonian;
  double decay_rate = 0.0;
  CMatrix jump_operator;

  void validate() const;
};

LindbladSpec amplitude_damping_spec(double gamma, double omega);

class Channel {
 public:
  // Validates sum_k K^dag K = 1 within 1e-10.
  Channel(std::vector<CMatrix> kraus, double duration,
          std::optional<LindbladSpec> generator = std::nullopt);

  static Channel identity(std::size_t dim);

  const std::vector<CMatrix>& kraus() const noexcept { return kraus_; }
  double duration() const noexcept { return duration_; }
  // Generator the channel was built from, when it came from a master equation;
  // lets an oracle re-derive the same map by integration.
  const std::optional<LindbladSpec>& generator() const noexcept { return generator_; }
  Eigen::Index dim() const noexcept { return kraus_.front().rows(); }

 private:
  std::vector<CMatrix> kraus_;
  double duration_;
  std::optional<LindbladSpec> generator_;
};

Channel unitary_channel(const CMatrix& hamiltonian, double t);
// Wraps an explicit unitary; throws NonHermitianInput-style DimensionMismatch
// if `u` is not unitary within 1e-12.
Channel unitary_channel_from(const CMatrix& u, double duration = 0.0);

// Amplitude damping with p = 1 - exp(-gamma dt) followed by free precession
// under H = -(omega/2) sigma_z. |0> is the ground state.
Channel amplitude_damping_channel(double gamma, double omega, double dt);

// Affine action r -> M r + c of a qubit channel on the Bloch vector.
struct BlochAffineMap {
  Eigen::Matrix3d linear;
  Eigen::Vector3d offset;

  Eigen::Vector3d operator()(const Eigen::Vector3d& r) const { return linear * r + offset; }
};

BlochAffineMap amplitude_damping_bloch_map(double gamma, double omega, double dt);

// Kraus maps applied one after the other (first, then second).
Channel compose(const Channel& first, const Channel& second);

DensityMatrix apply_channel(const DensityMatrix& rho, const Channel& channel);

CMatrix lindblad_rhs(const CMatrix& rho, const LindbladSpec& spec);

// Classical fourth-order Runge-Kutta with `steps` equal steps over [0, t].
// Requires steps >= 100 and gamma * t / steps <= 0.5.
DensityMatrix rk4_lindblad(const DensityMatrix& rho, const LindbladSpec& spec, double t, int steps);

}  // namespace tempcorr
