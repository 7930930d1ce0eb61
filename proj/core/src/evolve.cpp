#include "tempcorr/evolve.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "tempcorr/error.hpp"

namespace tempcorr {

void LindbladSpec::validate() const {
  require_hermitian(hamiltonian, "Lindblad hamiltonian");
  if (!(decay_rate >= 0.0)) throw Error(ErrorCode::NegativeRate, "decay rate must be non-negative");
  if (jump_operator.rows() != hamiltonian.rows() || jump_operator.cols() != hamiltonian.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "jump operator and hamiltonian differ in dimension");
  }
}

LindbladSpec amplitude_damping_spec(double gamma, double omega) {
  LindbladSpec spec{-0.5 * omega * pauli::z(), gamma, pauli::lowering()};
  spec.validate();
  return spec;
}

Channel::Channel(std::vector<CMatrix> kraus, double duration, std::optional<LindbladSpec> generator)
    : kraus_(std::move(kraus)), duration_(duration), generator_(std::move(generator)) {
  if (kraus_.empty()) throw Error(ErrorCode::DimensionMismatch, "channel has no Kraus operators");
  const Eigen::Index d = kraus_.front().rows();
  CMatrix total = CMatrix::Zero(d, d);
  for (const CMatrix& k : kraus_) {
    if (k.rows() != d || k.cols() != d) {
      throw Error(ErrorCode::DimensionMismatch, "Kraus operators must be square and equal-sized");
    }
    total += k.adjoint() * k;
  }
  if (max_abs_diff(total, pauli::identity(static_cast<std::size_t>(d))) > kDerivedTol) {
    throw Error(ErrorCode::DimensionMismatch, "Kraus operators are not trace preserving");
  }
}

Channel Channel::identity(std::size_t dim) { return Channel({pauli::identity(dim)}, 0.0); }

Channel unitary_channel(const CMatrix& hamiltonian, double t) {
  CMatrix u = expm_antihermitian(hamiltonian, t, 1.0);
  const CMatrix zero = CMatrix::Zero(hamiltonian.rows(), hamiltonian.cols());
  return Channel({std::move(u)}, t, LindbladSpec{hamiltonian, 0.0, zero});
}

Channel unitary_channel_from(const CMatrix& u, double duration) {
  if (!is_unitary(u, kConstructionTol)) {
    throw Error(ErrorCode::DimensionMismatch, "propagator is not unitary");
  }
  return Channel({u}, duration);
}

Channel amplitude_damping_channel(double gamma, double omega, double dt) {
  if (!(gamma >= 0.0)) throw Error(ErrorCode::NegativeRate, "gamma must be non-negative");
  if (!(dt >= 0.0)) throw Error(ErrorCode::NegativeRate, "duration must be non-negative");
  const double survive = std::exp(-gamma * dt);  // 1 - p
  CMatrix k0(2, 2);
  k0 << 1.0, 0.0, 0.0, std::sqrt(survive);
  CMatrix k1(2, 2);
  k1 << 0.0, std::sqrt(-std::expm1(-gamma * dt)), 0.0, 0.0;
  const CMatrix u = expm_antihermitian(-0.5 * omega * pauli::z(), dt, 1.0);
  return Channel({u * k0, u * k1}, dt, amplitude_damping_spec(gamma, omega));
}

BlochAffineMap amplitude_damping_bloch_map(double gamma, double omega, double dt) {
  if (!(gamma >= 0.0) || !(dt >= 0.0)) throw Error(ErrorCode::NegativeRate, "negative rate or duration");
  const double coherence = std::exp(-0.5 * gamma * dt);
  const double population = std::exp(-gamma * dt);
  const double c = std::cos(omega * dt);
  const double s = std::sin(omega * dt);
  BlochAffineMap map;
  map.linear << coherence * c, coherence * s, 0.0,
                -coherence * s, coherence * c, 0.0,
                0.0, 0.0, population;
  map.offset << 0.0, 0.0, 1.0 - population;
  return map;
}

Channel compose(const Channel& first, const Channel& second) {
  if (first.dim() != second.dim()) throw Error(ErrorCode::DimensionMismatch, "cannot compose channels");
  std::vector<CMatrix> kraus;
  kraus.reserve(first.kraus().size() * second.kraus().size());
  for (const CMatrix& b : second.kraus()) {
    for (const CMatrix& a : first.kraus()) kraus.push_back(b * a);
  }
  return Channel(std::move(kraus), first.duration() + second.duration());
}

DensityMatrix apply_channel(const DensityMatrix& rho, const Channel& channel) {
  if (channel.dim() != rho.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "channel acts on dimension " + std::to_string(channel.dim()) +
                                                  ", state has " + std::to_string(rho.dim()));
  }
  CMatrix out = CMatrix::Zero(rho.dim(), rho.dim());
  for (const CMatrix& k : channel.kraus()) out += k * rho.mat() * k.adjoint();
  return DensityMatrix(hermitian_part(out), kDerivedTol);
}

CMatrix lindblad_rhs(const CMatrix& rho, const LindbladSpec& spec) {
  const CMatrix& l = spec.jump_operator;
  const CMatrix ldl = l.adjoint() * l;
  CMatrix out = -kI * commutator(spec.hamiltonian, rho);
  if (spec.decay_rate > 0.0) {
    out += spec.decay_rate * (l * rho * l.adjoint() - 0.5 * anticommutator(ldl, rho));
  }
  return out;
}

DensityMatrix rk4_lindblad(const DensityMatrix& rho, const LindbladSpec& spec, double t, int steps) {
  spec.validate();
  if (steps < 100) {
    throw Error(ErrorCode::StepCountTooSmall, "RK4 needs at least 100 steps, got " + std::to_string(steps));
  }
  const double h = t / steps;
  if (spec.decay_rate * std::abs(h) > 0.5) {
    throw Error(ErrorCode::StepCountTooSmall, "RK4 step too coarse for the decay rate");
  }
  CMatrix y = rho.mat();
  for (int n = 0; n < steps; ++n) {
    const CMatrix k1 = lindblad_rhs(y, spec);
    const CMatrix k2 = lindblad_rhs(y + 0.5 * h * k1, spec);
    const CMatrix k3 = lindblad_rhs(y + 0.5 * h * k2, spec);
    const CMatrix k4 = lindblad_rhs(y + h * k3, spec);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return DensityMatrix(hermitian_part(y), 1e-8);
}

}  // namespace tempcorr
