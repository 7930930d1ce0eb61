#include "tempcorr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "tempcorr/error.hpp"
#include "tempcorr/ineq.hpp"
#include "tempcorr/parallel.hpp"
#include "tempcorr/scenarios.hpp"

namespace tempcorr::oracle {

using std::numbers::pi;
using Dense = Eigen::MatrixXcd;

OracleReport make_report(std::string quantity, double analytic, double oracle_value, double tolerance) {
  return OracleReport{std::move(quantity), analytic, oracle_value, std::abs(analytic - oracle_value), tolerance};
}

namespace {

// Principal square root through a complex Schur form and the Bjorck-Hammarling
// recurrence. Diagonal entries within round-off of zero are taken as exact
// zeros so that projectors map to themselves.
Dense schur_sqrt(const Dense& m) {
  const Eigen::ComplexSchur<Dense> schur(m);
  const Dense& t = schur.matrixT();
  const Eigen::Index n = t.rows();
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t.cwiseAbs().maxCoeff()) *
                       static_cast<double>(n);
  Dense r = Dense::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double d = t(k, k).real();
    r(k, k) = d <= floor ? 0.0 : std::sqrt(d);
  }
  for (Eigen::Index gap = 1; gap < n; ++gap) {
    for (Eigen::Index i = 0; i + gap < n; ++i) {
      const Eigen::Index j = i + gap;
      Complex acc = t(i, j);
      for (Eigen::Index k = i + 1; k < j; ++k) acc -= r(i, k) * r(k, j);
      const Complex denom = r(i, i) + r(j, j);
      r(i, j) = std::abs(denom) <= floor ? Complex(0.0) : acc / denom;
    }
  }
  return schur.matrixU() * r * schur.matrixU().adjoint();
}

Dense kraus_sum(const Dense& rho, const Channel& ch) {
  Dense out = Dense::Zero(rho.rows(), rho.cols());
  for (const CMatrix& k : ch.kraus()) {
    const Dense kk = k;
    out.noalias() += kk * rho * kk.adjoint();
  }
  return out;
}

// Propagates an unnormalized operator. The master equation is linear, so the
// trace is factored out before integrating and restored afterwards.
Dense propagate(const Dense& rho, const Channel& ch, Propagation propagation) {
  if (propagation == Propagation::Kraus || !ch.generator() || ch.duration() == 0.0) return kraus_sum(rho, ch);
  const double weight = rho.trace().real();
  if (weight <= 0.0) return Dense::Zero(rho.rows(), rho.cols());
  const LindbladSpec& spec = *ch.generator();
  const double scale = (spec.decay_rate + spec.hamiltonian.cwiseAbs().maxCoeff()) * ch.duration();
  const int steps = std::max(400, static_cast<int>(std::ceil(400.0 * scale)));
  const Dense unit = rho / weight;
  const DensityMatrix evolved = rk4_lindblad(DensityMatrix(CMatrix(0.5 * (unit + unit.adjoint())), kDerivedTol),
                                             spec, ch.duration(), steps);
  return weight * Dense(evolved.mat());
}

}  // namespace

JointDistribution brute_force_joint(const Scenario& sc, std::size_t i, std::size_t j, Propagation propagation) {
  const AliceSetting& alice = sc.alice().at(i);
  const Povm& bob = sc.bob().at(j);
  const Dense start = Dense(sc.initial().mat());
  const Dense at_alice = propagate(start, alice.pre, propagation);
  const Channel& inter = sc.inter_for(i);

  JointDistribution out;
  for (const Effect& ea : alice.povm.effects()) {
    const Dense m = ea.mat;
    const Dense root = schur_sqrt(m);
    const Dense branch = propagate(root * at_alice * root.adjoint(), inter, propagation);
    for (const Effect& eb : bob.effects()) {
      const Dense mb = eb.mat;
      out[{ea.outcome, eb.outcome}] += (mb * branch).trace().real();
    }
  }
  return out;
}

Scenario random_scenario(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_direction = [&] {
    const double cos_t = 2.0 * unit(rng) - 1.0;
    const double phi = 2.0 * pi * unit(rng);
    const double sin_t = std::sqrt(1.0 - cos_t * cos_t);
    return Eigen::Vector3d(sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t);
  };
  auto random_povm = [&] {
    const Eigen::Vector3d n = random_direction();
    const double eta = unit(rng) < 0.5 ? 1.0 : 0.2 + 0.8 * unit(rng);
    return unsharp_povm(n, eta);
  };
  auto random_channel = [&] {
    return amplitude_damping_channel(2.0 * unit(rng), 2.0 * pi * unit(rng), 1.0);
  };

  const Eigen::Vector3d r = std::cbrt(unit(rng)) * random_direction();
  DensityMatrix initial = DensityMatrix::from_bloch(r.x(), r.y(), r.z());
  std::vector<AliceSetting> alice;
  for (int k = 0; k < 2; ++k) alice.push_back(alice_setting(random_povm(), random_channel()));
  std::vector<Povm> bob;
  for (int k = 0; k < 2; ++k) bob.push_back(random_povm());
  return Scenario(std::move(initial), std::move(alice), random_channel(), std::move(bob));
}

// ---------------------------------------------------------------------------

namespace {

double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ExtremalResult extremal_search(const Objective& objective, const GridSpec& grid) {
  const std::size_t dims = grid.ranges.size();
  if (dims == 0 || dims > 3) throw Error(ErrorCode::ArityMismatch, "extremal search takes 1 to 3 parameters");
  if (grid.resolution < 200) throw Error(ErrorCode::ArityMismatch, "grid resolution must be at least 200");

  std::size_t total = 1;
  for (std::size_t d = 0; d < dims; ++d) total *= grid.resolution;
  auto point_of = [&](std::size_t flat) {
    std::vector<double> p(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      const std::size_t k = flat % grid.resolution;
      flat /= grid.resolution;
      const auto [lo, hi] = grid.ranges[d];
      p[d] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid.resolution - 1);
    }
    return p;
  };

  const std::vector<double> values = parallel_map(total, [&](std::size_t flat) {
    const std::vector<double> p = point_of(flat);
    return objective(p);
  });
  const auto best_it = std::max_element(values.begin(), values.end());
  ExtremalResult result{point_of(static_cast<std::size_t>(best_it - values.begin())), *best_it};

  // Coordinate-wise refinement inside one grid cell either side of the best point.
  for (int sweep = 0; sweep < 20; ++sweep) {
    double moved = 0.0;
    for (std::size_t d = 0; d < dims; ++d) {
      const auto [lo, hi] = grid.ranges[d];
      const double cell = (hi - lo) / static_cast<double>(grid.resolution - 1);
      const double a = std::max(lo, result.best_params[d] - cell);
      const double b = std::min(hi, result.best_params[d] + cell);
      std::vector<double> p = result.best_params;
      auto slice = [&](double t) {
        p[d] = t;
        return objective(p);
      };
      const double t = golden_max(slice, a, b, grid.refine_tol * 1e-3);
      const double v = slice(t);
      if (v > result.best_value) {
        moved = std::max(moved, std::abs(t - result.best_params[d]));
        result.best_params[d] = t;
        result.best_value = v;
      }
    }
    if (moved < grid.refine_tol) break;
  }
  return result;
}

Objective named_objective(std::string_view name) {
  if (name == "temporal_chsh" || name == "steering_sum") {
    const bool steering = name == "steering_sum";
    return [steering](std::span<const double> p) {
      const double phi = p[0];
      const Eigen::MatrixXd e = correlation_table(rotated_scenario({0.0, 2.0 * phi}, {phi, -phi})).correlators;
      if (steering) return chsh_steering(Eigen::Matrix2d(e)).value;
      return temporal_chsh(e(0, 0), e(0, 1), e(1, 0), e(1, 1)).value;
    };
  }
  if (name.size() == 2 && name[0] == 'k' && name[1] >= '3' && name[1] <= '9') {
    const int n = name[1] - '0';
    return [n](std::span<const double> p) { return k_mapped(n, 1.0, p[0]).value; };
  }
  constexpr std::string_view spinj = "spinj_k4:";
  if (name.substr(0, spinj.size()) == spinj) {
    const auto dim = static_cast<std::size_t>(std::stoul(std::string(name.substr(spinj.size()))));
    return [emb = spinj_embed(dim)](std::span<const double> p) { return spinj_k4(emb, p[0]).value; };
  }
  throw Error(ErrorCode::ArityMismatch, "unknown objective " + std::string(name));
}

ExtremalResult extremal_search(std::string_view name, const GridSpec& grid) {
  return extremal_search(named_objective(name), grid);
}

}  // namespace tempcorr::oracle
