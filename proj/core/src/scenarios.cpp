#include "tempcorr/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tempcorr/error.hpp"
#include "tempcorr/parallel.hpp"

namespace tempcorr {

using std::numbers::pi;

void ScanRecord::set(const std::string& name, double value) {
  for (auto& [key, v] : columns) {
    if (key == name) {
      v = value;
      return;
    }
  }
  columns.emplace_back(name, value);
}

double ScanRecord::at(const std::string& name) const {
  for (const auto& [key, v] : columns) {
    if (key == name) return v;
  }
  throw std::out_of_range("no column named " + name);
}

bool ScanRecord::all_finite() const {
  return std::isfinite(parameter) &&
         std::all_of(columns.begin(), columns.end(), [](const auto& c) { return std::isfinite(c.second); });
}

double ThresholdReport::abs_diff() const { return std::abs(formula_value - simulated_value); }

bool ThresholdReport::passes() const { return abs_diff() <= tolerance; }

std::vector<double> open_grid(std::size_t n, double lo, double hi) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(n + 1);
  }
  return out;
}

std::vector<double> closed_grid(std::size_t n, double lo, double hi) {
  if (n < 2) throw Error(ErrorCode::ArityMismatch, "closed grid needs at least two points");
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  return out;
}

std::optional<double> bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) return std::nullopt;
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------

namespace {

Povm rotated_measurement(double theta, double eta) {
  if (eta == 1.0) return projective_povm(rotated_observable(theta));
  return unsharp_povm(rotated_axis(theta), eta);
}

const DensityMatrix& mixed_qubit() {
  static const DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  return rho;
}

}  // namespace

Scenario rotated_scenario(const std::vector<double>& alice_angles, const std::vector<double>& bob_angles,
                          double eta) {
  std::vector<AliceSetting> alice;
  for (double t : alice_angles) alice.push_back(alice_setting(rotated_measurement(t, eta)));
  std::vector<Povm> bob;
  for (double t : bob_angles) bob.push_back(rotated_measurement(t, eta));
  return Scenario(mixed_qubit(), std::move(alice), Channel::identity(2), std::move(bob));
}

CMatrix precession_hamiltonian(double omega) { return -0.5 * omega * pauli::y(); }

Scenario lg_pair_scenario(double t_first, double t_second, double omega) {
  const CMatrix h = precession_hamiltonian(omega);
  const Povm sz = projective_povm(Observable(pauli::z()));
  std::vector<AliceSetting> alice;
  alice.push_back(alice_setting(sz, unitary_channel(h, t_first), unitary_channel(h, t_second - t_first)));
  return Scenario(mixed_qubit(), std::move(alice), Channel::identity(2), {sz});
}

// ---------------------------------------------------------------------------

Eigen::Matrix2d steering_grid_forward(double x) {
  return correlation_table(rotated_scenario({x, 3.0 * x}, {2.0 * x, 4.0 * x})).correlators;
}

Eigen::Matrix2d steering_grid_permuted(double x) {
  return correlation_table(rotated_scenario({4.0 * x, 3.0 * x}, {2.0 * x, x})).correlators;
}

ScanRecord fig2_point(double x) {
  ScanRecord r;
  r.parameter = x;
  const double s = steering_closed_form_S(x);
  const double sp = steering_closed_form_Sprime(x);
  r.set("S_analytic", s);
  r.set("Sprime_analytic", sp);
  r.set("S_simulated", chsh_steering(steering_grid_forward(x)).value);
  r.set("Sprime_simulated", chsh_steering(steering_grid_permuted(x)).value);
  r.set("max_violation_margin", std::max(s, sp) - 2.0);
  return r;
}

std::vector<ScanRecord> fig2_scan(const std::vector<double>& x_grid) {
  return parallel_map(x_grid.size(), [&](std::size_t k) { return fig2_point(x_grid[k]); });
}

// ---------------------------------------------------------------------------

Eigen::Matrix4d equal_gap_correlators(double x) {
  Eigen::Matrix4d c = Eigen::Matrix4d::Identity();
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      // times (i+1) and (j+1) in units of dt, with omega * dt = x
      c(i, j) = c(j, i) = correlator(lg_pair_scenario(i + 1.0, j + 1.0, x), 0, 0);
    }
  }
  return c;
}

CorollaryRow corollary_row(double x) {
  CorollaryRow row;
  row.x = x;
  const Eigen::Matrix4d c = equal_gap_correlators(x);
  std::array<int, 4> p{0, 1, 2, 3};
  do {
    if (p[0] > p[3]) continue;  // a reversed ordering gives the same inequality
    const std::array<double, 3> forward{c(p[0], p[1]), c(p[1], p[2]), c(p[2], p[3])};
    PermutedLgi lgi;
    lgi.ordering = {p[0] + 1, p[1] + 1, p[2] + 1, p[3] + 1};
    lgi.result = lg_sum(forward, c(p[3], p[0]), 4);
    row.lgis.push_back(lgi);
  } while (std::next_permutation(p.begin(), p.end()));
  for (std::size_t k = 1; k < row.lgis.size(); ++k) {
    if (row.lgis[k].result.margin > row.lgis[row.best].result.margin) row.best = k;
  }
  row.lgi_violated = row.lgis[row.best].result.violated;
  row.steering = chsh_steering(steering_grid_forward(x));
  row.steering_permuted = chsh_steering(steering_grid_permuted(x));
  row.steering_violated = row.steering.violated || row.steering_permuted.violated;
  return row;
}

CorollaryReport theorem2_corollary_check(const std::vector<double>& x_grid) {
  CorollaryReport report;
  report.rows = parallel_map(x_grid.size(), [&](std::size_t k) { return corollary_row(x_grid[k]); });
  report.verdict = std::all_of(report.rows.begin(), report.rows.end(),
                               [](const CorollaryRow& r) { return r.lgi_violated && r.steering_violated; });
  return report;
}

// ---------------------------------------------------------------------------

double eta_threshold_lgi(int n) {
  if (n < 4) throw Error(ErrorCode::ArityMismatch, "sharpness threshold defined for n >= 4");
  return std::sqrt((n - 2.0) / (n * std::cos(pi / n)));
}

GlobalPovm global_povm(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw Error(ErrorCode::InvalidSharpness, "sharpness must lie in (0, 1]");
  }
  GlobalPovm g;
  const CMatrix id = pauli::identity(2);
  const std::array<CMatrix, 3> sigma{pauli::x(), pauli::y(), pauli::z()};
  CMatrix total = CMatrix::Zero(2, 2);
  g.min_eigenvalue = 1.0;
  for (int a1 : {1, -1}) {
    for (int a2 : {1, -1}) {
      for (int a3 : {1, -1}) {
        CMatrix m = (id + eta * (a1 * sigma[0] + a2 * sigma[1] + a3 * sigma[2])) / 8.0;
        g.min_eigenvalue = std::min(g.min_eigenvalue, min_eigenvalue(m));
        total += m;
        g.elements.push_back(std::move(m));
        g.labels.push_back({a1, a2, a3});
      }
    }
  }
  g.completeness_error = max_abs_diff(total, id);
  for (int k = 0; k < 3; ++k) {
    const Povm target = unsharp_povm(static_cast<Axis>(k), eta);
    for (const Effect& e : target.effects()) {
      CMatrix marginal = CMatrix::Zero(2, 2);
      for (std::size_t l = 0; l < g.elements.size(); ++l) {
        if (g.labels[l][static_cast<std::size_t>(k)] == e.outcome) marginal += g.elements[l];
      }
      g.max_marginal_error = std::max(g.max_marginal_error, max_abs_diff(marginal, e.mat));
    }
  }
  g.marginal_check = g.max_marginal_error <= kConstructionTol && g.completeness_error <= kConstructionTol;
  g.positive = g.min_eigenvalue >= -kPositivityTol;
  return g;
}

double joint_measurability_boundary(double tol) {
  const auto root = bisect_root([](double eta) { return global_povm(eta).min_eigenvalue; }, 1e-6, 1.0, tol);
  return root.value();
}

Scenario unsharp_steering_setup(double eta, double omega_t, Picture picture) {
  const CMatrix u = expm_antihermitian(0.5 * pauli::x(), omega_t);
  const CMatrix v = expm_antihermitian(0.5 * pauli::y(), omega_t);
  const std::array<Axis, 3> alice_axes{Axis::Z, Axis::Y, Axis::X};
  const std::array<CMatrix, 3> bob_ops{pauli::z(), pauli::y(), pauli::x()};
  const std::array<const CMatrix*, 3> evolution{&u, &u, &v};

  std::vector<AliceSetting> alice;
  std::vector<Povm> bob;
  for (std::size_t k = 0; k < 3; ++k) {
    const Povm povm = unsharp_povm(alice_axes[k], eta);
    if (picture == Picture::Schrodinger) {
      alice.push_back(alice_setting(povm, Channel::identity(2), unitary_channel_from(*evolution[k], omega_t)));
      bob.push_back(projective_povm(Observable(bob_ops[k])));
    } else {
      alice.push_back(alice_setting(povm));
      bob.push_back(projective_povm(Observable(heisenberg(bob_ops[k], *evolution[k]))));
    }
  }
  return Scenario(mixed_qubit(), std::move(alice), Channel::identity(2), std::move(bob));
}

InequalityResult quadratic_steering_of(const Scenario& sc) {
  std::vector<std::vector<ConditionalStat>> terms;
  for (std::size_t i = 0; i < sc.alice().size(); ++i) {
    std::vector<ConditionalStat> stats;
    for (const ConditionalExpectation& c : conditional_expectations(sc, i, i)) {
      stats.push_back({c.prob, c.expectation});
    }
    terms.push_back(std::move(stats));
  }
  return quadratic_steering(terms, static_cast<int>(terms.size()));
}

InequalityResult unsharp_steering_scenario(double eta, double omega_t, Picture picture) {
  return quadratic_steering_of(unsharp_steering_setup(eta, omega_t, picture));
}

// ---------------------------------------------------------------------------

MappedLg mapped_lg(int n, double eta, double spacing) {
  if (n < 3) throw Error(ErrorCode::ArityMismatch, "LG sums need n >= 3");
  std::vector<double> alice_angles;
  std::vector<double> bob_angles;
  for (int k = 1; k <= n; ++k) (k % 2 == 1 ? alice_angles : bob_angles).push_back(k * spacing);
  if (n % 2 == 1) bob_angles.push_back(spacing);  // t_1 again, for the closing pair

  auto slot = [](int k) { return static_cast<std::size_t>(k % 2 == 1 ? (k - 1) / 2 : k / 2 - 1); };
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (int k = 1; k < n; ++k) {
    const int odd = k % 2 == 1 ? k : k + 1;
    const int even = k % 2 == 0 ? k : k + 1;
    pairs.emplace_back(slot(odd), slot(even));
  }
  if (n % 2 == 0) {
    pairs.emplace_back(slot(1), slot(n));
  } else {
    pairs.emplace_back(slot(n), bob_angles.size() - 1);
  }
  return MappedLg{rotated_scenario(alice_angles, bob_angles, eta), std::move(pairs)};
}

InequalityResult k_mapped(int n, double eta, double spacing) {
  const MappedLg m = mapped_lg(n, eta, spacing);
  std::vector<double> forward;
  for (std::size_t k = 0; k + 1 < m.pairs.size(); ++k) {
    forward.push_back(correlator(m.scenario, m.pairs[k].first, m.pairs[k].second));
  }
  const double closing = correlator(m.scenario, m.pairs.back().first, m.pairs.back().second);
  return lg_sum(forward, closing, n);
}

InequalityResult k_mapped(int n, double eta) { return k_mapped(n, eta, pi / n); }

InequalityResult k5_mapped(double eta) { return k_mapped(5, eta); }

InequalityResult k6_mapped(double eta) { return k_mapped(6, eta); }

double steering_threshold_bisection() {
  return bisect_root([](double eta) { return unsharp_steering_scenario(eta, 0.0).value - 1.0; }, 0.05, 1.0).value();
}

double lgi_threshold_bisection(int n) {
  return bisect_root([n](double eta) { return k_mapped(n, eta).value - lg_upper_bound(n); }, 0.05, 1.0).value();
}

std::vector<ThresholdReport> threshold_reports() {
  constexpr double tol = 1e-4;
  std::vector<ThresholdReport> out;
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  out.push_back({"steering_triple", inv_sqrt3, steering_threshold_bisection(), tol});
  out.push_back({"joint_measurability", inv_sqrt3, joint_measurability_boundary(), tol});
  for (int n = 4; n <= 8; ++n) {
    out.push_back({"lgi_n" + std::to_string(n), eta_threshold_lgi(n), lgi_threshold_bisection(n), tol});
  }
  return out;
}

std::vector<HierarchyRow> hierarchy_scan(const std::vector<double>& eta_grid, double omega_t) {
  return parallel_map(eta_grid.size(), [&](std::size_t k) {
    const double eta = eta_grid[k];
    return HierarchyRow{eta, unsharp_steering_scenario(eta, omega_t), k5_mapped(eta), k6_mapped(eta)};
  });
}

// ---------------------------------------------------------------------------

namespace {

Scenario damped_sigma_x_scenario(double gamma_dt, double omega_dt, double start_units, double gap_units) {
  const Povm sx = projective_povm(Observable(pauli::x()));
  std::vector<AliceSetting> alice;
  alice.push_back(alice_setting(sx, amplitude_damping_channel(gamma_dt, omega_dt, start_units),
                                amplitude_damping_channel(gamma_dt, omega_dt, gap_units)));
  return Scenario(mixed_qubit(), std::move(alice), Channel::identity(2), {sx});
}

int rk4_steps(double gamma_dt, double omega_dt, double units) {
  const double scale = (gamma_dt + std::abs(omega_dt)) * units;
  return std::max(200, static_cast<int>(std::ceil(200.0 * scale)));
}

DensityMatrix rk4_evolve(const DensityMatrix& rho, double gamma_dt, double omega_dt, double units) {
  if (units == 0.0) return rho;
  return rk4_lindblad(rho, amplitude_damping_spec(gamma_dt, omega_dt), units, rk4_steps(gamma_dt, omega_dt, units));
}

}  // namespace

double damped_sigma_x_correlator(double gamma_dt, double omega_dt, double start_units, double gap_units) {
  return correlator(damped_sigma_x_scenario(gamma_dt, omega_dt, start_units, gap_units), 0, 0);
}

double damped_sigma_x_correlator_rk4(double gamma_dt, double omega_dt, double start_units, double gap_units) {
  const DensityMatrix before = rk4_evolve(mixed_qubit(), gamma_dt, omega_dt, start_units);
  double e = 0.0;
  for (const Branch& b : measure_statistics(before, projective_povm(Observable(pauli::x())))) {
    if (!b.used) continue;
    const DensityMatrix after = rk4_evolve(b.post, gamma_dt, omega_dt, gap_units);
    e += b.outcome * b.prob * after.expectation(pauli::x());
  }
  return e;
}

namespace {

template <typename Correlator>
InequalityResult k4_from(Correlator&& c) {
  // LG times t_k = k dt, k = 1..4
  const std::array<double, 3> forward{c(1.0, 1.0), c(2.0, 1.0), c(3.0, 1.0)};
  return lg_sum(forward, c(1.0, 3.0), 4);
}

}  // namespace

InequalityResult k4_damped_simulated(double gamma_dt, double omega_dt) {
  return k4_from([&](double start, double gap) { return damped_sigma_x_correlator(gamma_dt, omega_dt, start, gap); });
}

InequalityResult s2_damped_simulated(double gamma_dt, double omega_dt) {
  std::vector<AliceSetting> alice;
  std::vector<Povm> bob;
  for (const CMatrix& op : {pauli::x(), pauli::y()}) {
    const Povm p = projective_povm(Observable(op));
    alice.push_back(alice_setting(p));
    bob.push_back(p);
  }
  const Scenario sc(mixed_qubit(), std::move(alice), amplitude_damping_channel(gamma_dt, omega_dt, 1.0),
                    std::move(bob));
  return quadratic_steering_of(sc);
}

ScanRecord fig3_point(double gamma_dt, double omega_dt) {
  ScanRecord r;
  r.parameter = gamma_dt;
  r.set("K4_minus_2_paper", k4_damped(gamma_dt, omega_dt).value - 2.0);
  r.set("S2_minus_1_paper", s2_damped(gamma_dt, omega_dt).value - 1.0);
  r.set("K4_minus_2_simulated", k4_damped_simulated(gamma_dt, omega_dt).value - 2.0);
  r.set("S2_minus_1_simulated", s2_damped_simulated(gamma_dt, omega_dt).value - 1.0);
  const InequalityResult k4_rk4 = k4_from(
      [&](double start, double gap) { return damped_sigma_x_correlator_rk4(gamma_dt, omega_dt, start, gap); });
  r.set("K4_minus_2_rk4", k4_rk4.value - 2.0);
  r.set("Cxx_paper", std::cos(omega_dt) * std::exp(-gamma_dt));
  r.set("Cxx_simulated", damped_sigma_x_correlator(gamma_dt, omega_dt, 0.0, 1.0));
  return r;
}

std::vector<ScanRecord> fig3_scan(const std::vector<double>& gamma_grid, double omega_dt) {
  return parallel_map(gamma_grid.size(), [&](std::size_t k) { return fig3_point(gamma_grid[k], omega_dt); });
}

DampingCrossings damping_crossings(double omega_dt, double gamma_max) {
  DampingCrossings out;
  out.omega_dt = omega_dt;
  out.s2_paper_at_zero = s2_damped(0.0, omega_dt).value;
  auto crossing = [gamma_max](const std::function<double(double)>& excess) -> std::optional<double> {
    // Only a genuine violation at gamma = 0 can cross; a boundary start cannot.
    if (excess(0.0) <= kViolationMargin) return std::nullopt;
    return bisect_root(excess, 0.0, gamma_max, 1e-12);
  };
  out.k4_paper = crossing([&](double g) { return k4_damped(g, omega_dt).value - 2.0; });
  out.k4_simulated = crossing([&](double g) { return k4_damped_simulated(g, omega_dt).value - 2.0; });
  out.s2_paper = crossing([&](double g) { return s2_damped(g, omega_dt).value - 1.0; });
  out.s2_simulated = crossing([&](double g) { return s2_damped_simulated(g, omega_dt).value - 1.0; });
  return out;
}

// ---------------------------------------------------------------------------

SpinJEmbedding spinj_embed(std::size_t two_j_plus_1) {
  if (two_j_plus_1 < 2) throw Error(ErrorCode::InvalidDimension, "spin-j embedding needs 2j+1 >= 2");
  const auto d = static_cast<Eigen::Index>(two_j_plus_1);
  CMatrix gamma_z = CMatrix::Zero(d, d);
  for (Eigen::Index b = 0; b + 1 < d; b += 2) {
    gamma_z(b, b) = 1.0;
    gamma_z(b + 1, b + 1) = -1.0;
  }
  CMatrix parity = CMatrix::Zero(d, d);
  if (d % 2 == 1) parity(d - 1, d - 1) = 1.0 / std::sqrt(2.0);
  Observable q((gamma_z + parity) / std::sqrt(static_cast<double>(d)));
  Povm sign = sign_povm(q);
  return SpinJEmbedding{two_j_plus_1, std::move(gamma_z), std::move(parity), std::move(q), std::move(sign)};
}

Channel SpinJEmbedding::evolution(double omega_t) const {
  const auto d = static_cast<Eigen::Index>(dim);
  CMatrix h = CMatrix::Zero(d, d);
  for (Eigen::Index b = 0; b + 1 < d; b += 2) h.block(b, b, 2, 2) = 0.5 * pauli::x();
  return unitary_channel(h, omega_t);
}

InequalityResult spinj_k4(const SpinJEmbedding& emb, double omega_dt) {
  const DensityMatrix rho = DensityMatrix::maximally_mixed(emb.dim);
  // (start, gap) in units of dt for C21, C32, C43 and C41.
  const std::array<std::pair<double, double>, 4> schedule{{{1, 1}, {2, 1}, {3, 1}, {1, 3}}};
  std::vector<AliceSetting> alice;
  for (const auto& [start, gap] : schedule) {
    alice.push_back(alice_setting(emb.sign_measurement, emb.evolution(start * omega_dt), emb.evolution(gap * omega_dt)));
  }
  const Scenario sc(rho, std::move(alice), Channel::identity(emb.dim), {emb.sign_measurement});
  const std::array<double, 3> forward{correlator(sc, 0, 0), correlator(sc, 1, 0), correlator(sc, 2, 0)};
  return lg_sum(forward, correlator(sc, 3, 0), 4);
}

}  // namespace tempcorr
