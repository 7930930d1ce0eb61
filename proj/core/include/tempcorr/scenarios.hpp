#pragma once

// Experiment drivers: figure scans, threshold searches, the joint-measurability
// construction, mapped n-term LG scenarios, the permuted-LGI corollary check,
// and the spin-j block embedding.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tempcorr/evolve.hpp"
#include "tempcorr/ineq.hpp"
#include "tempcorr/quantum.hpp"
#include "tempcorr/seqcorr.hpp"

namespace tempcorr {

struct ScanRecord {
  double parameter = 0.0;
  std::vector<std::pair<std::string, double>> columns;

  void set(const std::string& name, double value);
  // Throws std::out_of_range for unknown names.
  double at(const std::string& name) const;
  bool all_finite() const;
};

struct ThresholdReport {
  std::string name;
  double formula_value = 0.0;
  double simulated_value = 0.0;
  double tolerance = 0.0;

  double abs_diff() const;
  bool passes() const;
};

// n points strictly inside (lo, hi): lo + (hi - lo) k / (n + 1), k = 1..n.
std::vector<double> open_grid(std::size_t n, double lo, double hi);
// n >= 2 points including both ends.
std::vector<double> closed_grid(std::size_t n, double lo, double hi);

// Largest x in [lo, hi] where f changes sign, by bisection to `tol`.
// Requires f(lo) and f(hi) to have opposite signs; returns nullopt otherwise.
std::optional<double> bisect_root(const std::function<double(double)>& f, double lo, double hi,
                                  double tol = 1e-12);

// ---- rotated-observable scenarios on the maximally mixed qubit ----

// Alice measures Q(alice_angles[i]) and Bob Q(bob_angles[j]), both with sharpness
// eta (eta = 1 is projective), with no evolution between them.
Scenario rotated_scenario(const std::vector<double>& alice_angles, const std::vector<double>& bob_angles,
                          double eta = 1.0);

// One Alice/Bob pair measuring sigma_z at times t_first and t_second under
// precession at angular frequency omega, starting from the maximally mixed
// state. In the Heisenberg picture this measures Q(omega t_first) then
// Q(omega t_second); a negative gap is applied as the inverse unitary.
Scenario lg_pair_scenario(double t_first, double t_second, double omega);

// Precession generator whose Heisenberg action maps sigma_z to Q(omega t).
CMatrix precession_hamiltonian(double omega);

// ---- analog-CHSH steering scan ----

Eigen::Matrix2d steering_grid_forward(double x);   // A = Q(x), Q(3x); B = Q(2x), Q(4x)
Eigen::Matrix2d steering_grid_permuted(double x);  // times 1 and 4 swapped

ScanRecord fig2_point(double x);
std::vector<ScanRecord> fig2_scan(const std::vector<double>& x_grid);

// ---- permuted four-term LGIs under unitary evolution ----

struct PermutedLgi {
  std::array<int, 4> ordering{};  // time indices 1..4 in LG order
  InequalityResult result;
};

struct CorollaryRow {
  double x = 0.0;
  std::vector<PermutedLgi> lgis;  // every ordering, reversals removed
  std::size_t best = 0;           // index into lgis with the largest margin
  bool lgi_violated = false;
  InequalityResult steering;
  InequalityResult steering_permuted;
  bool steering_violated = false;
};

struct CorollaryReport {
  std::vector<CorollaryRow> rows;
  bool verdict = false;  // every row has an LGI and a steering violation
};

// C(i, j) for sharp Q measurements at times i*dt, j*dt on the maximally mixed state.
Eigen::Matrix4d equal_gap_correlators(double x);
CorollaryRow corollary_row(double x);
CorollaryReport theorem2_corollary_check(const std::vector<double>& x_grid);

// ---- unsharp measurements and joint measurability ----

double eta_threshold_lgi(int n);

struct GlobalPovm {
  std::vector<CMatrix> elements;  // G(a1, a2, a3), a_k in {+1, -1}, a1 slowest
  std::vector<std::array<int, 3>> labels;
  double min_eigenvalue = 0.0;
  double max_marginal_error = 0.0;
  double completeness_error = 0.0;
  bool marginal_check = false;
  bool positive = false;
};

// G(a) = (1 + eta (a1 sx + a2 sy + a3 sz)) / 8
GlobalPovm global_povm(double eta);
double joint_measurability_boundary(double tol = 1e-12);

enum class Picture { Heisenberg, Schrodinger };

// Three unsharp settings along z, y, x; evolution U = exp(-i sx wt/2) for the
// first two and V = exp(-i sy wt/2) for the third; Bob measures the evolved
// sigma_z, sigma_y, sigma_x.
Scenario unsharp_steering_setup(double eta, double omega_t, Picture picture = Picture::Heisenberg);
InequalityResult unsharp_steering_scenario(double eta, double omega_t, Picture picture = Picture::Heisenberg);

// S_N from a scenario whose settings are paired (A_i, B_i).
InequalityResult quadratic_steering_of(const Scenario& sc);

// ---- mapped n-term LG sums ----

struct MappedLg {
  Scenario scenario;
  // (alice index, bob index) for C21, C32, ..., C_n(n-1), then C_n1.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

// Times t_k = k * spacing (k = 1..n) split between Alice (odd k) and Bob (even
// k, plus a copy of t_1 when n is odd); both sides unsharp at eta.
MappedLg mapped_lg(int n, double eta, double spacing);
InequalityResult k_mapped(int n, double eta, double spacing);
InequalityResult k_mapped(int n, double eta);  // spacing pi/n
InequalityResult k5_mapped(double eta);
InequalityResult k6_mapped(double eta);

double steering_threshold_bisection();
double lgi_threshold_bisection(int n);
std::vector<ThresholdReport> threshold_reports();

struct HierarchyRow {
  double eta;
  InequalityResult s3;
  InequalityResult k5;
  InequalityResult k6;
};
std::vector<HierarchyRow> hierarchy_scan(const std::vector<double>& eta_grid, double omega_t = 0.0);

// ---- amplitude-damped qubit ----

// sigma_x then sigma_x, gap = gap_units * dt, from the maximally mixed state at time 0;
// the first measurement happens after start_units * dt of damped evolution.
double damped_sigma_x_correlator(double gamma_dt, double omega_dt, double start_units, double gap_units);
// Same correlator with the branches propagated by RK4 instead of Kraus maps.
double damped_sigma_x_correlator_rk4(double gamma_dt, double omega_dt, double start_units, double gap_units);

InequalityResult k4_damped_simulated(double gamma_dt, double omega_dt);
// Sharp sigma_x / sigma_y by Alice, one damped step, same axis for Bob.
InequalityResult s2_damped_simulated(double gamma_dt, double omega_dt);

ScanRecord fig3_point(double gamma_dt, double omega_dt);
std::vector<ScanRecord> fig3_scan(const std::vector<double>& gamma_grid, double omega_dt);

struct DampingCrossings {
  double omega_dt = 0.0;
  std::optional<double> k4_paper;
  std::optional<double> k4_simulated;
  std::optional<double> s2_paper;
  std::optional<double> s2_simulated;
  double s2_paper_at_zero = 0.0;
  double tolerance = 1e-8;
};
DampingCrossings damping_crossings(double omega_dt, double gamma_max = 10.0);

// ---- spin-j block embedding ----

struct SpinJEmbedding {
  std::size_t dim = 0;
  CMatrix gamma_z;
  CMatrix parity_fix;  // zero for even dim, 1/sqrt(2) in the last diagonal slot otherwise
  Observable q;
  Povm sign_measurement;

  // Block-diagonal exp(-i omega t sx / 2) (+ 1 on a trailing singlet).
  Channel evolution(double omega_t) const;
};

SpinJEmbedding spinj_embed(std::size_t two_j_plus_1);
// Four-term LG sum for Q measured at equal gaps omega_dt on the maximally mixed state.
InequalityResult spinj_k4(const SpinJEmbedding& emb, double omega_dt);

}  // namespace tempcorr
