#pragma once

// Temporal inequality evaluators and their macrorealist / hidden-state bounds.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tempcorr {

// A margin above this counts as a violation; boundary values report false.
inline constexpr double kViolationMargin = 1e-9;

struct InequalityResult {
  double value = 0.0;
  double classical_bound = 0.0;             // upper bound
  std::optional<double> lower_bound;        // two-sided families only
  bool violated = false;
  double margin = 0.0;                      // distance past the nearest bound (negative inside)
};

InequalityResult make_result(double value, double upper, std::optional<double> lower = std::nullopt);

// |E11 + E12 + E21 - E22| <= 2
InequalityResult temporal_chsh(double e11, double e12, double e21, double e22);

// Analog-CHSH steering sum on the grid e(i, j) = E(A_i, B_j), bound 2.
InequalityResult chsh_steering(const Eigen::Matrix2d& e);

// Closed forms of the analog-CHSH steering sum for the equal-gap schedule
// A1 = Q(x), A2 = Q(3x), B1 = Q(2x), B2 = Q(4x) and for the schedule with the
// first and last times swapped.
double steering_closed_form_S(double x);
double steering_closed_form_Sprime(double x);

struct ConditionalStat {
  double prob;
  double expectation;  // <B_i> conditioned on Alice's outcome
};

// S_N = sum_i sum_a p(a) <B_i>_a^2 <= 1, for N = 2 or 3 settings.
InequalityResult quadratic_steering(const std::vector<std::vector<ConditionalStat>>& terms, int n);

// K_n = C21 + C32 + ... + C_n(n-1) - C_n1. `forward` holds the n-1 nearest-neighbour
// correlators in order; bounds -n (odd) or -(n-2) (even) below, n-2 above.
InequalityResult lg_sum(std::span<const double> forward, double closing, int n);

double lg_upper_bound(int n);
double lg_lower_bound(int n);

// Damped-qubit expressions in the form they are usually quoted:
// K4 = 3 e^{-g} cos x - e^{-3g} cos 3x (bound 2), S2 = 2 e^{-2g} cos^2 x (bound 1).
InequalityResult k4_damped(double gamma_dt, double omega_dt);
InequalityResult s2_damped(double gamma_dt, double omega_dt);

// Quoted (not derived here) Tsirelson-like maxima of K5 for macrorealist
// and noncontextual models.
inline constexpr double kK5MacrorealistQuotedBound = 4.04;
inline constexpr double kK5NoncontextualQuotedBound = 3.94;

}  // namespace tempcorr
