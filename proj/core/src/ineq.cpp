#include "tempcorr/ineq.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tempcorr/error.hpp"
#include "tempcorr/matcore.hpp"

namespace tempcorr {

namespace {

void require_correlator(double e) {
  if (!(std::abs(e) <= 1.0 + kDerivedTol)) {
    throw Error(ErrorCode::InvalidState, "correlator " + std::to_string(e) + " outside [-1, 1]");
  }
}

}  // namespace

InequalityResult make_result(double value, double upper, std::optional<double> lower) {
  double margin = value - upper;
  if (lower) margin = std::max(margin, *lower - value);
  return InequalityResult{value, upper, lower, margin > kViolationMargin, margin};
}

InequalityResult temporal_chsh(double e11, double e12, double e21, double e22) {
  for (double e : {e11, e12, e21, e22}) require_correlator(e);
  return make_result(std::abs(e11 + e12 + e21 - e22), 2.0);
}

InequalityResult chsh_steering(const Eigen::Matrix2d& e) {
  for (double v : e.reshaped()) require_correlator(v);
  const double sum_b1 = e(0, 0) + e(1, 0);
  const double sum_b2 = e(0, 1) + e(1, 1);
  const double diff_b1 = e(0, 0) - e(1, 0);
  const double diff_b2 = e(0, 1) - e(1, 1);
  return make_result(std::hypot(sum_b1, sum_b2) + std::hypot(diff_b1, diff_b2), 2.0);
}

double steering_closed_form_S(double x) {
  const double c1 = std::cos(x);
  const double c3 = std::cos(3.0 * x);
  // max(., 0) guards the radicands against -1e-17 style round-off.
  const double a = 5.0 * c1 * c1 + c3 * c3 + 2.0 * c3 * c1;
  const double b = c1 * c1 + c3 * c3 - 2.0 * c3 * c1;
  return std::sqrt(std::max(a, 0.0)) + std::sqrt(std::max(b, 0.0));
}

double steering_closed_form_Sprime(double x) {
  const double c1 = std::cos(x);
  const double c2 = std::cos(2.0 * x);
  const double c3 = std::cos(3.0 * x);
  const double common = c1 * c1 + 2.0 * c2 * c2 + c3 * c3;
  const double cross = 2.0 * c2 * (c1 + c3);
  return std::sqrt(std::max(common + cross, 0.0)) + std::sqrt(std::max(common - cross, 0.0));
}

InequalityResult quadratic_steering(const std::vector<std::vector<ConditionalStat>>& terms, int n) {
  if (n != 2 && n != 3) throw Error(ErrorCode::ArityMismatch, "quadratic steering needs N = 2 or 3");
  if (static_cast<int>(terms.size()) != n) {
    throw Error(ErrorCode::ArityMismatch, "expected " + std::to_string(n) + " setting terms, got " +
                                              std::to_string(terms.size()));
  }
  double value = 0.0;
  for (const auto& setting : terms) {
    for (const ConditionalStat& s : setting) value += s.prob * s.expectation * s.expectation;
  }
  return make_result(value, 1.0);
}

double lg_upper_bound(int n) { return n - 2.0; }

double lg_lower_bound(int n) { return n % 2 == 1 ? -static_cast<double>(n) : -(n - 2.0); }

InequalityResult lg_sum(std::span<const double> forward, double closing, int n) {
  if (n < 3) throw Error(ErrorCode::ArityMismatch, "LG sums need n >= 3");
  if (static_cast<int>(forward.size()) != n - 1) {
    throw Error(ErrorCode::ArityMismatch, "K_" + std::to_string(n) + " needs " + std::to_string(n - 1) +
                                              " forward correlators, got " + std::to_string(forward.size()));
  }
  double value = -closing;
  for (double c : forward) value += c;
  return make_result(value, lg_upper_bound(n), lg_lower_bound(n));
}

InequalityResult k4_damped(double gamma_dt, double omega_dt) {
  const double value = 3.0 * std::exp(-gamma_dt) * std::cos(omega_dt) -
                       std::exp(-3.0 * gamma_dt) * std::cos(3.0 * omega_dt);
  return make_result(value, 2.0);
}

InequalityResult s2_damped(double gamma_dt, double omega_dt) {
  const double c = std::cos(omega_dt);
  return make_result(2.0 * std::exp(-2.0 * gamma_dt) * c * c, 1.0);
}

}  // namespace tempcorr
