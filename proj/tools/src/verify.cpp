#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "tempcorr/cli.hpp"
#include "tempcorr/evolve.hpp"
#include "tempcorr/ineq.hpp"
#include "tempcorr/parallel.hpp"
#include "tempcorr/seqcorr.hpp"

namespace tempcorr::cli {

using oracle::OracleReport;
using std::numbers::pi;

bool SuiteResult::passed() const { return first_failure() == nullptr; }

const OracleReport* SuiteResult::first_failure() const {
  for (const OracleReport& r : reports)
    if (!r.passes()) return &r;
  return nullptr;
}

std::string report_json(const OracleReport& r) {
  nlohmann::ordered_json doc;
  doc["quantity"] = r.quantity;
  doc["analytic"] = r.analytic;
  doc["oracle"] = r.oracle;
  doc["abs_diff"] = r.abs_diff;
  doc["tolerance"] = r.tolerance;
  return doc.dump() + '\n';
}

namespace {

class Collector {
 public:
  explicit Collector(double scale) : scale_(scale) {}

  void check(std::string quantity, double analytic, double oracle_value, double tolerance) {
    reports_.push_back(oracle::make_report(std::move(quantity), analytic, oracle_value, tolerance * scale_));
  }
  void add(const OracleReport& r) { check(r.quantity, r.analytic, r.oracle, r.tolerance); }
  std::vector<OracleReport> take() { return std::move(reports_); }

 private:
  double scale_;
  std::vector<OracleReport> reports_;
};

// Worst entry of two joint distributions as a single report.
OracleReport worst_entry(std::string quantity, const JointDistribution& ref, const JointDistribution& other,
                         double tolerance) {
  OracleReport worst = oracle::make_report(quantity, 0.0, 0.0, tolerance);
  for (const auto& [ab, p] : ref) {
    const auto it = other.find(ab);
    const double q = it == other.end() ? std::nan("") : it->second;
    const OracleReport r = oracle::make_report(quantity, p, q, tolerance);
    if (!(r.abs_diff <= worst.abs_diff)) worst = r;
  }
  if (ref.size() != other.size()) worst = oracle::make_report(quantity, 0.0, std::nan(""), tolerance);
  return worst;
}

OracleReport worst_matrix_entry(std::string quantity, const CMatrix& a, const CMatrix& b, double tolerance) {
  OracleReport worst = oracle::make_report(quantity, 0.0, 0.0, tolerance);
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      for (int part = 0; part < 2; ++part) {
        const double x = part == 0 ? a(r, c).real() : a(r, c).imag();
        const double y = part == 0 ? b(r, c).real() : b(r, c).imag();
        const OracleReport rep = oracle::make_report(quantity, x, y, tolerance);
        if (!(rep.abs_diff <= worst.abs_diff)) worst = rep;
      }
  return worst;
}

DensityMatrix random_qubit_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double cos_t = 2.0 * unit(rng) - 1.0;
  const double phi = 2.0 * pi * unit(rng);
  const double r = std::cbrt(unit(rng));
  const double sin_t = std::sqrt(1.0 - cos_t * cos_t);
  return DensityMatrix::from_bloch(r * sin_t * std::cos(phi), r * sin_t * std::sin(phi), r * cos_t);
}

Eigen::Vector3d random_axis(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector3d v(g(rng), g(rng), g(rng));
  return v.normalized();
}

void suite_seqcorr(const RunConfig& cfg, Collector& c) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<Scenario> scenarios;
  scenarios.reserve(200);
  for (int k = 0; k < 200; ++k) scenarios.push_back(oracle::random_scenario(rng));
  const auto per_scenario = parallel_map(scenarios.size(), [&](std::size_t k) {
    std::vector<OracleReport> out;
    const Scenario& sc = scenarios[k];
    for (std::size_t i = 0; i < sc.alice().size(); ++i)
      for (std::size_t j = 0; j < sc.bob().size(); ++j) {
        const JointDistribution ref = joint_probability(sc, i, j);
        const std::string tag = fmt::format("scenario{}[{},{}]", k, i, j);
        out.push_back(worst_entry("joint_kraus:" + tag, ref, oracle::brute_force_joint(sc, i, j), 1e-10));
        out.push_back(worst_entry("joint_rk4:" + tag, ref,
                                  oracle::brute_force_joint(sc, i, j, oracle::Propagation::Integrator), 1e-6));
      }
    return out;
  });
  for (const auto& batch : per_scenario)
    for (const OracleReport& r : batch) c.add(r);
}

void suite_damping(const RunConfig& cfg, Collector& c) {
  std::mt19937_64 rng(cfg.seed + 1);
  std::uniform_real_distribution<double> g(0.0, 3.0);
  std::uniform_real_distribution<double> w(0.0, 2.0 * pi);
  for (int k = 0; k < 50; ++k) {
    const double gamma = g(rng);
    const double omega = w(rng);
    const DensityMatrix rho = random_qubit_state(rng);
    const DensityMatrix closed = apply_channel(rho, amplitude_damping_channel(gamma, omega, 1.0));
    const DensityMatrix rk4 = rk4_lindblad(rho, amplitude_damping_spec(gamma, omega), 1.0, 400);
    c.add(worst_matrix_entry(fmt::format("kraus_vs_rk4[{}]", k), closed.mat(), rk4.mat(), 1e-6));
    const Eigen::Vector3d mapped = amplitude_damping_bloch_map(gamma, omega, 1.0)(rho.bloch());
    c.check(fmt::format("bloch_map_vs_kraus[{}]", k), 0.0, (mapped - closed.bloch()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

void suite_closed_forms(const RunConfig& cfg, Collector& c) {
  for (const ScanRecord& r : fig2_rows(cfg)) {
    c.check(fmt::format("fig2_S[x={}]", format_number(r.parameter)), r.at("S_analytic"), r.at("S_simulated"), 1e-10);
    c.check(fmt::format("fig2_Sprime[x={}]", format_number(r.parameter)), r.at("Sprime_analytic"),
            r.at("Sprime_simulated"), 1e-10);
  }
  for (int a = 1; a <= 10; ++a)
    for (int b = 0; b < 8; ++b) {
      const double eta = a / 10.0;
      const double wt = b * pi / 8.0;
      const double expect = 3.0 * eta * eta * std::cos(wt) * std::cos(wt);
      c.check(fmt::format("S3_heisenberg[eta={},wt={}]", format_number(eta), format_number(wt)), expect,
              unsharp_steering_scenario(eta, wt, Picture::Heisenberg).value, 1e-10);
      c.check(fmt::format("S3_schrodinger[eta={},wt={}]", format_number(eta), format_number(wt)), expect,
              unsharp_steering_scenario(eta, wt, Picture::Schrodinger).value, 1e-10);
    }
  for (int a = 1; a <= 10; ++a) {
    const double eta = a / 10.0;
    c.check(fmt::format("K5_scaling[eta={}]", format_number(eta)), eta * eta * 5.0 * std::cos(pi / 5),
            k5_mapped(eta).value, 1e-10);
    c.check(fmt::format("K6_scaling[eta={}]", format_number(eta)), eta * eta * 6.0 * std::cos(pi / 6),
            k6_mapped(eta).value, 1e-10);
  }
  for (double g : {0.0, 0.3, 1.0, 2.5}) {
    const double sim = damped_sigma_x_correlator(g, cfg.omega_dt, 0.0, 1.0);
    c.check(fmt::format("Cxx_kraus_vs_rk4[g={}]", format_number(g)), sim,
            damped_sigma_x_correlator_rk4(g, cfg.omega_dt, 0.0, 1.0), 1e-6);
    c.check(fmt::format("Cxx_half_rate[g={}]", format_number(g)), std::exp(-g / 2.0) * std::cos(cfg.omega_dt), sim,
            1e-10);
  }
}

void suite_invariants(const RunConfig& cfg, Collector& c) {
  std::mt19937_64 rng(cfg.seed + 2);
  std::uniform_real_distribution<double> eta_dist(0.05, 1.0);
  std::uniform_real_distribution<double> g(0.0, 3.0);
  std::uniform_real_distribution<double> w(0.0, 2.0 * pi);
  for (int k = 0; k < 100; ++k) {
    const DensityMatrix rho = random_qubit_state(rng);
    const Povm povm = unsharp_povm(random_axis(rng), eta_dist(rng));
    double total = 0.0;
    for (const Effect& e : povm.effects()) total += rho.expectation(e.mat);
    c.check(fmt::format("povm_completeness[{}]", k), 1.0, total, 1e-10);
    for (const Branch& b : measure_statistics(rho, povm)) {
      c.check(fmt::format("update_trace[{},{}]", k, b.outcome), 1.0, real_trace(b.post.mat()), 1e-12);
      c.check(fmt::format("update_positivity[{},{}]", k, b.outcome), 0.0,
              std::max(0.0, -min_eigenvalue(b.post.mat())), 1e-10);
    }
    const DensityMatrix evolved = apply_channel(rho, amplitude_damping_channel(g(rng), w(rng), 1.0));
    c.check(fmt::format("channel_trace[{}]", k), 1.0, real_trace(evolved.mat()), 1e-12);
    c.check(fmt::format("channel_positivity[{}]", k), 0.0, std::max(0.0, -min_eigenvalue(evolved.mat())), 1e-10);
  }
  for (int k = 1; k <= 20; ++k) {
    const double eta = k / 20.0;
    const GlobalPovm gp = global_povm(eta);
    c.check(fmt::format("global_povm_marginals[eta={}]", format_number(eta)), 0.0, gp.max_marginal_error, 1e-12);
    c.check(fmt::format("global_povm_completeness[eta={}]", format_number(eta)), 0.0, gp.completeness_error, 1e-12);
    c.check(fmt::format("global_povm_min_eigenvalue[eta={}]", format_number(eta)), (1.0 - eta * std::sqrt(3.0)) / 8.0,
            gp.min_eigenvalue, 1e-12);
  }
  c.check("joint_measurability_boundary", 1.0 / std::sqrt(3.0), joint_measurability_boundary(), 1e-10);
  for (int k = 0; k < 20; ++k) {
    const double gamma = g(rng);
    const double omega = w(rng);
    const double t = g(rng) / 2.0;
    const double s = g(rng) / 2.0;
    const DensityMatrix rho = random_qubit_state(rng);
    const DensityMatrix two = apply_channel(apply_channel(rho, amplitude_damping_channel(gamma, omega, t)),
                                            amplitude_damping_channel(gamma, omega, s));
    const DensityMatrix one = apply_channel(rho, amplitude_damping_channel(gamma, omega, t + s));
    c.add(worst_matrix_entry(fmt::format("semigroup[{}]", k), one.mat(), two.mat(), 1e-10));
  }
}

void suite_maxima(const RunConfig&, Collector& c) {
  const oracle::GridSpec spec{{{0.0, pi}}, 400, 1e-7};
  const double tsirelson = 2.0 * std::numbers::sqrt2;
  c.check("max_temporal_chsh", tsirelson, oracle::extremal_search("temporal_chsh", spec).best_value, 1e-5);
  c.check("max_steering_sum", tsirelson, oracle::extremal_search("steering_sum", spec).best_value, 1e-5);
  c.check("max_K5", 5.0 * std::cos(pi / 5), oracle::extremal_search("k5", spec).best_value, 1e-4);
  c.check("max_K6", 6.0 * std::cos(pi / 6), oracle::extremal_search("k6", spec).best_value, 1e-5);
}

void suite_spinj(const RunConfig&, Collector& c) {
  const oracle::GridSpec spec{{{0.0, pi / 2}}, 400, 1e-8};
  for (int d : {2, 4, 6, 8}) {
    const std::string name = fmt::format("spinj_k4:{}", d);
    c.check("max_" + name, 2.0 * std::numbers::sqrt2, oracle::extremal_search(name, spec).best_value, 1e-6);
  }
}

void suite_thresholds(const RunConfig&, Collector& c) {
  for (const ThresholdReport& r : threshold_reports()) c.check(r.name, r.formula_value, r.simulated_value, r.tolerance);
}

void suite_theorem2(const RunConfig& cfg, Collector& c) {
  const CorollaryReport report = theorem2_corollary_check(open_grid(cfg.grid_points, 0.0, pi));
  for (const CorollaryRow& row : report.rows) {
    const double ok = row.lgi_violated && row.steering_violated ? 1.0 : 0.0;
    c.check(fmt::format("theorem2[x={}]", format_number(row.x)), 1.0, ok, 0.0);
  }
}

using SuiteFn = void (*)(const RunConfig&, Collector&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites{
      {"seqcorr", suite_seqcorr},       {"damping", suite_damping}, {"closed_forms", suite_closed_forms},
      {"invariants", suite_invariants}, {"maxima", suite_maxima},   {"spinj", suite_spinj},
      {"thresholds", suite_thresholds}, {"theorem2", suite_theorem2},
  };
  return suites;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

SuiteResult run_suite(const std::string& name, const RunConfig& cfg) {
  for (const auto& [suite, fn] : registry()) {
    if (suite == name) {
      Collector c(cfg.tolerance_scale);
      fn(cfg, c);
      return SuiteResult{name, c.take()};
    }
  }
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace tempcorr::cli
