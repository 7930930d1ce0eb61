#pragma once

// Independent ground truth. Joint probabilities here are re-derived from the
// raw operators (effect square roots by Schur decomposition, Kraus sums written
// out) without going through the Lüders helpers in quantum/seqcorr.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tempcorr/evolve.hpp"
#include "tempcorr/seqcorr.hpp"

namespace tempcorr::oracle {

struct OracleReport {
  std::string quantity;
  double analytic = 0.0;
  double oracle = 0.0;
  double abs_diff = 0.0;
  double tolerance = 0.0;

  bool passes() const { return abs_diff <= tolerance; }
};

OracleReport make_report(std::string quantity, double analytic, double oracle, double tolerance);

enum class Propagation {
  Kraus,       // sum_k K rho K^dag
  Integrator,  // RK4 on the channel's Lindblad generator when it has one
};

JointDistribution brute_force_joint(const Scenario& sc, std::size_t i, std::size_t j,
                                    Propagation propagation = Propagation::Kraus);

// Qubit scenario with random initial state, random sharp or unsharp settings,
// and amplitude-damping channels with gamma in [0, 2] (dt = 1).
Scenario random_scenario(std::mt19937_64& rng);

using Objective = std::function<double(std::span<const double>)>;

struct GridSpec {
  std::vector<std::pair<double, double>> ranges;  // one per parameter, at most 3
  std::size_t resolution = 200;                   // points per parameter, >= 200
  double refine_tol = 1e-6;                       // parameter tolerance of the refinement
};

struct ExtremalResult {
  std::vector<double> best_params;
  double best_value = 0.0;
};

// Grid argmax followed by golden-section refinement around the best cell.
ExtremalResult extremal_search(const Objective& objective, const GridSpec& grid);

// Named one-parameter families: "temporal_chsh", "steering_sum" (A1 = Q(0),
// A2 = Q(2p), B1 = Q(p), B2 = Q(-p)), "k4" .. "k8" (mapped LG sums at spacing p,
// eta = 1), and "spinj_k4:<dim>" (embedded K4 at omega dt = p).
Objective named_objective(std::string_view name);
ExtremalResult extremal_search(std::string_view name, const GridSpec& grid);

}  // namespace tempcorr::oracle
