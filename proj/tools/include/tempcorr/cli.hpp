#pragma once

// Command-line front end. `run` is the whole program minus process exit, so
// tests and the acceptance harness can drive it in-process.

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "tempcorr/oracle.hpp"
#include "tempcorr/scenarios.hpp"

namespace tempcorr::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitIo = 3,
  kExitThresholdGate = 4,
  kExitVerifyGate = 5,
};

enum class Command { Fig2, Fig3, Thresholds, Hierarchy, Verify };
enum class Format { Csv, Json };

struct RunConfig {
  Command command = Command::Fig2;
  std::size_t grid_points = 500;
  double omega_dt = std::numbers::pi / 4;
  double gamma_min = 0.0;
  double gamma_max = 3.0;
  std::optional<double> eta;
  std::string output_path;  // empty: stdout
  Format format = Format::Csv;
  std::uint64_t seed = 20240611;
  std::string suite = "all";
  // Multiplies every verify tolerance; values below 1 exercise the failure path.
  double tolerance_scale = 1.0;
};

// Throws std::invalid_argument with the user-facing message.
void validate(const RunConfig& cfg);

// ---- table builders shared by the commands and the acceptance harness ----

std::vector<ScanRecord> fig2_rows(const RunConfig& cfg);
std::vector<ScanRecord> fig3_rows(const RunConfig& cfg);

inline constexpr const char* kFig2Header =
    "x,S_analytic,Sprime_analytic,S_simulated,Sprime_simulated,max_violation_margin";
inline constexpr const char* kFig3Header =
    "gamma_dt,K4_minus_2_paper,S2_minus_1_paper,K4_minus_2_simulated,S2_minus_1_simulated";

// Plain `{:.17g}`.
std::string format_number(double v);

std::string fig2_text(const std::vector<ScanRecord>& rows, Format format);
std::string fig3_text(const std::vector<ScanRecord>& rows, Format format);
std::string fig3_sidecar(const DampingCrossings& crossings);
std::string thresholds_json(const std::vector<ThresholdReport>& reports);
std::string hierarchy_text(const std::vector<HierarchyRow>& rows, Format format);
std::string theorem2_table(const CorollaryReport& report);

// Sidecar next to the fig3 output: "<stem>.crossings.json".
std::string sidecar_path(const std::string& output_path);

// ---- verification suites ----

struct SuiteResult {
  std::string name;
  std::vector<oracle::OracleReport> reports;

  bool passed() const;
  const oracle::OracleReport* first_failure() const;
};

std::vector<std::string> suite_names();
// Throws std::invalid_argument for an unknown suite.
SuiteResult run_suite(const std::string& name, const RunConfig& cfg);
std::string report_json(const oracle::OracleReport& report);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tempcorr::cli
