#include "tempcorr/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "tempcorr/error.hpp"
#include "tempcorr/ineq.hpp"

namespace tempcorr::cli {

using json = nlohmann::ordered_json;
using std::numbers::pi;

void validate(const RunConfig& cfg) {
  if (cfg.grid_points < 2) throw std::invalid_argument("grid_points must be ≥ 2");
  if (!std::isfinite(cfg.gamma_min) || !std::isfinite(cfg.gamma_max) || cfg.gamma_min > cfg.gamma_max)
    throw std::invalid_argument("gamma range must satisfy gamma_min ≤ gamma_max");
  if (cfg.gamma_min < 0.0) throw std::invalid_argument("gamma_min must be ≥ 0");
  if (!std::isfinite(cfg.omega_dt)) throw std::invalid_argument("omega_dt must be finite");
  if (cfg.eta && !(*cfg.eta > 0.0 && *cfg.eta <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1]");
  if (!(cfg.tolerance_scale >= 0.0)) throw std::invalid_argument("tolerance scale must be ≥ 0");
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

std::vector<ScanRecord> fig2_rows(const RunConfig& cfg) { return fig2_scan(open_grid(cfg.grid_points, 0.0, pi)); }

std::vector<ScanRecord> fig3_rows(const RunConfig& cfg) {
  return fig3_scan(closed_grid(cfg.grid_points, cfg.gamma_min, cfg.gamma_max), cfg.omega_dt);
}

namespace {

std::string csv_table(const char* header, const std::vector<ScanRecord>& rows) {
  std::string out = header;
  out += '\n';
  std::vector<std::string> names;
  std::stringstream hs(header);
  for (std::string col; std::getline(hs, col, ',');) names.push_back(col);
  for (const ScanRecord& r : rows) {
    out += format_number(r.parameter);
    for (std::size_t c = 1; c < names.size(); ++c) {
      out += ',';
      out += format_number(r.at(names[c]));
    }
    out += '\n';
  }
  return out;
}

std::string json_records(const char* key, const std::vector<ScanRecord>& rows) {
  json arr = json::array();
  for (const ScanRecord& r : rows) {
    json obj;
    obj[key] = r.parameter;
    for (const auto& [name, value] : r.columns) obj[name] = value;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + '\n';
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string fig2_text(const std::vector<ScanRecord>& rows, Format format) {
  return format == Format::Csv ? csv_table(kFig2Header, rows) : json_records("x", rows);
}

std::string fig3_text(const std::vector<ScanRecord>& rows, Format format) {
  return format == Format::Csv ? csv_table(kFig3Header, rows) : json_records("gamma_dt", rows);
}

std::string fig3_sidecar(const DampingCrossings& c) {
  // Rate of the simulated sigma_x correlator relative to the quoted e^{-gamma dt}.
  const double g = 1.0;
  const double sim = damped_sigma_x_correlator(g, c.omega_dt, 0.0, 1.0);
  const double cos_x = std::cos(c.omega_dt);
  json rate = nullptr;
  if (std::abs(cos_x) > 1e-12 && sim / cos_x > 0.0) rate = -std::log(sim / cos_x) / g;

  json doc;
  doc["omega_dt"] = c.omega_dt;
  doc["bisection_tolerance"] = c.tolerance;
  doc["k4_crossing_paper"] = optional_number(c.k4_paper);
  doc["k4_crossing_simulated"] = optional_number(c.k4_simulated);
  doc["s2_crossing_paper"] = optional_number(c.s2_paper);
  doc["s2_crossing_simulated"] = optional_number(c.s2_simulated);
  doc["s2_paper_at_zero_damping"] = c.s2_paper_at_zero;
  doc["s2_paper_violated_at_zero_damping"] = c.s2_paper_at_zero - 1.0 > kViolationMargin;
  doc["sigma_x_decay_rate_simulated"] = rate;
  doc["sigma_x_decay_rate_paper"] = 1.0;
  return doc.dump(2) + '\n';
}

std::string thresholds_json(const std::vector<ThresholdReport>& reports) {
  json arr = json::array();
  for (const ThresholdReport& r : reports) {
    json obj;
    obj["name"] = r.name;
    obj["formula_value"] = r.formula_value;
    obj["simulated_value"] = r.simulated_value;
    obj["abs_diff"] = r.abs_diff();
    obj["tolerance"] = r.tolerance;
    obj["passes"] = r.passes();
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + '\n';
}

std::string hierarchy_text(const std::vector<HierarchyRow>& rows, Format format) {
  auto window = [](const HierarchyRow& r) { return r.s3.violated && !r.k5.violated && !r.k6.violated; };
  if (format == Format::Json) {
    json arr = json::array();
    for (const HierarchyRow& r : rows) {
      json obj;
      obj["eta"] = r.eta;
      obj["S3"] = r.s3.value;
      obj["S3_margin"] = r.s3.margin;
      obj["K5"] = r.k5.value;
      obj["K5_margin"] = r.k5.margin;
      obj["K6"] = r.k6.value;
      obj["K6_margin"] = r.k6.margin;
      obj["steering_without_lgi"] = window(r);
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + '\n';
  }
  std::string out = "eta,S3,S3_margin,K5,K5_margin,K6,K6_margin,steering_without_lgi\n";
  for (const HierarchyRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", format_number(r.eta), format_number(r.s3.value),
                       format_number(r.s3.margin), format_number(r.k5.value), format_number(r.k5.margin),
                       format_number(r.k6.value), format_number(r.k6.margin), window(r) ? 1 : 0);
  }
  return out;
}

std::string theorem2_table(const CorollaryReport& report) {
  std::string out = "x,best_ordering,best_lgi_value,best_lgi_margin,S,Sprime,steering_margin,lgi_violated,"
                    "steering_violated\n";
  for (const CorollaryRow& row : report.rows) {
    const PermutedLgi& best = row.lgis.at(row.best);
    const auto& o = best.ordering;
    const double steer = std::max(row.steering.margin, row.steering_permuted.margin);
    out += fmt::format("{},{}-{}-{}-{},{},{},{},{},{},{},{}\n", format_number(row.x), o[0], o[1], o[2], o[3],
                       format_number(best.result.value), format_number(best.result.margin),
                       format_number(row.steering.value), format_number(row.steering_permuted.value),
                       format_number(steer), row.lgi_violated ? 1 : 0, row.steering_violated ? 1 : 0);
  }
  return out;
}

std::string sidecar_path(const std::string& output_path) {
  const auto slash = output_path.find_last_of('/');
  const auto dot = output_path.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? output_path.substr(0, dot) : output_path) + ".crossings.json";
}

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file << text;
  file.close();
  if (!file) throw IoError("failed writing " + path);
}

int cmd_fig2(const RunConfig& cfg, std::ostream& out) {
  emit(fig2_text(fig2_rows(cfg), cfg.format), cfg.output_path, out);
  return kExitOk;
}

int cmd_fig3(const RunConfig& cfg, const std::string& sidecar, std::ostream& out) {
  emit(fig3_text(fig3_rows(cfg), cfg.format), cfg.output_path, out);
  std::string side = sidecar;
  if (side.empty() && !cfg.output_path.empty()) side = sidecar_path(cfg.output_path);
  if (!side.empty()) emit(fig3_sidecar(damping_crossings(cfg.omega_dt)), side, out);
  return kExitOk;
}

int cmd_thresholds(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto reports = threshold_reports();
  emit(thresholds_json(reports), cfg.output_path, out);
  for (const ThresholdReport& r : reports) {
    if (!r.passes()) {
      err << fmt::format("threshold {} off by {} (tolerance {})\n", r.name, format_number(r.abs_diff()),
                         format_number(r.tolerance));
      return kExitThresholdGate;
    }
  }
  return kExitOk;
}

int cmd_hierarchy(const RunConfig& cfg, std::ostream& out) {
  std::vector<double> grid;
  if (cfg.eta) {
    grid.push_back(*cfg.eta);
  } else {
    for (std::size_t k = 1; k <= cfg.grid_points; ++k)
      grid.push_back(static_cast<double>(k) / static_cast<double>(cfg.grid_points));
  }
  emit(hierarchy_text(hierarchy_scan(grid), cfg.format), cfg.output_path, out);
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<std::string> names;
  if (cfg.suite == "all") {
    names = suite_names();
  } else {
    names.push_back(cfg.suite);
  }
  std::optional<oracle::OracleReport> first_failure;
  std::string summary;
  for (const std::string& name : names) {
    const SuiteResult result = run_suite(name, cfg);
    if (name == "theorem2") {
      emit(theorem2_table(theorem2_corollary_check(open_grid(cfg.grid_points, 0.0, pi))), cfg.output_path, out);
    }
    double worst = 0.0;
    for (const auto& r : result.reports) {
      if (r.tolerance > 0.0) worst = std::max(worst, r.abs_diff / r.tolerance);
    }
    summary += fmt::format("suite {}: {} ({} checks, worst diff/tolerance {})\n", name,
                           result.passed() ? "PASS" : "FAIL", result.reports.size(), format_number(worst));
    if (!first_failure && result.first_failure()) first_failure = *result.first_failure();
  }
  (cfg.output_path.empty() ? out : err) << summary;
  if (first_failure) {
    err << report_json(*first_failure);
    return kExitVerifyGate;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential-measurement temporal correlations: LG and temporal steering tests", "tempcorr"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  RunConfig cfg;
  std::string format = "csv";
  std::string sidecar;
  long long points = static_cast<long long>(cfg.grid_points);
  double eta = 0.0;

  app.add_option("--points", points, "Grid points (>= 2)");
  app.add_option("--omega-dt", cfg.omega_dt, "Precession angle per time step");
  app.add_option("--gamma-min", cfg.gamma_min, "Smallest gamma*dt of the fig3 scan");
  app.add_option("--gamma-max", cfg.gamma_max, "Largest gamma*dt of the fig3 scan");
  auto* eta_opt = app.add_option("--eta", eta, "Sharpness for a single hierarchy row");
  app.add_option("--seed", cfg.seed, "Seed for randomized verification");
  app.add_option("-o,--output", cfg.output_path, "Output file (default stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tolerance-scale", cfg.tolerance_scale)->group("");

  auto* fig2 = app.add_subcommand("fig2", "Analog-CHSH steering sums S and S' over x in (0, pi)");
  auto* fig3 = app.add_subcommand("fig3", "Damped K4 and S2 versus gamma*dt, with crossing sidecar");
  fig3->add_option("--sidecar", sidecar, "Crossing JSON path (default next to -o)");
  auto* thresholds = app.add_subcommand("thresholds", "Sharpness thresholds: formula vs bisection");
  auto* hierarchy = app.add_subcommand("hierarchy", "S3, K5, K6 over a sharpness grid");
  auto* verify = app.add_subcommand("verify", "Oracle and property suites");
  verify->add_option("--suite", cfg.suite, "all or one of: " + fmt::format("{}", fmt::join(suite_names(), ", ")));

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  if (points < 0) points = 0;
  cfg.grid_points = static_cast<std::size_t>(points);
  if (*eta_opt) cfg.eta = eta;
  cfg.format = format == "json" ? Format::Json : Format::Csv;
  if (fig2->parsed()) cfg.command = Command::Fig2;
  if (fig3->parsed()) cfg.command = Command::Fig3;
  if (thresholds->parsed()) cfg.command = Command::Thresholds;
  if (hierarchy->parsed()) cfg.command = Command::Hierarchy;
  if (verify->parsed()) cfg.command = Command::Verify;

  try {
    validate(cfg);
    if (cfg.command == Command::Verify && cfg.suite != "all") {
      const auto names = suite_names();
      if (std::find(names.begin(), names.end(), cfg.suite) == names.end())
        throw std::invalid_argument("unknown suite '" + cfg.suite + "'");
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    switch (cfg.command) {
      case Command::Fig2: return cmd_fig2(cfg, out);
      case Command::Fig3: return cmd_fig3(cfg, sidecar, out);
      case Command::Thresholds: return cmd_thresholds(cfg, out, err);
      case Command::Hierarchy: return cmd_hierarchy(cfg, out);
      case Command::Verify: return cmd_verify(cfg, out, err);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace tempcorr::cli
