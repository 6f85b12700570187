#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cholesteric/bulk.hpp"

namespace chol::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3, kAssumptionViolation = 4 };

/// Inclusive linear range "start:stop:count".
struct Range {
  double start = 0.0, stop = 0.0;
  int count = 1;
  std::vector<double> values() const;
};

/// Throws ConfigError naming `key` on malformed input.
Range parse_range(const std::string& text, const std::string& key);

struct RunConfig {
  std::string command;  // bulk-solve | bulk-map | frank | gamma | minimize | validate-kernels
  std::string kernel;   // kernel JSON path; empty selects the built-in demo set
  std::optional<double> tau, alpha, rho0;
  double eps = 0.125;
  std::vector<double> eps_list{0.5, 0.25, 0.125};
  int grid = 64;        // extent along e3 (transverse extent 4 unless full3d)
  bool full3d = false;  // cubic grid with every extent equal to `grid`
  std::string init = "random";  // random | constant | helix:M
  std::uint64_t seed = 1;
  int starts = 1;  // random starts for minimize, best energy kept
  int max_iterations = 4000;
  double gradient_tol = 1e-5;
  int quad_degree = 127;  // polynomial degree of the sphere rule
  std::string method = "lbfgs";  // lbfgs | gd
  bool run_minimizer = false;    // gamma: also descend from random starts
  Range tau_range{0.02, 0.14, 13};
  Range alpha_range{0.15, 2.0, 12};
  std::string out;  // output file (bulk-map) or prefix

  /// Checks module preconditions; throws ConfigError.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Strict JSON form of RunConfig; unknown keys are rejected with ConfigError.
RunConfig parse_run_config(const nlohmann::json& j);

/// Executes one command. Results go to `out`, diagnostics to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Gnuplot "nonuniform matrix" layout: first row holds the column count
/// followed by the taus, every later row an alpha followed by its values.
void write_htp_matrix(const HtpMap& map, std::ostream& os);
HtpMap read_htp_matrix(std::istream& is);
/// Inverse of write_htp_csv.
HtpMap read_htp_csv(std::istream& is);

/// Writes PATH (long CSV) and the matrix next to it with extension ".matrix".
/// Throws std::runtime_error naming the path on I/O failure.
std::vector<std::string> emit_plotdata(const HtpMap& map, const std::string& csv_path);

}  // namespace chol::cli
