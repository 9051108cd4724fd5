#pragma once

// Inexact proximal point iteration with per-step certificates, and the
// JSON-configured experiment runner behind the CLI.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wcprox/catalog.hpp"
#include "wcprox/core.hpp"
#include "wcprox/iprox.hpp"

namespace wcprox {

enum class ScheduleKind { kConstant, kGeometric, kSummable };

/// eps_k for k = 0, 1, ...: eps0, eps0 q^k, or eps0 / (k+1)^2.
struct Schedule {
  ScheduleKind kind = ScheduleKind::kConstant;
  double eps0 = 0.0;
  double q = 0.5;

  double at(int k) const;
  void validate() const;
};

enum class CertificateMode { kNone, kType1, kType2, kBoth };

CertificateMode certificate_mode_from_string(const std::string& s);
std::string to_string(CertificateMode m);

struct IppaConfig {
  FunctionDesc function;
  double alpha = 1.0;
  Vector x0;
  Schedule schedule;
  int max_iters = 50;
  CertificateMode certificates = CertificateMode::kNone;
  /// Stop once residual <= tol_residual and eps_k <= tol_eps (both required).
  std::optional<double> tol_residual;
  std::optional<double> tol_eps;
  /// Certificate grid; standard_grid(n) when unset.
  std::optional<GridDomain> grid;
  Tolerance tol;
};

struct IppaStep {
  int k = 0;
  Vector x;
  double eps = 0.0;
  double objective = 0.0;
  Vector x_next;
  /// ||x_k - x_{k+1}|| / alpha.
  double residual = 0.0;
  double gap_bound = 0.0;
  std::optional<Type1Certificate> type1;
  std::optional<Type2Certificate> type2;
  /// Combination of the requested certificate verdicts (HOLDS when none).
  Verdict verdict;
};

struct IppaTrace {
  std::vector<IppaStep> steps;
  Vector final_x;
  double final_objective = 0.0;
  /// dist(0, df(x_final)) times the largest grid distance from x_final.
  double criticality_eps = 0.0;
  Verdict final_criticality;
  bool stopped_early = false;
  std::optional<std::string> error;
};

/// Throws ArgumentError on invalid configuration, PreconditionError when
/// 1/alpha <= rho. Solver budget failures truncate the trace with an error.
IppaTrace run_ippa(const IppaConfig& cfg);

// ---------------------------------------------------------------------------
// Experiments

/// Malformed configuration; the message names the line or field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ReportRecord {
  std::string suite;
  std::string case_id;
  nlohmann::json inputs;
  Verdict verdict;
};

struct Report {
  std::vector<ReportRecord> records;

  nlohmann::json to_json() const;
  std::string to_csv() const;
  /// 0 all HOLDS, 1 any FAILS, 2 any INCONCLUSIVE (and no FAILS).
  int exit_code() const;
};

nlohmann::json verdict_to_json(const Verdict& v);
nlohmann::json vector_to_json(const Vector& v);

/// Parses {"function": {...}} style descriptions, reporting the field path.
FunctionDesc parse_function(const nlohmann::json& j, const std::string& path);
GridDomain parse_grid(const nlohmann::json& j, const std::string& path);
IppaConfig parse_ippa(const nlohmann::json& j, const std::string& path);

/// Parses JSON text; syntax errors become ConfigError with line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);

/// Runs {"suites": [{"name": ..., ...}]}. Unknown suites and bad fields throw ConfigError.
Report run_experiment(const nlohmann::json& config, const std::optional<GridDomain>& grid = {},
                      const Tolerance& tol = {});
Report run_experiment_file(const std::string& path, const std::optional<GridDomain>& grid = {},
                           const Tolerance& tol = {});

}  // namespace wcprox
