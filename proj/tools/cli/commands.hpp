#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "generator.hpp"
#include "spec_io.hpp"

namespace hardycert::cli {

enum ExitCode : int { kPass = 0, kViolation = 1, kInputError = 2, kInvariantError = 3 };

Json criteria_json(const InstanceSpec& spec, const CriteriaReport& report, double elapsed_seconds);
Json oracle_json(const OracleResult& result);
Json partition_json(const PiecewisePower& u, const CoveringSequence& cov);

/// Flag values that override the spec or config.
struct BudgetFlags {
  std::optional<int> atoms, iters, restarts;
  std::optional<std::uint64_t> seed;
};

/// `base` updated by spec overrides, then flags. Throws InputError on bad values.
OracleBudget oracle_budget(OracleBudget base, const OracleOverrides& spec, const BudgetFlags& flags);

/// Reduced budget used per instance by the verify sweep.
OracleBudget sweep_budget();

struct VerifyConfig {
  int count = 1;
  std::uint64_t seed = 1;
  std::vector<RegimeSel> regimes{{false, false}, {false, true}, {true, false}, {true, true}};
  double upper_band = 3.0;
  double lower_band = 6.0;
  double kernel_band = 4.0;
  /// Bounds on log2(kernel / supremal) for the atomic dual-objective check.
  double forms_min = 0.0;
  double forms_max = 6.0;
  bool check_forms = true;
  /// Specs evaluated before the generated ones; they count towards `count`.
  std::vector<InstanceSpec> inject;
  OracleOverrides budget;
  int widenings = 2;
};

VerifyConfig parse_verify_config(const std::string& text);

struct VerifyRow {
  int index = 0;
  std::string source;  // "injected" or "generated"
  std::uint64_t seed = 0;
  std::string regime;
  InstanceSpec spec;
  double aggregate = 0.0;
  double oracle = 0.0;
  std::optional<double> log2_ratio;
  std::optional<double> kernel_log2;
  std::optional<double> forms_log2;
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};

/// Runs the sweep in index order.
std::vector<VerifyRow> run_verify(const VerifyConfig& cfg, const BudgetFlags& flags = {});
Json verify_json(const VerifyConfig& cfg, const std::vector<VerifyRow>& rows);
std::string verify_csv(const std::vector<VerifyRow>& rows);

/// Entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hardycert::cli
