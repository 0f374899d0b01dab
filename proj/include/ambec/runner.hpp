// Experiment orchestration behind the CLI. Every run writes into one output
// directory:
//
//   manifest.ini   resolved config + tool version + tolerances; re-runnable
//   report.csv     check,value,threshold,status  (machine-readable verdict)
//   ...            command-specific tables, profiles and snapshots
//
// Exit codes: 0 all checks pass, 1 a numerical check failed, 2 bad input.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ambec/config.hpp"

namespace ambec {

std::string_view tool_version();

enum class CheckStatus { kPass, kFail, kInfo };

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;  // NaN for informational rows
  CheckStatus status = CheckStatus::kInfo;
  std::string note;
};

/// value < threshold passes; NaN values fail.
Check below(std::string name, double value, double threshold, std::string note = {});
Check info(std::string name, double value, std::string note = {});

struct RunResult {
  int exit_code = 0;
  std::filesystem::path output_dir;
  std::vector<Check> checks;
  std::string message;  // error text for exit codes 1 and 2
};

/// Prefixes relative paths with $AMBEC_OUTPUT_ROOT when it is set.
std::filesystem::path resolve_output(const std::filesystem::path& p);

/// Runs the configured command. Domain and config errors map to exit 2,
/// failed checks and numerical breakdowns to exit 1. `log` receives a
/// human-readable summary.
RunResult run(const ExperimentConfig& cfg, std::ostream& log);

/// Key-value listing of the families: forms, domains, relations, templates.
std::string catalog_text();

// Plot-ready data. Every file starts with '#' comment lines naming the
// columns; a table without rows is still written with its header.

struct Series {
  std::string name;
  RealField values;
};

/// Columnar file: x column then one column per series.
void write_columns(const std::filesystem::path& path, const std::string& x_name,
                   const RealField& x, const std::vector<Series>& series,
                   const std::vector<std::string>& comments = {});
/// Density profile view: x, |psi_a|^2, |psi_m|^2.
void write_density_profile(const std::filesystem::path& path, const FieldPair& f, const Grid& g,
                           const std::string& title);
/// Minimal line plot of the same data (one polyline per series).
void write_svg(const std::filesystem::path& path, const std::string& title,
               const std::string& x_name, const RealField& x, const std::vector<Series>& series);

}  // namespace ambec
