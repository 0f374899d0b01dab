// Experiment configuration: flat sectioned key-value text (INI), e.g.
//
//   [run]
//   command = verify
//   output = out/verify_V
//   [model]
//   family = V
//   preset = y0
//   [known]
//   beta = 1
//
// Parsing goes through a raw section -> key -> value table so command-line
// flags and files feed the same validation. Unknown sections and keys are
// rejected.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ambec/constraints.hpp"
#include "ambec/diagnostics.hpp"
#include "ambec/propagator.hpp"

namespace ambec {

/// Bad configuration: unknown key, malformed value, missing setting.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

using ConfigTable = std::map<std::string, std::map<std::string, std::string>>;

/// Reads an INI file into a table. Throws ConfigError on I/O or syntax errors.
ConfigTable read_config_table(const std::filesystem::path& path);
/// Sets table[section][key] from "section.key=value".
void apply_override(ConfigTable& table, const std::string& assignment);

enum class Command { kCatalog, kSolveConstraints, kVerify, kEvolve, kDiagnose, kSweep };
std::string_view command_name(Command c);
Command parse_command(std::string_view s);

enum class InitialState { kStationary, kSuperposition };

struct GridSpec {
  std::optional<double> x_min;
  std::optional<double> x_max;
  std::optional<std::size_t> n;
  std::optional<Discretization> discretization;
  bool empty() const { return !x_min && !x_max && !n && !discretization; }
};

struct EvolveSettings {
  double dt = 1e-3;
  double t_end = 10.0;
  int stride = 10;
  double noise = 0.0;
  std::vector<double> snapshot_times;
  std::optional<Scheme> scheme;  // default follows the grid's discretization
  InitialState initial = InitialState::kStationary;
};

struct SweepSettings {
  std::string param;  // io label, resolved against the family
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
};

struct DiagnoseSettings {
  std::vector<std::filesystem::path> inputs;  // snapshot files
  std::optional<std::filesystem::path> trajectory;
  double window = 0.25;
  std::optional<TailModel> tail_model;  // default follows the family, else power law
};

/// Every threshold a report can cite.
struct Tolerances {
  double residual = 0.0;  // 0: 1e-10 spectral, 1e-8 finite differences
  double relation = 1e-8;
  double drift = 1e-8;
  double phase_slope = 1e-6;
  double bookkeeping = 1e-12;  // relative to ||psi_a||^2
};

struct ExperimentConfig {
  Command command = Command::kCatalog;
  std::filesystem::path output = "ambec_out";
  std::uint64_t seed = 0;
  bool svg = false;

  std::optional<Family> family;
  std::optional<std::string> preset;  // "none" starts from an empty problem
  std::map<Param, double> knowns;
  std::map<Param, double> guess;
  std::optional<std::vector<Param>> unknowns;  // others are pinned
  GridSpec grid;

  EvolveSettings evolve;
  SweepSettings sweep;
  DiagnoseSettings diagnose;
  std::vector<double> catalog_B_values{0.5, 5.0, 50.0};
  Tolerances tolerances;
};

/// Validates everything that can be checked without computing. Throws
/// ConfigError (bad keys or values) or DomainError (parameter domain,
/// e.g. y == B for the power-law families).
ExperimentConfig parse_config(const ConfigTable& table);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully resolved table for the manifest; parse_config(to_table(c)) == c.
ConfigTable to_table(const ExperimentConfig& c);
void write_config_table(std::ostream& os, const ConfigTable& table);

}  // namespace ambec
