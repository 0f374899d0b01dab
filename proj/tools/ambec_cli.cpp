// ambec: command-line front end. Every subcommand assembles the same
// sectioned configuration a file would hold (file first, then flags, then
// --set overrides) and hands it to the runner.
#include <CLI11.hpp>
#include <iostream>

#include "ambec/runner.hpp"
#include "ambec/snapshot_io.hpp"

namespace {

using ambec::ConfigTable;

struct Flags {
  std::string config;
  std::string output;
  std::string family;
  std::string preset;
  std::optional<std::uint64_t> seed;
  bool svg = false;
  std::vector<std::string> sets;
  std::vector<std::string> knowns;
  std::vector<std::string> guesses;
  std::string unknowns;
  // evolve
  std::optional<double> dt, t_end, noise;
  std::optional<int> stride;
  std::string snapshot_times, scheme, initial;
  // sweep
  std::string param;
  std::optional<double> from, to;
  std::optional<int> steps;
  // diagnose
  std::vector<std::string> inputs;
  std::string trajectory, tail_model;
  std::optional<double> window;
  // catalog
  std::string b_values;
};

std::string num(double v) { return ambec::format_double(v); }

void add_common(CLI::App* sub, Flags& f, bool with_model) {
  sub->add_option("--config", f.config, "INI file; flags override its values");
  sub->add_option("-o,--output", f.output, "output directory (relative to $AMBEC_OUTPUT_ROOT)");
  sub->add_option("--seed", f.seed, "seed for stochastic perturbations");
  sub->add_flag("--svg", f.svg, "also render simple SVG line plots");
  sub->add_option("--set", f.sets, "override: section.key=value (repeatable)");
  if (with_model) {
    sub->add_option("--family", f.family, "I..VI, 1..6 or the long identifier");
    sub->add_option("--preset", f.preset, "named parameter preset ('none' for an empty problem)");
    sub->add_option("--known", f.knowns, "fixed parameter: name=value (repeatable)");
    sub->add_option("--guess", f.guesses, "starting value: name=value (repeatable)");
  }
}

void put_pairs(ConfigTable& t, const std::string& section, const std::vector<std::string>& pairs) {
  for (const auto& kv : pairs) ambec::apply_override(t, section + "." + kv);
}

ConfigTable assemble(const std::string& command, const Flags& f) {
  ConfigTable t;
  if (!f.config.empty()) t = ambec::read_config_table(f.config);
  if (command != "run") t["run"]["command"] = command;
  if (!f.output.empty()) t["run"]["output"] = f.output;
  else if (!t["run"].count("output") && t["run"].count("command"))
    t["run"]["output"] = "ambec_out/" + t["run"]["command"];
  if (f.seed) t["run"]["seed"] = std::to_string(*f.seed);
  if (f.svg) t["run"]["svg"] = "true";
  if (!f.family.empty()) t["model"]["family"] = f.family;
  if (!f.preset.empty()) t["model"]["preset"] = f.preset;
  if (!f.unknowns.empty()) t["model"]["unknowns"] = f.unknowns;
  put_pairs(t, "known", f.knowns);
  put_pairs(t, "guess", f.guesses);
  if (f.dt) t["evolve"]["dt"] = num(*f.dt);
  if (f.t_end) t["evolve"]["t_end"] = num(*f.t_end);
  if (f.noise) t["evolve"]["noise"] = num(*f.noise);
  if (f.stride) t["evolve"]["stride"] = std::to_string(*f.stride);
  if (!f.snapshot_times.empty()) t["evolve"]["snapshot_times"] = f.snapshot_times;
  if (!f.scheme.empty()) t["evolve"]["scheme"] = f.scheme;
  if (!f.initial.empty()) t["evolve"]["initial"] = f.initial;
  if (!f.param.empty()) t["sweep"]["param"] = f.param;
  if (f.from) t["sweep"]["from"] = num(*f.from);
  if (f.to) t["sweep"]["to"] = num(*f.to);
  if (f.steps) t["sweep"]["steps"] = std::to_string(*f.steps);
  if (!f.inputs.empty()) {
    std::string s;
    for (const auto& i : f.inputs) s += (s.empty() ? "" : ", ") + i;
    t["diagnose"]["input"] = s;
  }
  if (!f.trajectory.empty()) t["diagnose"]["trajectory"] = f.trajectory;
  if (!f.tail_model.empty()) t["diagnose"]["tail_model"] = f.tail_model;
  if (f.window) t["diagnose"]["window"] = num(*f.window);
  if (!f.b_values.empty()) t["catalog"]["B_values"] = f.b_values;
  for (const auto& s : f.sets) ambec::apply_override(t, s);
  // Drop sections that only received defaults from operator[] lookups.
  for (auto it = t.begin(); it != t.end();) it = it->second.empty() ? t.erase(it) : std::next(it);
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled atom-molecule condensate lab: exact families, constraint solving, "
               "real- and imaginary-time evolution, diagnostics.\n"
               "Exit codes: 0 all checks pass, 1 a numerical check failed, 2 bad input."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ambec::tool_version()));
  Flags f;

  auto* catalog = app.add_subcommand("catalog", "list families, domains, relations and templates");
  add_common(catalog, f, false);
  catalog->add_option("--family", f.family, "restrict profile output to one family");
  catalog->add_option("--B-values", f.b_values, "comma-separated B values for droplet profiles");

  auto* solve = app.add_subcommand("solve-constraints", "solve one family's consistency conditions");
  add_common(solve, f, true);
  solve->add_option("--unknowns", f.unknowns, "comma-separated parameters to solve for");

  auto* verify = app.add_subcommand("verify", "solve and validate presets (all families by default)");
  add_common(verify, f, true);

  auto* evolve = app.add_subcommand("evolve", "real-time evolution of a solved state");
  add_common(evolve, f, true);
  evolve->add_option("--dt", f.dt);
  evolve->add_option("--t-end", f.t_end);
  evolve->add_option("--stride", f.stride, "steps between samples");
  evolve->add_option("--noise", f.noise, "relative amplitude of the seeded perturbation");
  evolve->add_option("--snapshot-times", f.snapshot_times, "comma-separated times");
  evolve->add_option("--scheme", f.scheme, "strang_spectral or rk4_fd");
  evolve->add_option("--initial", f.initial, "stationary or superposition");

  auto* diagnose = app.add_subcommand("diagnose", "measure snapshot and trajectory files");
  add_common(diagnose, f, true);
  diagnose->add_option("--input", f.inputs, "snapshot file (repeatable)");
  diagnose->add_option("--trajectory", f.trajectory, "trajectory CSV from evolve");
  diagnose->add_option("--window", f.window, "tail fraction for the decay fit");
  diagnose->add_option("--tail-model", f.tail_model, "power or exponential");

  auto* sweep = app.add_subcommand("sweep", "continuation along one known parameter");
  add_common(sweep, f, true);
  sweep->add_option("--param", f.param);
  sweep->add_option("--from", f.from);
  sweep->add_option("--to", f.to);
  sweep->add_option("--steps", f.steps, "number of points");

  auto* run = app.add_subcommand("run", "execute a config file (e.g. a manifest.ini)");
  run->add_option("--config", f.config)->required();
  run->add_option("--set", f.sets, "override: section.key=value (repeatable)");
  run->add_option("-o,--output", f.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  ambec::RunResult result;
  try {
    const ambec::ExperimentConfig cfg = ambec::parse_config(assemble(command, f));
    result = ambec::run(cfg, std::cout);
  } catch (const ambec::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (result.exit_code != 0) std::cerr << "error: " << result.message << '\n';
  std::cout << "output: " << result.output_dir.string() << '\n';
  return result.exit_code;
}
