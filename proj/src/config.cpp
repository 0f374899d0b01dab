#include "ambec/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

#include "ambec/snapshot_io.hpp"

namespace ambec {

namespace {

namespace pt = boost::property_tree;

// Allowed keys per section. [known] and [guess] take parameter labels.
const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"run", {"command", "output", "seed", "svg"}},
      {"model", {"family", "preset", "unknowns"}},
      {"known", {}},
      {"guess", {}},
      {"grid", {"x_min", "x_max", "n", "discretization"}},
      {"evolve", {"dt", "t_end", "stride", "noise", "snapshot_times", "scheme", "initial"}},
      {"sweep", {"param", "from", "to", "steps"}},
      {"diagnose", {"input", "trajectory", "window", "tail_model"}},
      {"catalog", {"B_values"}},
      {"tolerances", {"residual", "relation", "drift", "phase_slope", "bookkeeping"}},
      {"manifest", {"tool", "version", "threads"}},
  };
  return s;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string where(const std::string& section, const std::string& key) {
  return "[" + section + "] " + key;
}

double to_double(const std::string& section, const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out))
    throw ConfigError(where(section, key) + ": expected a finite number, got '" + v + "'");
  return out;
}

long long to_integer(const std::string& section, const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(where(section, key) + ": expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& section, const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(where(section, key) + ": expected true/false, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& section, const std::string& key,
                               const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(section, key, item));
  return out;
}

const std::string* find(const ConfigTable& t, const std::string& section, const std::string& key) {
  const auto s = t.find(section);
  if (s == t.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

std::map<Param, double> read_params(const ConfigTable& t, const std::string& section,
                                    Family f) {
  std::map<Param, double> out;
  const auto s = t.find(section);
  if (s == t.end()) return out;
  for (const auto& [key, value] : s->second) {
    Param p;
    try {
      p = parse_param(f, key);
    } catch (const DomainError&) {
      throw ConfigError(where(section, key) + ": unknown parameter for family " +
                        std::string(family_name(f)));
    }
    if (!is_used(f, p))
      throw ConfigError(where(section, key) + ": family " + std::string(family_name(f)) +
                        " does not use this parameter");
    if (out.count(p))
      throw ConfigError(where(section, key) + ": parameter given twice");
    out[p] = to_double(section, key, value);
  }
  return out;
}

// Shortest text that reads back to the same double; keeps manifests legible.
std::string shortest(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : format_double(v);
}

std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + shortest(v[k]);
  return s;
}

// Domain checks on the merged knowns that need no solve.
void check_domain(Family f, const std::map<Param, double>& knowns) {
  auto get = [&](Param p) -> std::optional<double> {
    const auto it = knowns.find(p);
    return it == knowns.end() ? std::nullopt : std::optional<double>(it->second);
  };
  const std::string fam = "family " + std::string(family_name(f));
  if (decay_class(f) == DecayClass::kPowerLaw) {
    const auto b = get(Param::kB), y = get(Param::kY);
    if (b && y && *b == *y)
      throw DomainError(fam + ": y = B = " + shortest(*b) +
                        " is excluded; the family requires y ≠ B (y != B)");
  }
  if (f != Family::kHyperbolicGround && f != Family::kHyperbolicExcited) {
    if (const auto b = get(Param::kB); b && !(*b > 0.0))
      throw DomainError(fam + " requires B > 0");
  }
  if (decay_class(f) == DecayClass::kExponential) {
    if (const auto beta = get(Param::kBeta); beta && !(*beta > 0.0))
      throw DomainError(fam + " requires beta > 0");
  }
}

}  // namespace

ConfigTable read_config_table(const std::filesystem::path& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  ConfigTable table;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config: key '" + section + "' outside any section");
    for (const auto& [key, value] : body) table[section][key] = trim(value.data());
  }
  return table;
}

void apply_override(ConfigTable& table, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("override '" + assignment + "': expected section.key=value");
  const std::string section = trim(assignment.substr(0, dot));
  const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
  if (section.empty() || key.empty())
    throw ConfigError("override '" + assignment + "': empty section or key");
  table[section][key] = trim(assignment.substr(eq + 1));
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::kCatalog: return "catalog";
    case Command::kSolveConstraints: return "solve-constraints";
    case Command::kVerify: return "verify";
    case Command::kEvolve: return "evolve";
    case Command::kDiagnose: return "diagnose";
    case Command::kSweep: return "sweep";
  }
  return "?";
}

Command parse_command(std::string_view s) {
  for (Command c : {Command::kCatalog, Command::kSolveConstraints, Command::kVerify,
                    Command::kEvolve, Command::kDiagnose, Command::kSweep})
    if (command_name(c) == s) return c;
  throw ConfigError("[run] command: unknown command '" + std::string(s) + "'");
}

ExperimentConfig parse_config(const ConfigTable& table) {
  for (const auto& [section, keys] : table) {
    const auto s = schema().find(section);
    if (s == schema().end()) throw ConfigError("config: unknown section [" + section + "]");
    if (section == "known" || section == "guess") continue;
    for (const auto& [key, value] : keys)
      if (!s->second.count(key)) throw ConfigError("config: unknown key " + where(section, key));
  }

  ExperimentConfig c;
  auto str = [&](const char* sec, const char* key) { return find(table, sec, key); };
  auto num = [&](const char* sec, const char* key, double& out) {
    if (const auto* v = str(sec, key)) out = to_double(sec, key, *v);
  };

  const auto* cmd = str("run", "command");
  if (!cmd) throw ConfigError("config: [run] command is required");
  c.command = parse_command(*cmd);
  if (const auto* v = str("run", "output")) {
    if (v->empty()) throw ConfigError("[run] output: empty path");
    c.output = *v;
  }
  if (const auto* v = str("run", "seed")) {
    const long long s = to_integer("run", "seed", *v);
    if (s < 0) throw ConfigError("[run] seed: must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (const auto* v = str("run", "svg")) c.svg = to_bool("run", "svg", *v);

  if (const auto* v = str("model", "family")) {
    try {
      c.family = parse_family(*v);
    } catch (const DomainError& e) {
      throw ConfigError("[model] family: " + std::string(e.what()));
    }
  }
  const bool has_params = table.count("known") || table.count("guess") ||
                          str("model", "unknowns") || str("model", "preset");
  if (has_params && !c.family)
    throw ConfigError("config: [known], [guess], unknowns and preset need [model] family");

  if (c.family) {
    const Family f = *c.family;
    if (const auto* v = str("model", "preset")) {
      if (*v != "none") {
        const auto names = preset_names(f);
        if (std::find(names.begin(), names.end(), *v) == names.end())
          throw ConfigError("[model] preset: family " + std::string(family_name(f)) +
                            " has no preset '" + *v + "'");
      }
      c.preset = *v;
    }
    c.knowns = read_params(table, "known", f);
    c.guess = read_params(table, "guess", f);
    if (const auto* v = str("model", "unknowns")) {
      std::vector<Param> u;
      for (const auto& name : split_list(*v)) {
        Param p;
        try {
          p = parse_param(f, name);
        } catch (const DomainError&) {
          throw ConfigError("[model] unknowns: unknown parameter '" + name + "'");
        }
        if (!is_used(f, p) || c.knowns.count(p))
          throw ConfigError("[model] unknowns: '" + name + "' is unused or already known");
        u.push_back(p);
      }
      if (u.empty()) throw ConfigError("[model] unknowns: empty list");
      c.unknowns = u;
    }
    std::map<Param, double> merged;
    if (!c.preset || *c.preset != "none") {
      const std::string name = c.preset.value_or(table.count("known") ? "none" : "default");
      if (name != "none") merged = preset(f, name).problem.knowns;
    }
    for (const auto& [p, v] : c.knowns) merged[p] = v;
    check_domain(f, merged);
  }

  if (const auto* v = str("grid", "x_min")) c.grid.x_min = to_double("grid", "x_min", *v);
  if (const auto* v = str("grid", "x_max")) c.grid.x_max = to_double("grid", "x_max", *v);
  if (const auto* v = str("grid", "n")) {
    const long long n = to_integer("grid", "n", *v);
    if (n < 8 || !is_power_of_two(static_cast<std::size_t>(n)))
      throw ConfigError("[grid] n: must be a power of two and at least 8");
    c.grid.n = static_cast<std::size_t>(n);
  }
  if (const auto* v = str("grid", "discretization")) {
    if (*v == "spectral") c.grid.discretization = Discretization::kSpectral;
    else if (*v == "finite_difference") c.grid.discretization = Discretization::kFiniteDifference;
    else throw ConfigError("[grid] discretization: spectral or finite_difference");
  }
  if (c.grid.x_min.has_value() != c.grid.x_max.has_value())
    throw ConfigError("[grid] x_min and x_max go together");
  if (c.grid.x_min && !(*c.grid.x_max > *c.grid.x_min))
    throw ConfigError("[grid] x_max must exceed x_min");

  num("evolve", "dt", c.evolve.dt);
  num("evolve", "t_end", c.evolve.t_end);
  num("evolve", "noise", c.evolve.noise);
  if (const auto* v = str("evolve", "stride")) {
    const long long s = to_integer("evolve", "stride", *v);
    if (s < 1) throw ConfigError("[evolve] stride: must be at least 1");
    c.evolve.stride = static_cast<int>(s);
  }
  if (const auto* v = str("evolve", "snapshot_times"))
    c.evolve.snapshot_times = to_doubles("evolve", "snapshot_times", *v);
  if (const auto* v = str("evolve", "scheme")) {
    if (*v == "strang_spectral") c.evolve.scheme = Scheme::kStrangSpectral;
    else if (*v == "rk4_fd") c.evolve.scheme = Scheme::kRk4FiniteDifference;
    else throw ConfigError("[evolve] scheme: strang_spectral or rk4_fd");
  }
  if (const auto* v = str("evolve", "initial")) {
    if (*v == "stationary") c.evolve.initial = InitialState::kStationary;
    else if (*v == "superposition") c.evolve.initial = InitialState::kSuperposition;
    else throw ConfigError("[evolve] initial: stationary or superposition");
  }
  if (!(c.evolve.dt > 0.0)) throw ConfigError("[evolve] dt: must be positive");
  if (c.evolve.t_end < 0.0) throw ConfigError("[evolve] t_end: must be non-negative");
  if (c.evolve.noise < 0.0) throw ConfigError("[evolve] noise: must be non-negative");
  for (double t : c.evolve.snapshot_times)
    if (t < 0.0 || t > c.evolve.t_end)
      throw ConfigError("[evolve] snapshot_times: " + format_double(t) + " outside [0, t_end]");

  if (const auto* v = str("sweep", "param")) c.sweep.param = *v;
  num("sweep", "from", c.sweep.from);
  num("sweep", "to", c.sweep.to);
  if (const auto* v = str("sweep", "steps")) {
    const long long s = to_integer("sweep", "steps", *v);
    if (s < 1) throw ConfigError("[sweep] steps: must be at least 1");
    c.sweep.steps = static_cast<int>(s);
  }
  if (c.command == Command::kSweep) {
    if (!c.family) throw ConfigError("sweep: [model] family is required");
    if (c.sweep.param.empty() || c.sweep.steps < 1)
      throw ConfigError("sweep: [sweep] param and steps are required");
    Param p;
    try {
      p = parse_param(*c.family, c.sweep.param);
    } catch (const DomainError&) {
      throw ConfigError("[sweep] param: unknown parameter '" + c.sweep.param + "'");
    }
    if (!is_used(*c.family, p))
      throw ConfigError("[sweep] param: family does not use '" + c.sweep.param + "'");
    c.sweep.param = std::string(io_label(*c.family, p));
    // Every swept value must itself satisfy the domain checks.
    for (double v : {c.sweep.from, c.sweep.to}) {
      std::map<Param, double> k = c.knowns;
      k[p] = v;
      check_domain(*c.family, k);
    }
  }

  if (const auto* v = str("diagnose", "input"))
    for (const auto& item : split_list(*v)) c.diagnose.inputs.emplace_back(item);
  if (const auto* v = str("diagnose", "trajectory")) c.diagnose.trajectory = *v;
  num("diagnose", "window", c.diagnose.window);
  if (!(c.diagnose.window > 0.0 && c.diagnose.window <= 1.0))
    throw ConfigError("[diagnose] window: must lie in (0, 1]");
  if (const auto* v = str("diagnose", "tail_model")) {
    if (*v == "power") c.diagnose.tail_model = TailModel::kPowerLaw;
    else if (*v == "exponential") c.diagnose.tail_model = TailModel::kExponential;
    else throw ConfigError("[diagnose] tail_model: power or exponential");
  }
  if (c.command == Command::kDiagnose && c.diagnose.inputs.empty() && !c.diagnose.trajectory)
    throw ConfigError("diagnose: [diagnose] input or trajectory is required");

  if (const auto* v = str("catalog", "B_values")) {
    c.catalog_B_values = to_doubles("catalog", "B_values", *v);
    for (double b : c.catalog_B_values)
      if (!(b > 0.0)) throw ConfigError("[catalog] B_values: every B must be positive");
  }

  num("tolerances", "residual", c.tolerances.residual);
  num("tolerances", "relation", c.tolerances.relation);
  num("tolerances", "drift", c.tolerances.drift);
  num("tolerances", "phase_slope", c.tolerances.phase_slope);
  num("tolerances", "bookkeeping", c.tolerances.bookkeeping);
  for (double t : {c.tolerances.relation, c.tolerances.drift, c.tolerances.phase_slope,
                   c.tolerances.bookkeeping})
    if (!(t > 0.0)) throw ConfigError("[tolerances]: thresholds must be positive");
  if (c.tolerances.residual < 0.0) throw ConfigError("[tolerances] residual: negative");

  if (c.command != Command::kCatalog && c.command != Command::kDiagnose &&
      c.command != Command::kVerify && !c.family)
    throw ConfigError(std::string(command_name(c.command)) + ": [model] family is required");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_config_table(path));
}

ConfigTable to_table(const ExperimentConfig& c) {
  ConfigTable t;
  t["run"]["command"] = std::string(command_name(c.command));
  t["run"]["output"] = c.output.string();
  t["run"]["seed"] = std::to_string(c.seed);
  t["run"]["svg"] = c.svg ? "true" : "false";
  if (c.family) {
    const Family f = *c.family;
    t["model"]["family"] = std::string(family_name(f));
    if (c.preset) t["model"]["preset"] = *c.preset;
    else if (!c.knowns.empty()) t["model"]["preset"] = "none";
    if (c.unknowns) {
      std::string s;
      for (std::size_t k = 0; k < c.unknowns->size(); ++k)
        s += (k ? ", " : "") + std::string(io_label(f, (*c.unknowns)[k]));
      t["model"]["unknowns"] = s;
    }
    for (const auto& [p, v] : c.knowns) t["known"][std::string(io_label(f, p))] = shortest(v);
    for (const auto& [p, v] : c.guess) t["guess"][std::string(io_label(f, p))] = shortest(v);
  }
  if (c.grid.x_min) t["grid"]["x_min"] = shortest(*c.grid.x_min);
  if (c.grid.x_max) t["grid"]["x_max"] = shortest(*c.grid.x_max);
  if (c.grid.n) t["grid"]["n"] = std::to_string(*c.grid.n);
  if (c.grid.discretization)
    t["grid"]["discretization"] =
        *c.grid.discretization == Discretization::kSpectral ? "spectral" : "finite_difference";
  if (c.command == Command::kEvolve) {
    t["evolve"]["dt"] = shortest(c.evolve.dt);
    t["evolve"]["t_end"] = shortest(c.evolve.t_end);
    t["evolve"]["stride"] = std::to_string(c.evolve.stride);
    t["evolve"]["noise"] = shortest(c.evolve.noise);
    if (!c.evolve.snapshot_times.empty())
      t["evolve"]["snapshot_times"] = format_list(c.evolve.snapshot_times);
    if (c.evolve.scheme)
      t["evolve"]["scheme"] =
          *c.evolve.scheme == Scheme::kStrangSpectral ? "strang_spectral" : "rk4_fd";
    t["evolve"]["initial"] =
        c.evolve.initial == InitialState::kStationary ? "stationary" : "superposition";
  }
  if (c.command == Command::kSweep) {
    t["sweep"]["param"] = c.sweep.param;
    t["sweep"]["from"] = shortest(c.sweep.from);
    t["sweep"]["to"] = shortest(c.sweep.to);
    t["sweep"]["steps"] = std::to_string(c.sweep.steps);
  }
  if (c.command == Command::kDiagnose) {
    std::string s;
    for (std::size_t k = 0; k < c.diagnose.inputs.size(); ++k)
      s += (k ? ", " : "") + c.diagnose.inputs[k].string();
    if (!s.empty()) t["diagnose"]["input"] = s;
    if (c.diagnose.trajectory) t["diagnose"]["trajectory"] = c.diagnose.trajectory->string();
    t["diagnose"]["window"] = shortest(c.diagnose.window);
    if (c.diagnose.tail_model)
      t["diagnose"]["tail_model"] =
          *c.diagnose.tail_model == TailModel::kPowerLaw ? "power" : "exponential";
  }
  if (c.command == Command::kCatalog)
    t["catalog"]["B_values"] = format_list(c.catalog_B_values);
  t["tolerances"]["residual"] = shortest(c.tolerances.residual);
  t["tolerances"]["relation"] = shortest(c.tolerances.relation);
  t["tolerances"]["drift"] = shortest(c.tolerances.drift);
  t["tolerances"]["phase_slope"] = shortest(c.tolerances.phase_slope);
  t["tolerances"]["bookkeeping"] = shortest(c.tolerances.bookkeeping);
  return t;
}

void write_config_table(std::ostream& os, const ConfigTable& table) {
  bool first = true;
  for (const auto& [section, keys] : table) {
    if (!first) os << '\n';
    first = false;
    os << '[' << section << "]\n";
    for (const auto& [key, value] : keys) os << key << " = " << value << '\n';
  }
}

}  // namespace ambec
