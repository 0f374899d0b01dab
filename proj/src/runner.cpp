#include "ambec/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>

#include "ambec/model.hpp"
#include "ambec/snapshot_io.hpp"

#ifndef AMBEC_VERSION
#define AMBEC_VERSION "0.0.0"
#endif

namespace ambec {

namespace fs = std::filesystem;

std::string_view tool_version() { return AMBEC_VERSION; }

Check below(std::string name, double value, double threshold, std::string note) {
  return {std::move(name), value, threshold,
          value < threshold ? CheckStatus::kPass : CheckStatus::kFail, std::move(note)};
}

Check info(std::string name, double value, std::string note) {
  return {std::move(name), value, std::numeric_limits<double>::quiet_NaN(), CheckStatus::kInfo,
          std::move(note)};
}

fs::path resolve_output(const fs::path& p) {
  const char* root = std::getenv("AMBEC_OUTPUT_ROOT");
  if (root && *root && p.is_relative()) return fs::path(root) / p;
  return p;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Tails below this fraction of the peak are roundoff, not decay.
constexpr double kTailFloor = 1e-10;

std::string_view status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kInfo: return "info";
  }
  return "?";
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot write " + path.string());
  return os;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string fmt(double v) { return std::isnan(v) ? "nan" : format_double(v); }

void write_report(const fs::path& dir, const std::vector<Check>& checks) {
  auto os = open_out(dir / "report.csv");
  os << "check,value,threshold,status,note\n";
  for (const auto& c : checks)
    os << csv_field(c.name) << ',' << fmt(c.value) << ',' << fmt(c.threshold) << ','
       << status_name(c.status) << ',' << csv_field(c.note) << '\n';
}

void write_manifest(const fs::path& dir, const ExperimentConfig& cfg) {
  ConfigTable t = to_table(cfg);
  t["manifest"]["tool"] = "ambec";
  t["manifest"]["version"] = std::string(tool_version());
  auto os = open_out(dir / "manifest.ini");
  os << "# Re-run with: ambec run --config manifest.ini\n";
  write_config_table(os, t);
}

std::string label(Family f, const std::string& suffix = {}) {
  return std::string(family_name(f)) + (suffix.empty() ? "" : "." + suffix);
}

// ---- problem assembly -------------------------------------------------------

struct ResolvedProblem {
  ConstraintProblem problem;
  std::map<Param, double> guess;
  std::string preset_name;
};

Grid override_grid(const Grid& base, const GridSpec& spec) {
  if (spec.empty()) return base;
  return make_grid(spec.x_min.value_or(base.x_min()), spec.x_max.value_or(base.x_max()),
                   spec.n.value_or(base.size()), spec.discretization.value_or(base.discretization()));
}

ResolvedProblem resolve_problem(const ExperimentConfig& cfg, Family f) {
  ResolvedProblem r;
  std::string name = cfg.preset.value_or(cfg.knowns.empty() ? "default" : "none");
  if (name != "none") {
    Preset p = preset(f, name);
    r.problem = p.problem;
    r.guess = p.guess;
  } else {
    r.problem.family = f;
  }
  r.preset_name = name;
  for (const auto& [p, v] : cfg.knowns) r.problem.knowns[p] = v;
  for (const auto& [p, v] : cfg.guess) r.guess[p] = v;
  if (cfg.unknowns) {
    // Pin every other open parameter to its starting value.
    ParameterSet start = ParameterSet::from(describe_families()[static_cast<int>(f)].template_params,
                                            Couplings{}, 0.0);
    for (const auto& [p, v] : r.guess) start[p] = v;
    for (Param p : r.problem.unknowns())
      if (std::find(cfg.unknowns->begin(), cfg.unknowns->end(), p) == cfg.unknowns->end())
        r.problem.knowns[p] = start[p];
  }
  ParameterSet probe = ParameterSet::from(describe_families()[static_cast<int>(f)].template_params,
                                          Couplings{}, 0.0);
  for (const auto& [p, v] : r.guess) probe[p] = v;
  for (const auto& [p, v] : r.problem.knowns) probe[p] = v;
  if (r.problem.grid.size() == 0) r.problem.grid = recommended_grid(f, probe);
  r.problem.grid = override_grid(r.problem.grid, cfg.grid);
  return r;
}

double solver_tolerance(const ExperimentConfig& cfg, const Grid& g) {
  return cfg.tolerances.residual > 0.0 ? cfg.tolerances.residual : default_tolerance(g);
}

SolverOptions solver_options(const ExperimentConfig& cfg, const Grid& g) {
  SolverOptions o;
  o.tolerance = solver_tolerance(cfg, g);
  return o;
}

bool relations_apply(Family f, const ParameterSet& s) {
  if (f == Family::kHyperbolicGround || f == Family::kHyperbolicExcited) return s[Param::kY] == 0.0;
  return true;
}

std::vector<Check> solution_checks(Family f, const ConstraintSolution& s, const ExperimentConfig& cfg,
                                   const std::string& prefix) {
  std::vector<Check> out;
  out.push_back(below(prefix + "residual", s.residual_norm, s.tolerance,
                      "stationary residual sup-norm on the problem grid"));
  out.push_back(below(prefix + "collocation_residual", s.collocation_norm, s.tolerance));
  out.push_back(below(prefix + "refined_residual", s.validation_norm, 10.0 * s.tolerance,
                      "4x refined grid, 10x tolerance"));
  if (s.converged && relations_apply(f, s.values))
    out.push_back(below(prefix + "relations", relation_deviation(f, s.values), cfg.tolerances.relation,
                        "closed-form coefficient-matching relations"));
  out.push_back(info(prefix + "null_space_dimension", s.null_space_dimension));
  if (!s.converged) {
    Check c = info(prefix + "converged", 0.0, s.message);
    c.status = CheckStatus::kFail;
    out.push_back(c);
  }
  return out;
}

void write_solution(const fs::path& path, Family f, const ConstraintSolution& s,
                    const std::string& preset_name) {
  auto os = open_out(path);
  os << "# family " << family_id(f) << ", preset " << preset_name << "\n";
  os << "# natural units: hbar = m_atom = 1\n";
  os << "key,value,role\n";
  for (Param p : kAllParams) {
    if (!is_used(f, p)) continue;
    const bool solved = std::find(s.unknowns.begin(), s.unknowns.end(), p) != s.unknowns.end();
    os << io_label(f, p) << ',' << format_double(s.values[p]) << ','
       << (solved ? "solved" : "known") << '\n';
  }
  os << "residual_norm," << fmt(s.residual_norm) << ",diagnostic\n";
  os << "collocation_norm," << fmt(s.collocation_norm) << ",diagnostic\n";
  os << "validation_norm," << fmt(s.validation_norm) << ",diagnostic\n";
  os << "tolerance," << fmt(s.tolerance) << ",diagnostic\n";
  os << "iterations," << s.iterations << ",diagnostic\n";
  os << "null_space_dimension," << s.null_space_dimension << ",diagnostic\n";
  os << "converged," << (s.converged ? 1 : 0) << ",diagnostic\n";
}

void emit_profile(const fs::path& dir, const std::string& stem, const FieldPair& f, const Grid& g,
                  const std::string& title, bool svg) {
  write_density_profile(dir / (stem + ".csv"), f, g, title);
  if (svg) {
    RealField na(g.size()), nm(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      na[j] = std::norm(f.psi_a[j]);
      nm[j] = std::norm(f.psi_m[j]);
    }
    write_svg(dir / (stem + ".svg"), title, "x", g.points(),
              {{"|psi_a|^2", na}, {"|psi_m|^2", nm}});
  }
}

// ---- catalog ----------------------------------------------------------------

void run_catalog(const ExperimentConfig& cfg, const fs::path& dir, std::vector<Check>& checks,
                 std::ostream& log) {
  const std::string text = catalog_text();
  open_out(dir / "catalog.txt") << text;
  log << text;

  for (const auto& info_row : describe_families()) {
    const Family f = info_row.family;
    if (cfg.family && *cfg.family != f) continue;
    const ParameterSet s = ParameterSet::from(info_row.template_params, Couplings{}, 0.0);
    const Grid g = override_grid(recommended_grid(f, s), cfg.grid);
    const Profiles p = eval_profiles(f, info_row.template_params, g);
    FieldPair fp;
    fp.psi_a.assign(p.a.begin(), p.a.end());
    fp.psi_m.assign(p.m.begin(), p.m.end());
    emit_profile(dir, "profile_" + std::string(family_name(f)), fp, g,
                 "family " + std::string(family_name(f)) + " template", cfg.svg);
  }

  // Droplet profiles across B: flat-top development as mu/mu_0 -> 1.
  if (!cfg.family || decay_class(*cfg.family) == DecayClass::kExponential) {
    const Family f = cfg.family && (*cfg.family == Family::kDropletExcited)
                         ? Family::kDropletExcited
                         : Family::kDropletGround;
    std::ostringstream table;
    RealField bs, ratios, flat;
    for (double b : cfg.catalog_B_values) {
      AnsatzParams p = describe_families()[static_cast<int>(f)].template_params;
      p.B = b;
      // The plateau widens like log(B)/beta; keep the tails inside the box.
      const double half = (40.0 + std::log1p(b)) / p.beta;
      const Grid g = override_grid(make_grid(-half, half, 4096), cfg.grid);
      const Profiles pr = eval_profiles(f, p, g);
      FieldPair fp;
      fp.psi_a.assign(pr.a.begin(), pr.a.end());
      fp.psi_m.assign(pr.m.begin(), pr.m.end());
      emit_profile(dir, "profile_" + std::string(family_name(f)) + "_B" + format_double(b), fp, g,
                   "family " + std::string(family_name(f)) + ", B = " + format_double(b), cfg.svg);
      const Grid w = flat_top_window(p.beta);
      const Profiles pw = eval_profiles(f, p, w);
      ComplexField mw(pw.m.begin(), pw.m.end());
      bs.push_back(b);
      ratios.push_back(droplet_scaling(b, p.D).mu_ratio);
      flat.push_back(flat_top_metric(mw));
    }
    write_columns(dir / "droplet_scaling.csv", "B", bs, {{"mu_ratio", ratios}, {"flat_top", flat}},
                  {"mu_ratio = mu/mu_0 = 4B(B+1)/(2B+1)^2; flat_top over |x| <= 1/beta"});
    checks.push_back(info("mu_ratio(B=1)", droplet_scaling(1.0, 1.0).mu_ratio, "expected 8/9"));
  }
}

// ---- solve / verify ---------------------------------------------------------

struct FamilyOutcome {
  Family family = Family::kDropletGround;
  std::string preset_name;
  std::optional<ConstraintSolution> solution;
  std::vector<Check> checks;
  std::string error;  // domain error text, exits 2
  Grid grid;
};

FamilyOutcome solve_family(const ExperimentConfig& cfg, Family f) {
  FamilyOutcome out;
  out.family = f;
  try {
    ResolvedProblem r = resolve_problem(cfg, f);
    out.preset_name = r.preset_name;
    out.grid = r.problem.grid;
    ConstraintSolution s = solve(r.problem, r.guess, solver_options(cfg, r.problem.grid));
    out.checks = solution_checks(f, s, cfg, label(f) + ".");
    out.solution = std::move(s);
  } catch (const DomainError& e) {
    out.error = e.what();
  }
  return out;
}

void record(const FamilyOutcome& o, const fs::path& dir, std::vector<Check>& checks, bool svg,
            std::ostream& log) {
  if (!o.error.empty()) throw DomainError(o.error);
  const ConstraintSolution& s = *o.solution;
  checks.insert(checks.end(), o.checks.begin(), o.checks.end());
  write_solution(dir / ("solution_" + std::string(family_name(o.family)) + ".csv"), o.family, s,
                 o.preset_name);
  const FieldPair fp = eval_family(o.family, s.values.shape(), s.values.mu(), o.grid, 0.0);
  emit_profile(dir, "profile_" + std::string(family_name(o.family)), fp, o.grid,
               "family " + std::string(family_name(o.family)) + " solved state", svg);
  log << "family " << family_name(o.family) << " (" << o.preset_name << "): "
      << (s.converged ? "converged" : "NOT converged") << ", residual " << fmt(s.residual_norm)
      << ", refined " << fmt(s.validation_norm) << ", null dim " << s.null_space_dimension << '\n';
  for (Param p : kAllParams)
    if (is_used(o.family, p))
      log << "  " << io_label(o.family, p) << " = " << format_double(s.values[p]) << '\n';
}

void run_solve(const ExperimentConfig& cfg, const fs::path& dir, std::vector<Check>& checks,
               std::ostream& log) {
  record(solve_family(cfg, *cfg.family), dir, checks, cfg.svg, log);
}

void run_verify(const ExperimentConfig& cfg, const fs::path& dir, std::vector<Check>& checks,
                std::ostream& log) {
  std::vector<Family> families;
  if (cfg.family) families.push_back(*cfg.family);
  else families.assign(std::begin(kAllFamilies), std::end(kAllFamilies));
  std::vector<FamilyOutcome> outcomes(families.size());
  // Independent solves; results are collected by index so the output order
  // does not depend on scheduling.
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < families.size(); ++k) {
    outcomes[k] = solve_family(cfg, families[k]);
  }
  for (const auto& o : outcomes) record(o, dir, checks, cfg.svg, log);

  auto os = open_out(dir / "solutions.csv");
  os << "# canonical parameter names; for V/VI the molecular amplitude B is the D column\n";
  os << "family,preset";
  for (Param p : kAllParams) os << ',' << param_name(p);
  os << ",residual_norm,validation_norm,null_space_dimension,converged\n";
  for (const auto& o : outcomes) {
    const auto& s = *o.solution;
    os << family_name(o.family) << ',' << o.preset_name;
    for (Param p : kAllParams) os << ',' << (is_used(o.family, p) ? fmt(s.values[p]) : "");
    os << ',' << fmt(s.residual_norm) << ',' << fmt(s.validation_norm) << ','
       << s.null_space_dimension << ',' << (s.converged ? 1 : 0) << '\n';
  }
}

// ---- evolve -----------------------------------------------------------------

Grid evolution_grid(const Grid& solve_grid, const ExperimentConfig& cfg) {
  if (!cfg.grid.empty() || solve_grid.spectral()) return solve_grid;
  Grid g = solve_grid;
  while (fd_cfl_limit(g) < cfg.evolve.dt && g.size() > 256)
    g = make_grid(g.x_min(), g.x_max(), g.size() / 2, Discretization::kFiniteDifference);
  return g;
}

void write_trajectory(const fs::path& path, const Trajectory& tr) {
  const bool qubit = !tr.samples.empty() && tr.samples.front().qubit.has_value();
  auto os = open_out(path);
  os << "# trajectory samples (natural units); overlaps are <psi(0), psi(t)>\n";
  os << "t,N_a,N_m,N,E,abs_overlap_a,arg_overlap_a,abs_overlap_m,arg_overlap_m,continuity_max";
  if (qubit) os << ",re_c0,im_c0,re_c1,im_c1,leakage,bookkeeping_error";
  os << '\n';
  for (const auto& s : tr.samples) {
    os << fmt(s.t) << ',' << fmt(s.n_a) << ',' << fmt(s.n_m) << ',' << fmt(s.n_total) << ','
       << fmt(s.energy) << ',' << fmt(std::abs(s.overlap_a)) << ',' << fmt(std::arg(s.overlap_a))
       << ',' << fmt(std::abs(s.overlap_m)) << ',' << fmt(std::arg(s.overlap_m)) << ','
       << fmt(s.continuity);
    if (qubit && s.qubit) {
      const auto& q = *s.qubit;
      os << ',' << fmt(q.c0.real()) << ',' << fmt(q.c0.imag()) << ',' << fmt(q.c1.real()) << ','
         << fmt(q.c1.imag()) << ',' << fmt(q.leakage) << ',' << fmt(q.bookkeeping_error());
    }
    os << '\n';
  }
}

struct Drifts {
  double n = 0.0;
  double e = 0.0;
  double continuity = 0.0;
  double bookkeeping = 0.0;  // relative to ||psi_a||^2
};

double relative(double v, double ref) {
  return std::abs(v - ref) / std::max(std::abs(ref), std::numeric_limits<double>::min());
}

Drifts measure_drifts(const std::vector<Sample>& samples) {
  Drifts d;
  if (samples.empty()) return d;
  const Sample& s0 = samples.front();
  for (const auto& s : samples) {
    d.n = std::max(d.n, relative(s.n_total, s0.n_total));
    d.e = std::max(d.e, relative(s.energy, s0.energy));
    if (std::isfinite(s.continuity)) d.continuity = std::max(d.continuity, s.continuity);
    if (s.qubit && s.qubit->norm2 > 0.0)
      d.bookkeeping = std::max(d.bookkeeping, std::abs(s.qubit->bookkeeping_error()) / s.qubit->norm2);
  }
  return d;
}

void slope_checks(const Trajectory& tr, double mu, double tol, std::vector<Check>& checks) {
  for (Species sp : {Species::kAtomic, Species::kMolecular}) {
    const bool atomic = sp == Species::kAtomic;
    const double expected = atomic ? mu : 2.0 * mu;
    const std::string name = atomic ? "phase_slope_atomic" : "phase_slope_molecular";
    try {
      const double slope = phase_slope(tr, sp);
      checks.push_back(below(name + "_error", std::abs(slope - expected), tol,
                             "slope " + format_double(slope) + " vs " + format_double(expected)));
    } catch (const DomainError& e) {
      checks.push_back(below(name + "_error", kNaN, tol, e.what()));
    }
  }
}

void run_evolve(const ExperimentConfig& cfg, const fs::path& dir, std::vector<Check>& checks,
                std::ostream& log) {
  const Family f = *cfg.family;
  FamilyOutcome o = solve_family(cfg, f);
  if (!o.error.empty()) throw DomainError(o.error);
  const ConstraintSolution& sol = *o.solution;
  checks.insert(checks.end(), o.checks.begin(), o.checks.end());
  write_solution(dir / ("solution_" + std::string(family_name(f)) + ".csv"), f, sol, o.preset_name);
  if (!sol.converged) {
    log << "constraint solve did not converge: " << sol.message << '\n';
    return;
  }

  const Grid g = evolution_grid(o.grid, cfg);
  const double mu = sol.values.mu();
  const Couplings c = sol.values.couplings();
  const AnsatzParams shape = sol.values.shape();

  EvolveSpec spec;
  spec.dt = cfg.evolve.dt;
  spec.t_end = cfg.evolve.t_end;
  spec.observer_stride = cfg.evolve.stride;
  spec.noise_amplitude = cfg.evolve.noise;
  spec.seed = cfg.seed;
  spec.snapshot_times = cfg.evolve.snapshot_times;
  spec.reference_mu = mu;
  spec.scheme = cfg.evolve.scheme.value_or(g.spectral() ? Scheme::kStrangSpectral
                                                        : Scheme::kRk4FiniteDifference);
  spec.validate();

  FieldPair f0 = eval_family(f, shape, mu, g, 0.0);
  const bool superposition = cfg.evolve.initial == InitialState::kSuperposition;
  // Every family has a partner, so every run carries the two-mode projection.
  const std::optional<ModeBasis> basis = make_mode_basis(f, shape, g);
  if (superposition) {
    // Equal two-mode superposition with the stationary state's atomic norm.
    const double norm_a = std::sqrt(particle_numbers(f0, g).n_a);
    for (std::size_t j = 0; j < g.size(); ++j)
      f0.psi_a[j] = norm_a * (basis->ground[j] + basis->excited[j]) / std::numbers::sqrt2;
  }

  log << "evolving family " << family_name(f) << " (" << o.preset_name << ") on "
      << (g.spectral() ? "spectral" : "finite-difference") << " grid [" << g.x_min() << ", "
      << g.x_max() << "], n = " << g.size() << ", dt = " << spec.dt << ", T = " << spec.t_end
      << '\n';

  Trajectory tr;
  try {
    tr = evolve(f0, spec, Potential::zero(), c, g, basis ? &*basis : nullptr);
  } catch (const EvolveError& e) {
    write_trajectory(dir / "trajectory.csv", e.partial());
    throw;
  }
  write_trajectory(dir / "trajectory.csv", tr);
  for (std::size_t k = 0; k < tr.snapshots.size(); ++k)
    write_snapshot((dir / ("snapshot_" + std::to_string(k) + "_t" + format_double(tr.snapshots[k].t) +
                           ".txt")).string(),
                   tr.snapshots[k], g);
  write_snapshot((dir / "final_state.txt").string(), tr.final_state, g);
  for (const auto& w : tr.warnings) log << "warning: " << w << '\n';

  RealField ts, ns, es, leak;
  for (const auto& s : tr.samples) {
    ts.push_back(s.t);
    ns.push_back(s.n_total);
    es.push_back(s.energy);
    leak.push_back(s.qubit ? s.qubit->leakage : kNaN);
  }
  std::vector<Series> series{{"N", ns}, {"E", es}};
  if (basis) series.push_back({"leakage", leak});
  write_columns(dir / "timeseries.csv", "t", ts, series);
  if (cfg.svg) write_svg(dir / "timeseries.svg", "conserved quantities", "t", ts, series);

  const Drifts d = measure_drifts(tr.samples);
  checks.push_back(below("N_drift", d.n, cfg.tolerances.drift, "max relative change of N_a + 2 N_m"));
  checks.push_back(below("E_drift", d.e, cfg.tolerances.drift, "max relative change of E"));
  checks.push_back(info("continuity_max", d.continuity, "sup-norm of the mass-weighted residual"));
  if (basis)
    checks.push_back(below("qubit_bookkeeping", d.bookkeeping, cfg.tolerances.bookkeeping,
                           "|c0|^2 + |c1|^2 + leakage ||psi_a||^2 - ||psi_a||^2, relative"));

  if (!superposition && spec.noise_amplitude == 0.0) {
    slope_checks(tr, mu, cfg.tolerances.phase_slope, checks);
    const FieldPair exact = eval_family(f, shape, mu, g, tr.final_state.t);
    double dev = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      dev = std::max({dev, std::abs(exact.psi_a[j] - tr.final_state.psi_a[j]),
                      std::abs(exact.psi_m[j] - tr.final_state.psi_m[j])});
    checks.push_back(info("stationary_deviation", dev, "sup |psi(T) - psi(0) exp(-i mu T)|"));
  }
  if (spec.noise_amplitude > 0.0) {
    const StabilityReport rep = stability_probe(eval_family(f, shape, mu, g, 0.0), spec,
                                                Potential::zero(), c, g);
    write_columns(dir / "stability.csv", "t", rep.times, {{"deviation", rep.deviations}},
                  {"seed " + std::to_string(rep.seed) + ", noise " + format_double(spec.noise_amplitude)});
    checks.push_back(info("growth_exponent", rep.growth_exponent,
                          "finite-time fit, not a stability classification"));
    checks.push_back(info("max_deviation", rep.max_deviation));
  }
}

// ---- diagnose ---------------------------------------------------------------

struct TrajectoryTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::optional<std::size_t> column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  }
};

TrajectoryTable read_trajectory(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open trajectory file: " + path.string());
  TrajectoryTable t;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (t.header.empty()) {
      t.header = cells;
      continue;
    }
    if (cells.size() != t.header.size())
      throw DomainError("trajectory: row with " + std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(t.header.size()));
    std::vector<double> vals;
    for (const auto& c : cells) vals.push_back(c == "nan" ? kNaN : std::stod(c));
    t.rows.push_back(std::move(vals));
  }
  if (t.header.empty()) throw DomainError("trajectory: missing header");
  for (const char* need : {"t", "N", "E", "abs_overlap_a", "arg_overlap_a", "abs_overlap_m",
                           "arg_overlap_m"})
    if (!t.column(need)) throw DomainError(std::string("trajectory: missing column ") + need);
  return t;
}

void run_diagnose(const ExperimentConfig& cfg, const fs::path& dir, std::vector<Check>& checks,
                  std::ostream& log) {
  std::optional<ConstraintSolution> sol;
  std::optional<FamilyOutcome> outcome;
  if (cfg.family) {
    outcome = solve_family(cfg, *cfg.family);
    if (!outcome->error.empty()) throw DomainError(outcome->error);
    sol = outcome->solution;
  }
  auto os = open_out(dir / "diagnose.csv");
  os << "source,quantity,value\n";
  auto put = [&](const std::string& src, const std::string& q, double v) {
    os << csv_field(src) << ',' << q << ',' << fmt(v) << '\n';
    log << src << ": " << q << " = " << fmt(v) << '\n';
  };

  for (const auto& in : cfg.diagnose.inputs) {
    const Snapshot snap = read_snapshot(in.string());
    const Grid g = snapshot_grid(snap);
    const std::string src = in.filename().string();
    const ParticleNumbers pn = particle_numbers(snap.fields, g);
    put(src, "t", snap.fields.t);
    put(src, "N_a", pn.n_a);
    put(src, "N_m", pn.n_m);
    put(src, "N", pn.total);
    put(src, "flat_top", flat_top_metric(snap.fields.psi_m));

    // Real atomic profile after removing the global phase at the peak.
    std::size_t peak = 0;
    for (std::size_t j = 0; j < g.size(); ++j)
      if (std::abs(snap.fields.psi_a[j]) > std::abs(snap.fields.psi_a[peak])) peak = j;
    const cplx rot = std::abs(snap.fields.psi_a[peak]) > 0.0
                         ? std::conj(snap.fields.psi_a[peak]) / std::abs(snap.fields.psi_a[peak])
                         : cplx(1.0);
    RealField real_a(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) real_a[j] = (rot * snap.fields.psi_a[j]).real();
    put(src, "nodes_a", node_count(real_a));

    const TailModel model = cfg.diagnose.tail_model.value_or(
        cfg.family && decay_class(*cfg.family) == DecayClass::kExponential ? TailModel::kExponential
                                                                           : TailModel::kPowerLaw);
    const std::string tail_name =
        model == TailModel::kPowerLaw ? "tail_power_exponent_a" : "tail_exponential_rate_a";
    try {
      const TailFit fit = tail_exponent(snap.fields.psi_a, g, cfg.diagnose.window, model,
                                        kTailFloor);
      put(src, tail_name, fit.exponent);
      put(src, tail_name + "_std_error", fit.std_error);
    } catch (const DomainError& e) {
      put(src, tail_name, kNaN);
      log << src << ": tail fit skipped: " << e.what() << '\n';
    }

    if (sol && sol->converged) {
      const Couplings c = sol->values.couplings();
      put(src, "energy", energy(snap.fields, Potential::zero(), c, g));
      const ModeBasis basis = make_mode_basis(*cfg.family, sol->values.shape(), g);
      const QubitState q = project_qubit(snap.fields.psi_a, basis, g);
      put(src, "abs_c0", std::abs(q.c0));
      put(src, "abs_c1", std::abs(q.c1));
      put(src, "leakage", q.leakage);
      const double rel = q.norm2 > 0.0 ? std::abs(q.bookkeeping_error()) / q.norm2 : 0.0;
      checks.push_back(below(src + ".qubit_bookkeeping", rel, cfg.tolerances.bookkeeping));
    }
  }

  if (cfg.diagnose.trajectory) {
    const TrajectoryTable t = read_trajectory(*cfg.diagnose.trajectory);
    const std::string src = cfg.diagnose.trajectory->filename().string();
    Trajectory tr;
    const auto ct = *t.column("t"), cn = *t.column("N"), ce = *t.column("E");
    const auto aa = *t.column("abs_overlap_a"), pa = *t.column("arg_overlap_a");
    const auto am = *t.column("abs_overlap_m"), pm = *t.column("arg_overlap_m");
    const auto cc = t.column("continuity_max");
    const auto cb = t.column("bookkeeping_error");
    const auto cnorm_a = t.column("N_a");
    double book = 0.0;
    for (const auto& r : t.rows) {
      Sample s;
      s.t = r[ct];
      s.n_total = r[cn];
      s.energy = r[ce];
      s.overlap_a = std::polar(r[aa], r[pa]);
      s.overlap_m = std::polar(r[am], r[pm]);
      s.continuity = cc ? r[*cc] : kNaN;
      if (cb && cnorm_a && r[*cnorm_a] > 0.0) book = std::max(book, std::abs(r[*cb]) / r[*cnorm_a]);
      tr.samples.push_back(s);
    }
    const Drifts d = measure_drifts(tr.samples);
    put(src, "samples", static_cast<double>(tr.samples.size()));
    put(src, "N_drift", d.n);
    put(src, "E_drift", d.e);
    put(src, "continuity_max", d.continuity);
    checks.push_back(below(src + ".N_drift", d.n, cfg.tolerances.drift));
    checks.push_back(below(src + ".E_drift", d.e, cfg.tolerances.drift));
    if (cb) checks.push_back(below(src + ".qubit_bookkeeping", book, cfg.tolerances.bookkeeping));
    if (tr.samples.size() >= 2) {
      for (Species sp : {Species::kAtomic, Species::kMolecular}) {
        const std::string q = sp == Species::kAtomic ? "phase_slope_atomic" : "phase_slope_molecular";
        try {
          put(src, q, phase_slope(tr, sp));
        } catch (const DomainError& e) {
          put(src, q, kNaN);
          log << src << ": " << e.what() << '\n';
        }
      }
      if (sol && sol->converged) slope_checks(tr, sol->values.mu(), cfg.tolerances.phase_slope, checks);
    }
  }
}

// ---- sweep ------------------------------------------------------------------

void run_sweep(const ExperimentConfig& cfg, const fs::path& dir, std::vector<Check>& checks,
               std::ostream& log) {
  const Family f = *cfg.family;
  ResolvedProblem r = resolve_problem(cfg, f);
  SweepSpec spec;
  spec.param = parse_param(f, cfg.sweep.param);
  spec.from = cfg.sweep.from;
  spec.to = cfg.sweep.to;
  spec.steps = cfg.sweep.steps;
  const Branch br = continuation(r.problem, spec, r.guess, solver_options(cfg, r.problem.grid));

  const bool droplet = f == Family::kDropletGround || f == Family::kDropletExcited;
  auto os = open_out(dir / "branch.csv");
  os << "# family " << family_id(f) << ", sweep of " << cfg.sweep.param << " from "
     << format_double(spec.from) << " to " << format_double(spec.to) << " in " << spec.steps
     << " points\n";
  bool first = true;
  for (Param p : kAllParams)
    if (is_used(f, p)) os << (std::exchange(first, false) ? "" : ",") << io_label(f, p);
  os << ",residual_norm,validation_norm,null_space_dimension";
  if (droplet) os << ",mu_ratio,flat_top";
  os << '\n';
  RealField bs, ratios, flats;
  for (const auto& pt : br.points) {
    const auto& s = pt.solution;
    bool lead = true;
    for (Param p : kAllParams)
      if (is_used(f, p)) os << (std::exchange(lead, false) ? "" : ",") << format_double(s.values[p]);
    os << ',' << fmt(s.residual_norm) << ',' << fmt(s.validation_norm) << ','
       << s.null_space_dimension;
    if (droplet) {
      const double b = s.values[Param::kB];
      const double ratio = droplet_scaling(b, s.values[Param::kD]).mu_ratio;
      const AnsatzParams shape = s.values.shape();
      const Profiles pw = eval_profiles(f, shape, flat_top_window(shape.beta));
      const double flat = flat_top_metric(ComplexField(pw.m.begin(), pw.m.end()));
      os << ',' << format_double(ratio) << ',' << format_double(flat);
      bs.push_back(b);
      ratios.push_back(ratio);
      flats.push_back(flat);
    }
    os << '\n';
  }

  checks.push_back(info("branch_points", static_cast<double>(br.points.size())));
  if (!br.complete) {
    Check c = info("branch_complete", 0.0, br.boundary_report);
    c.status = CheckStatus::kFail;
    checks.push_back(c);
    auto bo = open_out(dir / "boundary.txt");
    bo << "last_good = " << (br.points.empty() ? std::string("none") : format_double(br.points.back().value))
       << '\n';
    if (br.failed_at) bo << "failed_at = " << format_double(*br.failed_at) << '\n';
    bo << "report = " << br.boundary_report << '\n';
    log << "branch truncated: " << br.boundary_report << '\n';
  }
  for (const auto& pt : br.points)
    if (!pt.solution.converged) {
      Check c = info("point_converged", pt.value);
      c.status = CheckStatus::kFail;
      checks.push_back(c);
    }

  if (droplet) {
    write_columns(dir / "branch_mu_ratio.csv", "B", bs, {{"mu_ratio", ratios}},
                  {"droplet branch: mu/mu_0 against B"});
    if (cfg.svg) write_svg(dir / "branch_mu_ratio.svg", "mu/mu_0 along the branch", "B", bs,
                           {{"mu_ratio", ratios}});
    if (spec.param == Param::kB && bs.size() >= 2) {
      const bool up = spec.to > spec.from;
      double worst_ratio = std::numeric_limits<double>::infinity();
      double worst_flat = std::numeric_limits<double>::infinity();
      for (std::size_t k = 1; k < bs.size(); ++k) {
        worst_ratio = std::min(worst_ratio, (up ? 1 : -1) * (ratios[k] - ratios[k - 1]));
        worst_flat = std::min(worst_flat, (up ? 1 : -1) * (flats[k - 1] - flats[k]));
      }
      checks.push_back(below("mu_ratio_monotone", -worst_ratio, 0.0,
                             "negated smallest step of mu_ratio in sweep direction"));
      checks.push_back(below("flat_top_monotone", -worst_flat, 0.0,
                             "negated smallest decrease of flat_top in sweep direction"));
      checks.push_back(info("mu_ratio_last", ratios.back()));
    }
  }
  log << "branch: " << br.points.size() << " points" << (br.complete ? "" : " (truncated)") << '\n';
}

}  // namespace

// ---- public -----------------------------------------------------------------

std::string catalog_text() {
  std::ostringstream os;
  os << "# ambec family catalog (natural units: hbar = m_atom = 1)\n";
  os << "format = key-value\n";
  os << "families = I, II, III, IV, V, VI\n";
  for (const auto& info_row : describe_families()) {
    const Family f = info_row.family;
    const std::string k = "family." + std::string(family_name(f)) + ".";
    os << '\n';
    os << k << "id = " << family_id(f) << '\n';
    os << k << "state = " << (is_ground(f) ? "ground" : "excited") << '\n';
    os << k << "partner = " << family_name(partner(f)) << '\n';
    os << k << "atomic_parity = " << (atomic_parity(f) == Parity::kEven ? "even" : "odd") << '\n';
    os << k << "decay = " << (decay_class(f) == DecayClass::kExponential ? "exponential" : "power_law")
       << '\n';
    os << k << "psi_a = " << info_row.atomic_form << '\n';
    os << k << "psi_m = " << info_row.molecular_form << '\n';
    os << k << "domain = " << info_row.domain << '\n';
    os << k << "relations = " << info_row.known_relations << '\n';
    std::string params, presets;
    for (Param p : kAllParams)
      if (is_used(f, p)) params += (params.empty() ? "" : ", ") + std::string(io_label(f, p));
    for (const auto& n : preset_names(f)) presets += (presets.empty() ? "" : ", ") + n;
    os << k << "parameters = " << params << '\n';
    os << k << "presets = " << presets << '\n';
    const ParameterSet t = ParameterSet::from(info_row.template_params, Couplings{}, 0.0);
    for (Param p : {Param::kA, Param::kB, Param::kD, Param::kBeta, Param::kY})
      if (is_used(f, p)) os << k << "template." << io_label(f, p) << " = " << format_double(t[p]) << '\n';
  }
  return os.str();
}

void write_columns(const fs::path& path, const std::string& x_name, const RealField& x,
                   const std::vector<Series>& series, const std::vector<std::string>& comments) {
  auto os = open_out(path);
  for (const auto& c : comments) os << "# " << c << '\n';
  os << x_name;
  for (const auto& s : series) os << ',' << s.name;
  os << '\n';
  for (std::size_t j = 0; j < x.size(); ++j) {
    os << fmt(x[j]);
    for (const auto& s : series) os << ',' << (j < s.values.size() ? fmt(s.values[j]) : "");
    os << '\n';
  }
}

void write_density_profile(const fs::path& path, const FieldPair& f, const Grid& g,
                           const std::string& title) {
  RealField na(g.size()), nm(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    na[j] = std::norm(f.psi_a[j]);
    nm[j] = std::norm(f.psi_m[j]);
  }
  write_columns(path, "x", g.points(), {{"density_a", na}, {"density_m", nm}},
                {title, "density_a = |psi_a|^2, density_m = |psi_m|^2"});
}

void write_svg(const fs::path& path, const std::string& title, const std::string& x_name,
               const RealField& x, const std::vector<Series>& series) {
  constexpr double W = 640, H = 400, M = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (double v : x) x0 = std::min(x0, v), x1 = std::max(x1, v);
  for (const auto& s : series)
    for (double v : s.values)
      if (std::isfinite(v)) y0 = std::min(y0, v), y1 = std::max(y1, v);
  if (!(x1 > x0)) x0 -= 1, x1 += 1;
  if (!(y1 > y0)) y0 -= 1, y1 += 1;
  auto px = [&](double v) { return M + (v - x0) / (x1 - x0) * (W - 2 * M); };
  auto py = [&](double v) { return H - M - (v - y0) / (y1 - y0) * (H - 2 * M); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  auto os = open_out(path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W - 2 * M << "\" height=\""
     << H - 2 * M << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"25\" text-anchor=\"middle\">" << title << "</text>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << x_name
     << " [" << fmt(x0) << ", " << fmt(x1) << "]</text>\n";
  os << "<text x=\"5\" y=\"" << M - 8 << "\">max " << fmt(y1) << ", min " << fmt(y0) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[k % 4] << "\" points=\"";
    for (std::size_t j = 0; j < x.size() && j < series[k].values.size(); ++j)
      if (std::isfinite(series[k].values[j]))
        os << px(x[j]) << ',' << py(series[k].values[j]) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << W - M - 120 << "\" y=\"" << M + 18 + 16 * k << "\" fill=\"" << colors[k % 4]
       << "\">" << series[k].name << "</text>\n";
  }
  os << "</svg>\n";
}

RunResult run(const ExperimentConfig& cfg, std::ostream& log) {
  RunResult r;
  r.output_dir = resolve_output(cfg.output);
  try {
    fs::create_directories(r.output_dir);
  } catch (const fs::filesystem_error& e) {
    r.exit_code = 2;
    r.message = std::string("cannot create output directory: ") + e.what();
    return r;
  }
  try {
    write_manifest(r.output_dir, cfg);
    switch (cfg.command) {
      case Command::kCatalog: run_catalog(cfg, r.output_dir, r.checks, log); break;
      case Command::kSolveConstraints: run_solve(cfg, r.output_dir, r.checks, log); break;
      case Command::kVerify: run_verify(cfg, r.output_dir, r.checks, log); break;
      case Command::kEvolve: run_evolve(cfg, r.output_dir, r.checks, log); break;
      case Command::kDiagnose: run_diagnose(cfg, r.output_dir, r.checks, log); break;
      case Command::kSweep: run_sweep(cfg, r.output_dir, r.checks, log); break;
    }
    const bool failed = std::any_of(r.checks.begin(), r.checks.end(),
                                    [](const Check& c) { return c.status == CheckStatus::kFail; });
    r.exit_code = failed ? 1 : 0;
    if (failed) r.message = "one or more checks failed; see report.csv";
  } catch (const DomainError& e) {
    r.exit_code = 2;
    r.message = e.what();
  } catch (const NumericalError& e) {
    r.exit_code = 1;
    r.message = e.what();
    Check c = info("numerical_failure", kNaN, e.what());
    c.status = CheckStatus::kFail;
    r.checks.push_back(c);
  }
  try {
    write_report(r.output_dir, r.checks);
  } catch (const DomainError& e) {
    if (r.exit_code == 0) r.exit_code = 2;
    r.message = e.what();
  }
  for (const auto& c : r.checks)
    log << status_name(c.status) << "  " << c.name << " = " << fmt(c.value)
        << (std::isnan(c.threshold) ? "" : " (threshold " + fmt(c.threshold) + ")") << '\n';
  return r;
}

}  // namespace ambec
