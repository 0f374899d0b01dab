#include "ambec/constraints.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ambec/model.hpp"

namespace ambec {

std::string_view param_name(Param p) {
  static constexpr std::string_view names[kParamCount] = {
      "A", "B", "D", "beta", "y", "mu", "g_a", "g_m", "g_am", "alpha", "epsilon"};
  return names[static_cast<std::size_t>(p)];
}

namespace {

bool hyperbolic(Family f) {
  return f == Family::kHyperbolicGround || f == Family::kHyperbolicExcited;
}
bool pulse(Family f) { return f == Family::kPulseGround || f == Family::kPulseExcited; }

}  // namespace

std::string_view io_label(Family f, Param p) {
  if (hyperbolic(f) && p == Param::kD) return "B";
  return param_name(p);
}

Param parse_param(Family f, std::string_view s) {
  if (hyperbolic(f) && (s == "B" || s == "M")) return Param::kD;
  for (Param p : kAllParams)
    if (s == param_name(p)) return p;
  throw DomainError("unknown parameter '" + std::string(s) + "'");
}

bool is_used(Family f, Param p) {
  if (p == Param::kY) return !(f == Family::kDropletGround || f == Family::kDropletExcited);
  if (p == Param::kBeta) return !pulse(f);
  if (p == Param::kB) return !hyperbolic(f);
  return true;
}

AnsatzParams ParameterSet::shape() const {
  const auto& s = *this;
  return {s[Param::kA], s[Param::kB], s[Param::kD], s[Param::kBeta], s[Param::kY]};
}

Couplings ParameterSet::couplings() const {
  const auto& s = *this;
  return {s[Param::kGa], s[Param::kGm], s[Param::kGam], s[Param::kAlpha], s[Param::kEpsilon]};
}

ParameterSet ParameterSet::from(const AnsatzParams& p, const Couplings& c, double mu) {
  ParameterSet s;
  s[Param::kA] = p.A;
  s[Param::kB] = p.B;
  s[Param::kD] = p.D;
  s[Param::kBeta] = p.beta;
  s[Param::kY] = p.y;
  s[Param::kMu] = mu;
  s[Param::kGa] = c.g_a;
  s[Param::kGm] = c.g_m;
  s[Param::kGam] = c.g_am;
  s[Param::kAlpha] = c.alpha;
  s[Param::kEpsilon] = c.epsilon;
  return s;
}

std::vector<Param> ConstraintProblem::unknowns() const {
  std::vector<Param> out;
  for (Param p : kAllParams)
    if (is_used(family, p) && !knowns.contains(p)) out.push_back(p);
  return out;
}

double default_tolerance(const Grid& g) { return g.spectral() ? 1e-10 : 1e-8; }

namespace {

// Value with first and second derivative in x.
struct Jet {
  double v = 0.0;
  double d = 0.0;
  double dd = 0.0;
};

Jet operator+(double s, Jet a) { return {s + a.v, a.d, a.dd}; }
Jet operator*(double s, Jet a) { return {s * a.v, s * a.d, s * a.dd}; }
Jet operator*(Jet a, Jet b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
}
Jet operator/(Jet a, Jet b) {
  const double w = a.v / b.v;
  const double wd = (a.d - w * b.d) / b.v;
  const double wdd = (a.dd - 2.0 * wd * b.d - w * b.dd) / b.v;
  return {w, wd, wdd};
}
Jet cosh(Jet u) {
  const double c = std::cosh(u.v), s = std::sinh(u.v);
  return {c, s * u.d, c * u.d * u.d + s * u.dd};
}
Jet sinh(Jet u) {
  const double c = std::cosh(u.v), s = std::sinh(u.v);
  return {s, c * u.d, s * u.d * u.d + c * u.dd};
}

struct ProfileJets {
  Jet a;
  Jet m;
};

ProfileJets profile_jets(Family f, const AnsatzParams& p, double x) {
  const Jet xj{x, 1.0, 0.0};
  switch (f) {
    case Family::kDropletGround:
    case Family::kDropletExcited: {
      const Jet u = p.beta * xj;
      const Jet c = cosh(u);
      const Jet den = p.B + c * c;
      const Jet num = f == Family::kDropletGround ? c : sinh(u);
      return {p.A * (num / den), p.D * (Jet{1.0, 0.0, 0.0} / den)};
    }
    case Family::kPulseGround:
    case Family::kPulseExcited: {
      const Jet x2 = xj * xj;
      const Jet den = p.B + x2;
      const Jet num = f == Family::kPulseGround ? Jet{1.0, 0.0, 0.0} : xj;
      return {p.A * (num / den), p.D * ((p.y + x2) / den)};
    }
    case Family::kHyperbolicGround:
    case Family::kHyperbolicExcited: {
      const Jet u = p.beta * xj;
      const Jet sech = Jet{1.0, 0.0, 0.0} / cosh(u);
      const Jet s2 = sech * sech;
      const Jet a = f == Family::kHyperbolicGround ? s2 : sech * (sinh(u) * sech);
      return {p.A * a, p.D * (p.y + s2)};
    }
  }
  return {};
}

double sup(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s = std::max(s, std::abs(e));
  return s;
}

}  // namespace

RealField collocation_residual(Family f, const ParameterSet& s, std::span<const double> x) {
  const AnsatzParams p = s.shape();
  validate(f, p);
  const Couplings c = s.couplings();
  const double mu = s.mu();
  const double r2 = std::numbers::sqrt2;
  RealField r(2 * x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto [a, m] = profile_jets(f, p, x[k]);
    r[k] = -0.5 * a.dd + (c.g_a * a.v * a.v + c.g_am * m.v * m.v) * a.v +
           r2 * c.alpha * m.v * a.v - mu * a.v;
    r[x.size() + k] = -0.25 * m.dd + (c.epsilon + c.g_m * m.v * m.v + c.g_am * a.v * a.v) * m.v +
                      c.alpha / r2 * a.v * a.v - 2.0 * mu * m.v;
  }
  return r;
}

RealField constraint_residual(Family f, const ParameterSet& s, const Grid& g) {
  const Profiles pr = eval_profiles(f, s.shape(), g);
  const StationaryResidual sr = stationary_residual(pr.a, pr.m, s.couplings(), s.mu(), g);
  RealField out(sr.r_a);
  out.insert(out.end(), sr.r_m.begin(), sr.r_m.end());
  return out;
}

RealField collocation_points(Family f, const ParameterSet& s, std::size_t count) {
  double half = 0.0;
  if (pulse(f))
    half = 6.0 * std::sqrt(std::max({std::abs(s[Param::kB]), std::abs(s[Param::kY]), 1e-6}));
  else
    half = 10.0 / std::abs(s[Param::kBeta]);
  RealField x(count);
  for (std::size_t k = 0; k < count; ++k)
    x[k] = half * std::cos(std::numbers::pi * (static_cast<double>(k) + 0.5) /
                           static_cast<double>(count));
  return x;
}

namespace {

void check_knowns(const ConstraintProblem& pb) {
  ParameterSet probe;
  const AnsatzParams tmpl = describe_families()[static_cast<std::size_t>(pb.family)].template_params;
  probe[Param::kA] = tmpl.A;
  probe[Param::kB] = tmpl.B;
  probe[Param::kD] = tmpl.D;
  probe[Param::kBeta] = tmpl.beta;
  probe[Param::kY] = tmpl.y;
  for (const auto& [p, v] : pb.knowns) {
    if (!std::isfinite(v))
      throw DomainError("known " + std::string(param_name(p)) + " is not finite");
    probe[p] = v;
  }
  // Only shape constraints that involve knowns alone can be decided here.
  const bool b_known = pb.knowns.contains(Param::kB);
  const bool y_known = pb.knowns.contains(Param::kY);
  if (pulse(pb.family) && b_known && y_known && probe[Param::kY] == probe[Param::kB])
    throw DomainError("family " + std::string(family_name(pb.family)) + ": requires y != B");
  if (b_known && is_used(pb.family, Param::kB) && !(probe[Param::kB] > 0.0))
    throw DomainError("family " + std::string(family_name(pb.family)) + ": requires B > 0");
  if (pb.knowns.contains(Param::kBeta) && is_used(pb.family, Param::kBeta) &&
      !(probe[Param::kBeta] > 0.0))
    throw DomainError("family " + std::string(family_name(pb.family)) + ": requires beta > 0");
}

ParameterSet initial_assignment(const ConstraintProblem& pb, const std::map<Param, double>& guess) {
  ParameterSet s;
  const AnsatzParams tmpl = describe_families()[static_cast<std::size_t>(pb.family)].template_params;
  s[Param::kA] = tmpl.A;
  s[Param::kB] = tmpl.B;
  s[Param::kD] = tmpl.D;
  s[Param::kBeta] = tmpl.beta;
  s[Param::kY] = tmpl.y;
  for (const auto& [p, v] : guess) s[p] = v;
  for (const auto& [p, v] : pb.knowns) s[p] = v;
  return s;
}

struct LmResult {
  Eigen::VectorXd p;
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  int iterations = 0;
  bool stalled = false;
};

class Objective {
 public:
  Objective(Family f, ParameterSet base, std::vector<Param> unknowns, RealField x)
      : f_(f), base_(base), unknowns_(std::move(unknowns)), x_(std::move(x)) {}

  std::size_t rows() const { return 2 * x_.size(); }

  ParameterSet assign(const Eigen::VectorXd& p) const {
    ParameterSet s = base_;
    for (std::size_t i = 0; i < unknowns_.size(); ++i) s[unknowns_[i]] = p[static_cast<Eigen::Index>(i)];
    return s;
  }

  // False when p leaves the domain or produces non-finite residuals.
  bool eval(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
    RealField v;
    try {
      v = collocation_residual(f_, assign(p), x_);
    } catch (const DomainError&) {
      return false;
    }
    r.resize(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i])) return false;
      r[static_cast<Eigen::Index>(i)] = v[i];
    }
    return true;
  }

  bool jacobian(const Eigen::VectorXd& p, const Eigen::VectorXd& r0, Eigen::MatrixXd& jac) const {
    const auto n = p.size();
    jac.resize(static_cast<Eigen::Index>(rows()), n);
    Eigen::VectorXd rp, rm;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(p[i]));
      Eigen::VectorXd pp = p, pm = p;
      pp[i] += h;
      pm[i] -= h;
      const bool okp = eval(pp, rp);
      const bool okm = eval(pm, rm);
      if (okp && okm)
        jac.col(i) = (rp - rm) / (2.0 * h);
      else if (okp)
        jac.col(i) = (rp - r0) / h;
      else if (okm)
        jac.col(i) = (r0 - rm) / h;
      else
        return false;
    }
    return true;
  }

 private:
  Family f_;
  ParameterSet base_;
  std::vector<Param> unknowns_;
  RealField x_;
};

LmResult levenberg_marquardt(const Objective& obj, Eigen::VectorXd p, const SolverOptions& opts) {
  LmResult res;
  if (!obj.eval(p, res.r)) throw DomainError("initial guess lies outside the family domain");
  double cost = res.r.squaredNorm();
  double lambda = 1e-3;
  const auto n = p.size();
  const auto m = static_cast<Eigen::Index>(obj.rows());
  Eigen::VectorXd r_new;
  bool small_step = false;
  for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
    if (res.r.cwiseAbs().maxCoeff() == 0.0) break;
    if (!obj.jacobian(p, res.r, res.jac)) {
      res.stalled = true;
      break;
    }

    Eigen::VectorXd scale = res.jac.colwise().norm().transpose();
    for (Eigen::Index i = 0; i < n; ++i) scale[i] = std::max(scale[i], 1e-12);

    bool accepted = false;
    while (lambda < 1e16) {
      Eigen::MatrixXd aug(m + n, n);
      aug.topRows(m) = res.jac;
      aug.bottomRows(n) = (std::sqrt(lambda) * scale).asDiagonal();
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + n);
      rhs.head(m) = -res.r;
      const Eigen::VectorXd step = aug.colPivHouseholderQr().solve(rhs);
      const Eigen::VectorXd trial = p + step;
      if (obj.eval(trial, r_new) && r_new.squaredNorm() < cost) {
        small_step = step.norm() <= opts.normal_tolerance * (p.norm() + opts.normal_tolerance);
        p = trial;
        res.r = r_new;
        cost = r_new.squaredNorm();
        lambda = std::max(lambda / 3.0, 1e-15);
        accepted = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted) {
      // No descent left: roundoff floor or a genuine stall; the caller
      // decides from the residual.
      res.stalled = true;
      break;
    }
    if (small_step) {
      ++res.iterations;
      break;
    }
  }
  res.p = p;
  obj.jacobian(p, res.r, res.jac);
  return res;
}

int null_space_dimension(const Eigen::MatrixXd& jac, double rank_tol) {
  if (jac.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > rank_tol * smax) ++rank;
  return static_cast<int>(jac.cols()) - rank;
}

}  // namespace

ConstraintSolution solve(const ConstraintProblem& problem, const std::map<Param, double>& guess,
                         const SolverOptions& opts) {
  if (problem.grid.size() == 0) throw DomainError("constraint problem has no grid");
  check_knowns(problem);
  const std::vector<Param> unknowns = problem.unknowns();
  if (unknowns.empty()) throw DomainError("constraint problem has no unknowns");
  if (unknowns.size() > 2 * opts.collocation_points)
    throw DomainError("more unknowns than collocation equations");

  ConstraintSolution sol;
  sol.unknowns = unknowns;
  sol.tolerance = opts.tolerance > 0.0 ? opts.tolerance : default_tolerance(problem.grid);

  const ParameterSet start = initial_assignment(problem, guess);
  validate(problem.family, start.shape());
  Objective obj(problem.family, start, unknowns,
                collocation_points(problem.family, start, opts.collocation_points));
  Eigen::VectorXd p(static_cast<Eigen::Index>(unknowns.size()));
  for (std::size_t i = 0; i < unknowns.size(); ++i)
    p[static_cast<Eigen::Index>(i)] = start[unknowns[i]];

  const LmResult lm = levenberg_marquardt(obj, p, opts);
  sol.values = obj.assign(lm.p);
  sol.iterations = lm.iterations;
  sol.collocation_norm = lm.r.cwiseAbs().maxCoeff();
  sol.null_space_dimension = null_space_dimension(lm.jac, opts.rank_tolerance);

  // The clustered points depend on the shape; recheck on the final shape.
  sol.collocation_norm = std::max(
      sol.collocation_norm,
      sup(collocation_residual(problem.family, sol.values,
                               collocation_points(problem.family, sol.values,
                                                  opts.collocation_points))));
  sol.residual_norm = sup(constraint_residual(problem.family, sol.values, problem.grid));
  sol.validation_norm = sup(constraint_residual(
      problem.family, sol.values, problem.grid.refined(opts.validation_refinement)));

  std::ostringstream msg;
  const ParameterSet& v = sol.values;
  const bool trivial = std::max(std::abs(v[Param::kA]), std::abs(v[Param::kD])) < 1e-8;
  sol.converged = !trivial && sol.collocation_norm < sol.tolerance &&
                  sol.residual_norm < sol.tolerance && sol.validation_norm < 10.0 * sol.tolerance;
  if (trivial)
    msg << "collapsed onto the trivial solution A = D = 0";
  else if (sol.converged)
    msg << "converged in " << sol.iterations << " iterations";
  else if (sol.collocation_norm >= sol.tolerance)
    msg << "no convergence after " << sol.iterations
        << " iterations; best collocation residual " << sol.collocation_norm;
  else
    msg << "collocation converged but grid validation failed (grid " << sol.residual_norm
        << ", refined " << sol.validation_norm << ")";
  if (sol.null_space_dimension > 0)
    msg << "; " << sol.null_space_dimension << "-parameter continuum of solutions";
  sol.message = msg.str();
  return sol;
}

Branch continuation(const ConstraintProblem& problem, const SweepSpec& sweep,
                    const std::map<Param, double>& guess, const SolverOptions& opts) {
  if (sweep.steps < 1) throw DomainError("sweep needs at least one step");
  if (!is_used(problem.family, sweep.param))
    throw DomainError("family " + std::string(family_name(problem.family)) + " does not use " +
                      std::string(io_label(problem.family, sweep.param)));
  Branch br;
  br.family = problem.family;
  br.param = sweep.param;
  ConstraintProblem pb = problem;
  std::map<Param, double> next_guess = guess;
  const std::vector<Param> unknowns = [&] {
    pb.knowns[sweep.param] = sweep.from;
    return pb.unknowns();
  }();

  for (int k = 0; k < sweep.steps; ++k) {
    const double value =
        sweep.steps == 1 ? sweep.from
                         : sweep.from + (sweep.to - sweep.from) * k / (sweep.steps - 1.0);
    pb.knowns[sweep.param] = value;
    const std::size_t np = br.points.size();
    if (np >= 2) {
      // Secant predictor through the last two converged points.
      const auto& p1 = br.points[np - 1];
      const auto& p0 = br.points[np - 2];
      const double t = (value - p1.value) / (p1.value - p0.value);
      for (Param u : unknowns)
        next_guess[u] = p1.solution.values[u] + t * (p1.solution.values[u] - p0.solution.values[u]);
    } else if (np == 1) {
      for (Param u : unknowns) next_guess[u] = br.points.back().solution.values[u];
    }

    std::ostringstream why;
    try {
      ConstraintSolution s = solve(pb, next_guess, opts);
      if (s.converged) {
        br.points.push_back({value, std::move(s)});
        continue;
      }
      why << "loss of convergence: " << s.message;
    } catch (const DomainError& e) {
      why << "domain boundary: " << e.what();
    }
    br.failed_at = value;
    std::ostringstream rep;
    rep << io_label(pb.family, sweep.param) << " = " << value << ": " << why.str();
    if (!br.points.empty())
      rep << "; last good " << io_label(pb.family, sweep.param) << " = " << br.points.back().value;
    else
      rep << "; no converged seed at the range start";
    br.boundary_report = rep.str();
    return br;
  }
  br.complete = true;
  return br;
}

ParameterSet rescale(Family f, const ParameterSet& s, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("rescale: lambda must be positive");
  ParameterSet out = s;
  out[Param::kMu] = s[Param::kMu] / (lambda * lambda);
  out[Param::kEpsilon] = s[Param::kEpsilon] / (lambda * lambda);
  out[Param::kAlpha] = s[Param::kAlpha] / lambda;
  if (pulse(f)) {
    out[Param::kB] = s[Param::kB] * lambda * lambda;
    out[Param::kY] = s[Param::kY] * lambda * lambda;
    out[Param::kD] = s[Param::kD] / lambda;
    if (f == Family::kPulseGround) out[Param::kA] = s[Param::kA] * lambda;
  } else {
    out[Param::kBeta] = s[Param::kBeta] / lambda;
    out[Param::kA] = s[Param::kA] / lambda;
    out[Param::kD] = s[Param::kD] / lambda;
  }
  return out;
}

double relation_deviation(Family f, const ParameterSet& s) {
  const double A = s[Param::kA], B = s[Param::kB], D = s[Param::kD], beta = s[Param::kBeta],
               y = s[Param::kY], mu = s[Param::kMu], eps = s[Param::kEpsilon],
               ga = s[Param::kGa], gm = s[Param::kGm], gam = s[Param::kGam],
               alpha = s[Param::kAlpha];
  const double b2 = beta * beta;
  double dev = 0.0;
  auto add = [&](double v) { dev = std::max(dev, std::abs(v)); };
  switch (f) {
    case Family::kDropletGround:
    case Family::kDropletExcited:
      add(mu + 0.5 * b2);
      break;
    case Family::kPulseGround:
      add(gm);
      add(eps - 2.0 * mu);
      add(A * A - D * D * (y - B) * (y - B));
      add(mu - (3.0 * y - B) / ((y - B) * (y - B)));
      break;
    case Family::kPulseExcited: {
      const double shift = B / (2.0 * y * (B + y));
      add(eps - 2.0 * mu - shift);
      add(gm * D * D + shift);
      break;
    }
    case Family::kHyperbolicGround:
      if (y == 0.0) {
        add(mu + 2.0 * b2);
        add(eps + 3.0 * b2);
        add(D + 3.0 * b2 / (std::numbers::sqrt2 * alpha));
        add(A * A - D * D);
        add(ga - gm);
        add(ga + gam);
      }
      break;
    case Family::kHyperbolicExcited:
      if (y == 0.0) add(mu + 0.5 * b2);
      break;
  }
  return dev;
}

PairReport shared_pair(Family ground, const ParameterSet& gs, const Grid& g,
                       const SolverOptions& opts) {
  PairReport rep;
  rep.ground = ground;
  rep.excited = partner(ground);
  ConstraintProblem pb;
  pb.family = rep.excited;
  pb.grid = g;
  for (Param p : {Param::kB, Param::kD, Param::kBeta, Param::kY, Param::kMu, Param::kEpsilon,
                  Param::kAlpha})
    if (is_used(pb.family, p)) pb.knowns[p] = gs[p];
  std::map<Param, double> guess{{Param::kA, gs[Param::kA]}, {Param::kGa, gs[Param::kGa]},
                                {Param::kGm, gs[Param::kGm]}, {Param::kGam, gs[Param::kGam]}};
  rep.excited_solution = solve(pb, guess, opts);
  const ParameterSet& es = rep.excited_solution.values;
  rep.molecular_mismatch = std::max({std::abs(es[Param::kD] - gs[Param::kD]),
                                     std::abs(es.mu() - gs.mu()),
                                     std::abs(es[Param::kEpsilon] - gs[Param::kEpsilon])});
  const double amp_floor = 1e-6 * std::max(1.0, std::abs(gs[Param::kA]));
  rep.found = rep.excited_solution.converged && std::abs(es[Param::kA]) > amp_floor;
  std::ostringstream msg;
  if (rep.found)
    msg << "partner " << family_name(rep.excited) << " exists with A = " << es[Param::kA];
  else if (rep.excited_solution.converged)
    msg << "partner " << family_name(rep.excited)
        << " only reached the trivial atomic amplitude (A = " << es[Param::kA] << ")";
  else
    msg << "partner " << family_name(rep.excited) << " not found: "
        << rep.excited_solution.message;
  rep.message = msg.str();
  return rep;
}

Grid recommended_grid(Family f, const ParameterSet& s) {
  if (pulse(f)) {
    const double half = 20.0 * std::sqrt(std::max(s[Param::kB], 1e-12));
    return make_grid(-half, half, 8192, Discretization::kFiniteDifference);
  }
  const double half = 40.0 / s[Param::kBeta];
  return make_grid(-half, half, 2048, Discretization::kSpectral);
}

namespace {

Preset make_preset(Family f, std::string name, std::map<Param, double> knowns,
                   std::map<Param, double> guess, std::string description) {
  Preset p;
  p.name = std::move(name);
  p.problem.family = f;
  p.problem.knowns = std::move(knowns);
  p.guess = std::move(guess);
  p.description = std::move(description);
  ParameterSet s = initial_assignment(p.problem, p.guess);
  p.problem.grid = recommended_grid(f, s);
  return p;
}

}  // namespace

std::vector<std::string> preset_names(Family f) {
  if (f == Family::kHyperbolicGround) return {"default", "y0", "repulsive", "y1"};
  if (f == Family::kHyperbolicExcited) return {"default", "y0", "broad"};
  return {"default"};
}

Preset preset(Family f, std::string_view name) {
  using P = Param;
  const bool y0 = name == "default" || name == "y0";
  switch (f) {
    case Family::kDropletGround:
      if (name != "default") break;
      return make_preset(f, "default", {{P::kA, 1.0}, {P::kB, 1.0}, {P::kD, 1.0}, {P::kBeta, 1.0}},
                         {{P::kMu, -0.5}}, "unit droplet: A = B = D = beta = 1");
    case Family::kDropletExcited:
      if (name != "default") break;
      return make_preset(f, "default", {{P::kA, 1.0}, {P::kB, 1.0}, {P::kBeta, 1.0}, {P::kAlpha, 0.2}},
                         {{P::kD, 1.25}, {P::kMu, -0.5}, {P::kEpsilon, -0.1}, {P::kGa, -7.0},
                          {P::kGm, -3.0}, {P::kGam, -4.0}},
                         "excited droplet: A = B = beta = 1, alpha = 0.2");
    case Family::kPulseGround:
      if (name != "default") break;
      return make_preset(f, "default", {{P::kB, 16.0}, {P::kY, -8.0}, {P::kD, 1.0}},
                         {{P::kA, 24.0}, {P::kMu, -0.07}, {P::kEpsilon, -0.14}},
                         "Lorentzian pulse: B = 16, y = -8, D = 1");
    case Family::kPulseExcited:
      if (name != "default") break;
      return make_preset(f, "default", {{P::kB, 16.0}, {P::kY, -8.0}, {P::kD, 1.0}},
                         {{P::kA, 4.0}, {P::kMu, 0.3}, {P::kEpsilon, 0.5}},
                         "odd Lorentzian pulse: B = 16, y = -8, D = 1");
    case Family::kHyperbolicGround:
      if (y0)
        return make_preset(f, std::string(name),
                           {{P::kBeta, 1.0}, {P::kAlpha, 1.0}, {P::kGa, -1.0}, {P::kY, 0.0}},
                           {{P::kA, 2.0}, {P::kD, -2.0}, {P::kMu, -1.5}, {P::kEpsilon, -2.5}},
                           "sech^2 pair: beta = 1, alpha = 1, g_a = -1, y = 0");
      if (name == "repulsive")
        return make_preset(f, "repulsive",
                           {{P::kBeta, 1.0}, {P::kAlpha, 1.0}, {P::kGa, 1.0}, {P::kY, 0.0}},
                           {{P::kA, 2.0}, {P::kD, -2.0}, {P::kMu, -1.5}, {P::kEpsilon, -2.5}},
                           "sech^2 pair with repulsive self-interaction: beta = 1, alpha = 1, "
                           "g_a = 1, y = 0");
      if (name == "y1")
        return make_preset(f, "y1", {{P::kBeta, 1.0}, {P::kY, 1.0}, {P::kD, 1.0}},
                           {{P::kA, 1.4}, {P::kMu, -4.7}, {P::kEpsilon, -10.0}, {P::kAlpha, -1.7}},
                           "sech^2 pair on a background: beta = 1, y = 1, B = 1");
      break;
    case Family::kHyperbolicExcited:
      if (y0)
        return make_preset(f, std::string(name),
                           {{P::kBeta, 1.0}, {P::kAlpha, 1.0}, {P::kGa, -1.0}, {P::kY, 0.0}},
                           {{P::kA, 1.3}, {P::kD, -1.0}, {P::kMu, -0.5}, {P::kEpsilon, 1.0},
                            {P::kGm, -2.7}, {P::kGam, -1.6}},
                           "sech tanh pair: beta = 1, alpha = 1, g_a = -1, y = 0");
      if (name == "broad")
        return make_preset(f, "broad",
                           {{P::kBeta, 0.5}, {P::kAlpha, 0.5}, {P::kGa, -1.0}, {P::kY, 0.0}},
                           {{P::kA, 0.6}, {P::kD, -0.5}, {P::kMu, -0.125}, {P::kEpsilon, 0.3},
                            {P::kGm, -2.7}, {P::kGam, -1.6}},
                           "broad sech tanh pair: beta = 1/2, alpha = 1/2, g_a = -1, y = 0");
      break;
  }
  throw DomainError("family " + std::string(family_name(f)) + " has no preset '" +
                    std::string(name) + "'");
}

}  // namespace ambec
