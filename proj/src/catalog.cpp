#include "ambec/catalog.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ambec {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kDropletGround: return "I";
    case Family::kDropletExcited: return "II";
    case Family::kPulseGround: return "III";
    case Family::kPulseExcited: return "IV";
    case Family::kHyperbolicGround: return "V";
    case Family::kHyperbolicExcited: return "VI";
  }
  return "?";
}

std::string_view family_id(Family f) {
  switch (f) {
    case Family::kDropletGround: return "I_droplet_ground";
    case Family::kDropletExcited: return "II_droplet_excited";
    case Family::kPulseGround: return "III_pulse_ground";
    case Family::kPulseExcited: return "IV_pulse_excited";
    case Family::kHyperbolicGround: return "V_hyperbolic_ground";
    case Family::kHyperbolicExcited: return "VI_hyperbolic_excited";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  static constexpr std::string_view digits[] = {"1", "2", "3", "4", "5", "6"};
  for (std::size_t i = 0; i < std::size(kAllFamilies); ++i) {
    const Family f = kAllFamilies[i];
    if (s == family_name(f) || s == family_id(f) || s == digits[i]) return f;
  }
  throw DomainError("unknown family '" + std::string(s) + "' (expected I..VI)");
}

bool is_ground(Family f) {
  return f == Family::kDropletGround || f == Family::kPulseGround ||
         f == Family::kHyperbolicGround;
}

Family partner(Family f) {
  switch (f) {
    case Family::kDropletGround: return Family::kDropletExcited;
    case Family::kDropletExcited: return Family::kDropletGround;
    case Family::kPulseGround: return Family::kPulseExcited;
    case Family::kPulseExcited: return Family::kPulseGround;
    case Family::kHyperbolicGround: return Family::kHyperbolicExcited;
    case Family::kHyperbolicExcited: return Family::kHyperbolicGround;
  }
  return f;
}

Parity atomic_parity(Family f) { return is_ground(f) ? Parity::kEven : Parity::kOdd; }

DecayClass decay_class(Family f) {
  return (f == Family::kPulseGround || f == Family::kPulseExcited) ? DecayClass::kPowerLaw
                                                                     : DecayClass::kExponential;
}

double AnsatzParams::delta() const { return std::asinh(std::sqrt(B)); }

void validate(Family f, const AnsatzParams& p) {
  auto fail = [&](const std::string& why) {
    throw DomainError("family " + std::string(family_name(f)) + ": " + why);
  };
  if (!std::isfinite(p.A) || !std::isfinite(p.B) || !std::isfinite(p.D) ||
      !std::isfinite(p.beta) || !std::isfinite(p.y))
    fail("parameters must be finite");
  switch (f) {
    case Family::kDropletGround:
    case Family::kDropletExcited:
      if (!(p.B > 0.0)) fail("requires B > 0 (B = sinh^2(delta))");
      if (!(p.beta > 0.0)) fail("requires beta > 0");
      break;
    case Family::kPulseGround:
    case Family::kPulseExcited:
      if (!(p.B > 0.0)) fail("requires B > 0 (no real pole)");
      if (p.y == p.B) fail("requires y != B");
      break;
    case Family::kHyperbolicGround:
    case Family::kHyperbolicExcited:
      if (!(p.beta > 0.0)) fail("requires beta > 0");
      break;
  }
}

Profiles eval_profiles(Family f, const AnsatzParams& p, const Grid& g) {
  validate(f, p);
  Profiles out{RealField(g.size()), RealField(g.size())};
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    const double bx = p.beta * x;
    switch (f) {
      case Family::kDropletGround:
      case Family::kDropletExcited: {
        // cosh/(B + cosh^2) = 1/(B/cosh + cosh) stays finite when cosh overflows.
        const double c = std::cosh(bx);
        const double inv = 1.0 / (p.B / c + c);
        out.a[j] = p.A * (f == Family::kDropletGround ? inv : std::tanh(bx) * inv);
        out.m[j] = p.D / (p.B + c * c);
        break;
      }
      case Family::kPulseGround:
      case Family::kPulseExcited: {
        const double den = p.B + x * x;
        out.a[j] = (f == Family::kPulseGround ? p.A : p.A * x) / den;
        out.m[j] = p.D * (x * x + p.y) / den;
        break;
      }
      case Family::kHyperbolicGround:
      case Family::kHyperbolicExcited: {
        const double sech = 1.0 / std::cosh(bx);
        const double s2 = sech * sech;
        out.a[j] = p.A * (f == Family::kHyperbolicGround ? s2 : sech * std::tanh(bx));
        out.m[j] = p.D * (s2 + p.y);
        break;
      }
    }
  }
  return out;
}

namespace {

void require_droplet(Family f, const char* what) {
  if (f != Family::kDropletGround && f != Family::kDropletExcited)
    throw DomainError(std::string(what) + ": only families I and II");
}

FieldPair with_phases(const Profiles& pr, double mu, double t) {
  FieldPair out;
  out.t = t;
  const cplx ra = std::polar(1.0, -mu * t);
  const cplx rm = std::polar(1.0, -2.0 * mu * t);
  out.psi_a.resize(pr.a.size());
  out.psi_m.resize(pr.m.size());
  for (std::size_t j = 0; j < pr.a.size(); ++j) {
    out.psi_a[j] = pr.a[j] * ra;
    out.psi_m[j] = pr.m[j] * rm;
  }
  return out;
}

}  // namespace

FieldPair eval_family(Family f, const AnsatzParams& p, double mu, const Grid& g, double t) {
  if (f == Family::kDropletGround || f == Family::kDropletExcited) {
    const double b2 = p.beta * p.beta;
    if (std::abs(b2 + 2.0 * mu) > 1e-9 * std::max(1.0, b2)) {
      std::ostringstream os;
      os << "family " << family_name(f) << ": beta^2 = -2 mu violated (beta = " << p.beta
         << ", mu = " << mu << ")";
      throw DomainError(os.str());
    }
  }
  return with_phases(eval_profiles(f, p, g), mu, t);
}

FieldPair superposed_form(Family f, const AnsatzParams& p, const Grid& g) {
  require_droplet(f, "superposed_form");
  validate(f, p);
  const double d = p.delta();
  const double kink_norm = 1.0 / std::sinh(2.0 * d);
  FieldPair out;
  out.psi_a.resize(g.size());
  out.psi_m.resize(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double bx = p.beta * g.x(j);
    const double sech_plus = 1.0 / std::cosh(bx + d);
    const double sech_minus = 1.0 / std::cosh(bx - d);
    // Kink minus anti-kink builds the droplet.
    out.psi_m[j] = p.D * (std::tanh(bx + d) - std::tanh(bx - d)) * kink_norm;
    // Same-parity (ground) or opposite-parity (excited) bright pair.
    out.psi_a[j] = f == Family::kDropletGround
                       ? p.A * (sech_plus + sech_minus) / (2.0 * std::cosh(d))
                       : p.A * (sech_minus - sech_plus) / (2.0 * std::sinh(d));
  }
  return out;
}

DropletScaling droplet_scaling(double B, double D) {
  if (!(B > 0.0)) throw DomainError("droplet_scaling: requires B > 0");
  DropletScaling s;
  s.sqrt_n_m = D * (2.0 * B + 1.0) / (2.0 * B * (B + 1.0));
  s.n_m = s.sqrt_n_m * s.sqrt_n_m;
  const double q = 2.0 * B + 1.0;
  s.mu_ratio = 4.0 * B * (B + 1.0) / (q * q);
  return s;
}

double shape_from_mu_ratio(double mu_ratio) {
  if (!(mu_ratio > 0.0 && mu_ratio < 1.0))
    throw DomainError("mu/mu_0 must lie in (0, 1)");
  // (1 - r)(4B^2 + 4B) = r  =>  (2B + 1)^2 = 1/(1 - r); positive root only.
  return 0.5 * (1.0 / std::sqrt(1.0 - mu_ratio) - 1.0);
}

FieldPair reparametrized_form(Family f, double sqrt_n_m, double mu_ratio, double A,
                              double mu, const Grid& g, double t) {
  require_droplet(f, "reparametrized_form");
  if (!(mu < 0.0)) throw DomainError("reparametrized_form: requires mu < 0");
  const double B = shape_from_mu_ratio(mu_ratio);
  const double k_a = std::sqrt(-2.0 * mu);
  const double k_m = std::sqrt(-8.0 * mu);
  const double s = std::sqrt(1.0 - mu_ratio);
  Profiles pr{RealField(g.size()), RealField(g.size())};
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    const double den = 1.0 + s * std::cosh(k_m * x);
    const double num = f == Family::kDropletGround ? std::cosh(k_a * x) : std::sinh(k_a * x);
    pr.a[j] = std::isinf(den) ? 0.0 : 2.0 * A * num / ((2.0 * B + 1.0) * den);
    pr.m[j] = sqrt_n_m * mu_ratio / den;
  }
  return with_phases(pr, mu, t);
}

CanonicalParams canonicalize(const AnsatzParams& p) {
  CanonicalParams c{p, false};
  if (p.A < 0.0) {
    c.params.A = -p.A;
    c.phase_flipped = true;
  }
  return c;
}

std::vector<FamilyInfo> describe_families() {
  const double r2 = std::numbers::sqrt2;
  return {
      {Family::kDropletGround, "A cosh(beta x)/(B + cosh^2(beta x))", "D/(B + cosh^2(beta x))",
       "B > 0, beta > 0", "mu = -beta^2/2", {1.0, 1.0, 1.0, 1.0, 0.0}},
      {Family::kDropletExcited, "A sinh(beta x)/(B + cosh^2(beta x))", "D/(B + cosh^2(beta x))",
       "B > 0, beta > 0", "mu = -beta^2/2", {1.0, 1.0, 1.2528240506237240, 1.0, 0.0}},
      {Family::kPulseGround, "A/(B + x^2)", "D (x^2 + y)/(B + x^2)", "B > 0, y != B",
       "g_m = 0; epsilon = 2 mu; A^2 = D^2 (y - B)^2; mu = (3y - B)/(y - B)^2",
       {24.0, 16.0, 1.0, 1.0, -8.0}},
      {Family::kPulseExcited, "A x/(B + x^2)", "D (x^2 + y)/(B + x^2)", "B > 0, y != B",
       "nontrivial only for -B < y < 0; epsilon - 2 mu = -g_m D^2 = B/(2y(B + y))",
       {std::sqrt(18.0), 16.0, 1.0, 1.0, -8.0}},
      {Family::kHyperbolicGround, "A sech^2(beta x)", "B (sech^2(beta x) + y)", "beta > 0",
       "y = 0: mu = -2 beta^2, epsilon = -3 beta^2, B = -3 beta^2/(sqrt(2) alpha), A^2 = B^2, "
       "g_a = g_m = -g_am",
       {3.0 / r2, 0.0, -3.0 / r2, 1.0, 0.0}},
      {Family::kHyperbolicExcited, "A sech(beta x) tanh(beta x)", "B (sech^2(beta x) + y)",
       "beta > 0", "y = 0: mu = -beta^2/2", {1.2671034983236331, 0.0, -0.98602414913634521, 1.0, 0.0}},
  };
}

}  // namespace ambec
