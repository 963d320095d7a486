#include "capmax/capacity.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace capmax {

namespace {

// Few-ulp guard for inequalities that hold with equality for homogeneous
// profiles; pow() is not exactly multiplicative in floating point.
constexpr double kUlpGuard = 16.0 * std::numeric_limits<double>::epsilon();

void check_common(double kappa, double d) {
  if (!(kappa > 0.0)) throw std::invalid_argument("profile amplitude kappa must be positive");
  if (!(d > 0.0)) throw std::invalid_argument("profile exponent d must be positive");
}

}  // namespace

RadialProfile RadialProfile::lebesgue(int n) {
  if (n < 1 || n > 2) throw std::invalid_argument("lebesgue profile supports n in {1, 2}");
  RadialProfile p;
  p.kind = ProfileKind::lebesgue;
  p.n = n;
  p.kappa = unit_ball_volume(n);
  p.d = static_cast<double>(n);
  return p;
}

RadialProfile RadialProfile::power_law(double kappa, double d) {
  check_common(kappa, d);
  RadialProfile p;
  p.kind = ProfileKind::power_law;
  p.kappa = kappa;
  p.d = d;
  return p;
}

RadialProfile RadialProfile::wobble(double kappa, double d, double epsilon) {
  check_common(kappa, d);
  if (!(epsilon >= 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("wobble amplitude must lie in [0, 1) for a nonnegative profile");
  RadialProfile p;
  p.kind = ProfileKind::wobble;
  p.kappa = kappa;
  p.d = d;
  p.epsilon = epsilon;
  return p;
}

std::string RadialProfile::describe() const {
  std::ostringstream os;
  switch (kind) {
    case ProfileKind::lebesgue:
      os << "lebesgue(n=" << n << ")";
      break;
    case ProfileKind::power_law:
      os << "power_law(kappa=" << kappa << ", d=" << d << ")";
      break;
    case ProfileKind::wobble:
      os << "wobble(kappa=" << kappa << ", d=" << d << ", eps=" << epsilon << ")";
      break;
  }
  return os.str();
}

double unit_ball_volume(int n) {
  switch (n) {
    case 1:
      return 2.0;
    case 2:
      return std::numbers::pi;
    default:
      return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
  }
}

double ball_capacity(const RadialProfile& profile, double r) {
  if (r < 0.0) throw std::domain_error("ball radius must be nonnegative");
  if (r == 0.0) return 0.0;
  switch (profile.kind) {
    case ProfileKind::lebesgue:
      return profile.kappa * std::pow(r, static_cast<double>(profile.n));
    case ProfileKind::power_law:
      return profile.kappa * std::pow(r, profile.d);
    case ProfileKind::wobble:
      return profile.kappa * std::pow(r, profile.d) * (1.0 + profile.epsilon * std::sin(std::log(r)));
  }
  return 0.0;
}

double inverse_ball_capacity(const RadialProfile& profile, double v) {
  if (!(v > 0.0)) throw std::domain_error("capacity value must be positive");
  switch (profile.kind) {
    case ProfileKind::lebesgue:
      return std::pow(v / profile.kappa, 1.0 / static_cast<double>(profile.n));
    case ProfileKind::power_law:
      return std::pow(v / profile.kappa, 1.0 / profile.d);
    case ProfileKind::wobble:
      break;
  }
  // Bracketed bisection on the strictly increasing wobble profile.  The
  // profile is sandwiched between kappa r^d (1 -+ eps), so expanding around
  // the homogeneous guess finds a bracket in a handful of doublings.
  double guess = std::pow(v / profile.kappa, 1.0 / profile.d);
  double lo = guess, hi = guess;
  while (ball_capacity(profile, lo) > v) lo *= 0.5;
  while (ball_capacity(profile, hi) < v) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ball_capacity(profile, mid) < v)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double ScalingEnvelope::phi(double t) const { return lower_coeff * std::pow(t, degree); }
double ScalingEnvelope::psi(double t) const { return upper_coeff * std::pow(t, degree); }

ScalingEnvelope scaling_envelope(const RadialProfile& profile) {
  ScalingEnvelope env;
  env.degree = profile.degree();
  if (profile.kind == ProfileKind::wobble) {
    env.lower_coeff = (1.0 - profile.epsilon) / (1.0 + profile.epsilon);
    env.upper_coeff = (1.0 + profile.epsilon) / (1.0 - profile.epsilon);
  }
  env.tau = env.upper_coeff / env.lower_coeff;
  return env;
}

ProfileReport validate_profile(const RadialProfile& profile, const std::vector<double>& r_samples,
                               const std::vector<double>& t_samples) {
  if (r_samples.empty() || t_samples.empty())
    throw std::invalid_argument("validate_profile requires nonempty sample lists");
  for (double r : r_samples)
    if (!(r > 0.0)) throw std::invalid_argument("radius samples must be positive");
  for (double t : t_samples)
    if (!(t > 0.0)) throw std::invalid_argument("scale samples must be positive");

  ProfileReport report;

  // Parameter-domain monotonicity for wobble: the guaranteed lower bound on
  // the derivative factor is d(1-eps) - eps, nonnegative iff eps < d/(d+1).
  if (profile.kind == ProfileKind::wobble) {
    const double worst = profile.d * (1.0 - profile.epsilon) - profile.epsilon;
    if (!(worst > 0.0)) {
      report.monotone_ok = false;
      std::ostringstream os;
      os << "wobble amplitude " << profile.epsilon << " >= d/(d+1) = "
         << profile.d / (profile.d + 1.0) << "; worst-case derivative factor " << worst;
      // Representative radius at the worst phase sin(ln r) = -1.
      report.violations.push_back({"monotonicity", 0.0, std::exp(1.5 * std::numbers::pi), os.str()});
    }
  }

  std::vector<double> rs = r_samples;
  for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
    if (!(rs[i] < rs[i + 1])) throw std::invalid_argument("radius samples must be strictly increasing");
    const double c1 = ball_capacity(profile, rs[i]);
    const double c2 = ball_capacity(profile, rs[i + 1]);
    if (!(c1 < c2)) {
      report.monotone_ok = false;
      std::ostringstream os;
      os << "c(" << rs[i] << ") = " << c1 << " !< c(" << rs[i + 1] << ") = " << c2;
      report.violations.push_back({"monotonicity", 0.0, rs[i], os.str()});
    }
  }

  // c(0) = 0 and c(0+) -> 0: the smallest sampled radii must already be small.
  if (ball_capacity(profile, 0.0) != 0.0) {
    report.zero_at_zero_ok = false;
    report.violations.push_back({"zero_at_zero", 0.0, 0.0, "c(0) != 0"});
  }
  const double c_small = ball_capacity(profile, rs.front() * 1e-8);
  const double c_front = ball_capacity(profile, rs.front());
  if (!(c_small < c_front) || !(c_small >= 0.0)) {
    report.zero_at_zero_ok = false;
    report.violations.push_back({"zero_at_zero", 0.0, rs.front() * 1e-8, "c does not vanish at 0+"});
  }

  const ScalingEnvelope env = scaling_envelope(profile);
  for (double t : t_samples) {
    for (double r : rs) {
      const double cr = ball_capacity(profile, r);
      const double ctr = ball_capacity(profile, t * r);
      const double lo = env.phi(t) * cr;
      const double hi = env.psi(t) * cr;
      const double guard = kUlpGuard * (std::abs(ctr) + std::abs(hi));
      if (ctr < lo - guard || ctr > hi + guard) {
        report.envelope_ok = false;
        std::ostringstream os;
        os << "c(t r) = " << ctr << " outside [" << lo << ", " << hi << "]";
        report.violations.push_back({"envelope", t, r, os.str()});
      }
    }
  }
  return report;
}

std::vector<double> geometric_lattice(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw std::invalid_argument("bad lattice parameters");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace capmax
