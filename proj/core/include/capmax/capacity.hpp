// Radial capacity profiles and their scaling envelopes.
//
// A profile is the ball function r -> c(r) = C(B(x, r)) of a translation-
// invariant capacity with C({x}) = 0.  Three families are built in:
//
//   lebesgue(n)          c(r) = omega_n r^n          (omega_1 = 2, omega_2 = pi)
//   power_law(kappa, d)  c(r) = kappa r^d
//   wobble(kappa, d, eps) c(r) = kappa r^d (1 + eps sin(ln r))
//
// The wobble family is the only one whose scaling envelope is not tight:
// phi(t) = t^d (1-eps)/(1+eps), psi(t) = t^d (1+eps)/(1-eps), so the envelope
// ratio tau = ((1+eps)/(1-eps))^2 exceeds 1.  Strict monotonicity of the
// wobble profile is guaranteed on the parameter domain eps < d/(d+1), which
// validate_profile enforces; outside it the profile is still representable so
// the failure can be reported instead of thrown.

#pragma once

#include <string>
#include <vector>

namespace capmax {

enum class ProfileKind { lebesgue, power_law, wobble };

struct RadialProfile {
  ProfileKind kind = ProfileKind::lebesgue;
  int n = 1;             // spatial dimension, lebesgue only
  double kappa = 1.0;    // amplitude, power_law/wobble
  double d = 1.0;        // homogeneity exponent, power_law/wobble
  double epsilon = 0.0;  // wobble amplitude

  static RadialProfile lebesgue(int n);
  static RadialProfile power_law(double kappa, double d);
  static RadialProfile wobble(double kappa, double d, double epsilon);

  // Homogeneity degree of the two-sided scaling envelope.
  double degree() const { return kind == ProfileKind::lebesgue ? static_cast<double>(n) : d; }

  std::string describe() const;
};

// Volume of the unit ball in dimension n (2 for n=1, pi for n=2).
double unit_ball_volume(int n);

// c(r).  Throws std::domain_error for r < 0.
double ball_capacity(const RadialProfile& profile, double r);

// Unique r with c(r) = v.  Closed form for lebesgue/power_law, bracketed
// bisection to relative tolerance 1e-12 for wobble.  Throws for v <= 0.
double inverse_ball_capacity(const RadialProfile& profile, double v);

// Two-sided scaling envelope phi(t) c(r) <= c(t r) <= psi(t) c(r).
// All built-in envelopes have the exact form coeff * t^degree.
struct ScalingEnvelope {
  double degree = 1.0;
  double lower_coeff = 1.0;  // phi(t) = lower_coeff * t^degree
  double upper_coeff = 1.0;  // psi(t) = upper_coeff * t^degree
  double tau = 1.0;          // lim_{t->0} psi/phi = upper_coeff / lower_coeff

  double phi(double t) const;
  double psi(double t) const;
};

ScalingEnvelope scaling_envelope(const RadialProfile& profile);

struct ProfileViolation {
  std::string check;  // "monotonicity", "zero_at_zero", "envelope"
  double t = 0.0;     // scale involved, 0 when not applicable
  double r = 0.0;     // radius involved
  std::string detail;
};

struct ProfileReport {
  bool monotone_ok = true;
  bool zero_at_zero_ok = true;
  bool envelope_ok = true;
  std::vector<ProfileViolation> violations;

  bool pass() const { return monotone_ok && zero_at_zero_ok && envelope_ok; }
};

// Checks strict monotonicity, c(0+) -> 0 and the envelope inequality on the
// sample lattice.  For wobble profiles monotonicity additionally requires the
// parameter-domain bound eps < d/(d+1): the worst-case derivative factor the
// envelope analysis relies on is d(1-eps) - eps, and a sample lattice alone
// can miss a profile that violates it.
ProfileReport validate_profile(const RadialProfile& profile, const std::vector<double>& r_samples,
                               const std::vector<double>& t_samples);

// Geometric lattice spanning [lo, hi], count points; shared by validation
// and tests.
std::vector<double> geometric_lattice(double lo, double hi, int count);

}  // namespace capmax
