// Radial profile unit tests: closed-form values, inverse round-trips,
// envelope inequalities and the lattice oracle for the wobble envelope ratio.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "capmax/capacity.hpp"

using namespace capmax;

namespace {

const std::vector<double> kRadiusLattice = geometric_lattice(1e-4, 1e4, 161);
const std::vector<double> kScaleLattice = geometric_lattice(1e-3, 10.0, 41);

std::vector<RadialProfile> builtin_profiles() {
  return {RadialProfile::lebesgue(1), RadialProfile::lebesgue(2), RadialProfile::power_law(1.0, 1.5),
          RadialProfile::power_law(2.0, 2.0), RadialProfile::wobble(1.0, 2.0, 0.2),
          RadialProfile::wobble(0.7, 1.5, 0.3)};
}

}  // namespace

TEST_CASE("ball capacity closed forms") {
  CHECK(ball_capacity(RadialProfile::lebesgue(2), 1.0) == doctest::Approx(std::numbers::pi));
  CHECK(ball_capacity(RadialProfile::lebesgue(1), 3.0) == doctest::Approx(6.0));
  CHECK(ball_capacity(RadialProfile::power_law(1.0, 1.5), 4.0) == doctest::Approx(8.0));
  // sin(ln 1) = 0, so the wobble factor drops out at r = 1.
  CHECK(ball_capacity(RadialProfile::wobble(1.0, 2.0, 0.3), 1.0) == doctest::Approx(1.0));
  for (const RadialProfile& p : builtin_profiles()) CHECK(ball_capacity(p, 0.0) == 0.0);
}

TEST_CASE("ball capacity rejects negative radii") {
  CHECK_THROWS_AS(ball_capacity(RadialProfile::lebesgue(1), -1.0), std::domain_error);
}

TEST_CASE("inverse ball capacity closed forms and bisection") {
  CHECK(inverse_ball_capacity(RadialProfile::lebesgue(2), std::numbers::pi) == doctest::Approx(1.0));
  CHECK(inverse_ball_capacity(RadialProfile::power_law(2.0, 2.0), 8.0) == doctest::Approx(2.0));

  const RadialProfile w = RadialProfile::wobble(1.0, 2.0, 0.3);
  const double r = inverse_ball_capacity(w, 5.0);
  CHECK(std::abs(ball_capacity(w, r) - 5.0) / 5.0 <= 1e-10);

  CHECK_THROWS_AS(inverse_ball_capacity(RadialProfile::lebesgue(1), 0.0), std::domain_error);
  CHECK_THROWS_AS(inverse_ball_capacity(RadialProfile::lebesgue(1), -2.0), std::domain_error);
}

TEST_CASE("inverse round-trips on the test lattice") {
  for (const RadialProfile& p : builtin_profiles()) {
    for (double r : kRadiusLattice) {
      const double back = inverse_ball_capacity(p, ball_capacity(p, r));
      CHECK(std::abs(back - r) <= 1e-9 * r);
    }
  }
}

TEST_CASE("profiles are strictly increasing on the test lattice") {
  for (const RadialProfile& p : builtin_profiles()) {
    for (std::size_t i = 0; i + 1 < kRadiusLattice.size(); ++i) {
      CHECK(ball_capacity(p, kRadiusLattice[i]) < ball_capacity(p, kRadiusLattice[i + 1]));
    }
  }
}

TEST_CASE("scaling envelopes: closed forms") {
  const ScalingEnvelope l1 = scaling_envelope(RadialProfile::lebesgue(1));
  CHECK(l1.phi(0.25) == doctest::Approx(0.25));
  CHECK(l1.psi(0.25) == doctest::Approx(0.25));
  CHECK(l1.tau == 1.0);

  const ScalingEnvelope pw = scaling_envelope(RadialProfile::power_law(3.0, 1.5));
  CHECK(pw.phi(4.0) == doctest::Approx(8.0));
  CHECK(pw.psi(4.0) == doctest::Approx(8.0));
  CHECK(pw.tau == 1.0);

  const ScalingEnvelope wb = scaling_envelope(RadialProfile::wobble(1.0, 2.0, 0.2));
  CHECK(wb.tau == doctest::Approx(2.25));
  CHECK(wb.phi(0.5) == doctest::Approx(0.25 * 0.8 / 1.2));
  CHECK(wb.psi(0.5) == doctest::Approx(0.25 * 1.2 / 0.8));
}

TEST_CASE("envelope inequality holds on the lattice product") {
  for (const RadialProfile& p : builtin_profiles()) {
    const ScalingEnvelope env = scaling_envelope(p);
    // Homogeneous profiles satisfy the inequality with equality; the guard
    // is a few ulp of pow() noise only.
    const double tol = p.kind == ProfileKind::wobble ? 1e-12 : 64 * 1e-16;
    for (double t : kScaleLattice) {
      for (double r : kRadiusLattice) {
        const double cr = ball_capacity(p, r);
        const double ctr = ball_capacity(p, t * r);
        CHECK(ctr >= env.phi(t) * cr * (1.0 - tol));
        CHECK(ctr <= env.psi(t) * cr * (1.0 + tol));
      }
    }
  }
}

TEST_CASE("tau equals the envelope ratio at small scales") {
  for (const RadialProfile& p : builtin_profiles()) {
    const ScalingEnvelope env = scaling_envelope(p);
    double worst = 0.0;
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6})
      worst = std::max(worst, std::abs(env.psi(t) / env.phi(t) - env.tau) / env.tau);
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("wobble envelope ratio is attained on a phase lattice") {
  // Lattice oracle: sup and inf of c(t r)/(t^d c(r)) over (t, r) phases reach
  // the closed-form envelope coefficients within 1%.
  const RadialProfile p = RadialProfile::wobble(1.0, 2.0, 0.2);
  const ScalingEnvelope env = scaling_envelope(p);
  double sup = 0.0, inf = std::numeric_limits<double>::infinity();
  const std::vector<double> us = geometric_lattice(1.0, std::exp(2.0 * std::numbers::pi), 512);
  for (double t : us) {
    for (double r : us) {
      const double ratio = ball_capacity(p, t * r) / (std::pow(t, p.d) * ball_capacity(p, r));
      sup = std::max(sup, ratio);
      inf = std::min(inf, ratio);
    }
  }
  CHECK(sup <= env.upper_coeff * (1.0 + 1e-9));
  CHECK(sup >= env.upper_coeff * 0.99);
  CHECK(inf >= env.lower_coeff * (1.0 - 1e-9));
  CHECK(inf <= env.lower_coeff * 1.01);
}

TEST_CASE("validate_profile: built-ins pass, out-of-domain wobble fails") {
  for (const RadialProfile& p : builtin_profiles()) {
    const ProfileReport rep = validate_profile(p, kRadiusLattice, kScaleLattice);
    CHECK(rep.pass());
  }

  // eps = 0.6 >= d/(d+1) = 0.5 leaves the guaranteed-monotone parameter
  // domain; the report must flag monotonicity even though coarse samples may
  // still increase.
  const RadialProfile bad = RadialProfile::wobble(1.0, 1.0, 0.6);
  const ProfileReport rep = validate_profile(bad, kRadiusLattice, kScaleLattice);
  CHECK_FALSE(rep.monotone_ok);
  CHECK_FALSE(rep.pass());
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations.front().check == "monotonicity");
}

TEST_CASE("validate_profile rejects bad sample lists") {
  const RadialProfile p = RadialProfile::lebesgue(1);
  CHECK_THROWS_AS(validate_profile(p, {}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate_profile(p, {1.0, -2.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("profile constructors reject nonsensical parameters") {
  CHECK_THROWS_AS(RadialProfile::lebesgue(3), std::invalid_argument);
  CHECK_THROWS_AS(RadialProfile::power_law(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(RadialProfile::power_law(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(RadialProfile::wobble(1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(RadialProfile::wobble(1.0, 1.0, -0.1), std::invalid_argument);
}
