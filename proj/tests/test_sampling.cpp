// Grid, preset field and atomic measure tests: masses against analytic
// values, exact mass preservation of field_to_measure and the scaling
// algebra of atomic measures.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "capmax/sampling.hpp"

using namespace capmax;

namespace {

ScalarField indicator_1d(double radius = 1.0, double half = 1.5, double h = 0.01) {
  PresetSpec spec;
  spec.preset = FieldPreset::indicator_ball;
  spec.radius = radius;
  return make_field(spec, Grid::centered(1, half, h));
}

}  // namespace

TEST_CASE("grid basics") {
  const Grid g = Grid::centered(2, 2.0, 0.5);
  CHECK(g.cell_count() == 64);
  CHECK(g.cell_volume() == doctest::Approx(0.25));
  const Point c = g.cell_center(0);
  CHECK(c[0] == doctest::Approx(-1.75));
  CHECK(c[1] == doctest::Approx(-1.75));
  CHECK(g.cell_of(c) == 0);
  CHECK(g.cell_of(Point(0.1, 0.1)) >= 0);
  CHECK(g.cell_of(Point(5.0, 0.0)) == -1);
  CHECK(g.inradius_from(Point(0.0, 0.0)) == doctest::Approx(2.0));
}

TEST_CASE("grid cell budget enforced") {
  CHECK_THROWS_AS(Grid::centered(2, 1.0, 1e-4, 1 << 20), std::invalid_argument);
}

TEST_CASE("indicator field mass in 1-D") {
  const ScalarField f = indicator_1d();
  REQUIRE(f.analytic_mass.has_value());
  CHECK(*f.analytic_mass == doctest::Approx(2.0));
  CHECK(field_mass(f) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("gaussian field mass in 2-D") {
  PresetSpec spec;
  spec.preset = FieldPreset::gaussian;
  spec.sigma = 1.0;
  const ScalarField f = make_field(spec, Grid::centered(2, 8.0, 0.125));
  REQUIRE(f.analytic_mass.has_value());
  CHECK(*f.analytic_mass == 1.0);
  CHECK(field_mass(f) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("two_bumps analytic mass is two disc areas") {
  PresetSpec spec;
  spec.preset = FieldPreset::two_bumps;
  spec.radius = 0.5;
  spec.separation = 4.0;
  const ScalarField f = make_field(spec, Grid::centered(2, 3.0, 0.03125));
  REQUIRE(f.analytic_mass.has_value());
  CHECK(*f.analytic_mass == doctest::Approx(std::numbers::pi / 2.0));
  CHECK(field_mass(f) == doctest::Approx(std::numbers::pi / 2.0).epsilon(0.01));
}

TEST_CASE("field, zero everywhere, has zero mass") {
  ScalarField f;
  f.grid = Grid::centered(1, 1.0, 0.25);
  f.samples.assign(static_cast<std::size_t>(f.grid.cell_count()), 0.0);
  CHECK(field_mass(f) == 0.0);
  CHECK_THROWS_AS(field_to_measure(f), std::domain_error);
}

TEST_CASE("preset support must fit the grid box") {
  PresetSpec big;
  big.preset = FieldPreset::indicator_ball;
  big.radius = 5.0;
  CHECK_THROWS_AS(make_field(big, Grid::centered(1, 2.0, 0.1)), std::invalid_argument);

  PresetSpec wide;
  wide.preset = FieldPreset::gaussian;
  wide.sigma = 1.0;
  CHECK_THROWS_AS(make_field(wide, Grid::centered(2, 2.0, 0.1)), std::invalid_argument);
}

TEST_CASE("presets are mirror symmetric on dyadic centered grids") {
  PresetSpec spec;
  spec.preset = FieldPreset::gaussian;
  spec.sigma = 1.0;
  const Grid g = Grid::centered(2, 8.0, 0.25);
  const ScalarField f = make_field(spec, g);
  const auto nx = g.cells_x();
  const auto ny = g.cells_y();
  for (std::int64_t iy = 0; iy < ny; ++iy)
    for (std::int64_t ix = 0; ix < nx; ++ix) {
      const auto mirrored = (nx - 1 - ix) + nx * (ny - 1 - iy);
      CHECK(f.samples[static_cast<std::size_t>(ix + nx * iy)] ==
            f.samples[static_cast<std::size_t>(mirrored)]);
    }
}

TEST_CASE("delta measure") {
  const AtomicMeasure d = delta_measure(1);
  CHECK(d.atom_count() == 1);
  CHECK(d.total_mass == 1.0);
  CHECK(norm(d.position(0)) == 0.0);
  const AtomicMeasure n = normalize_measure(d);
  CHECK(n.weights == d.weights);
  const AtomicMeasure s = scale_measure(d, 0.25);
  CHECK(s.position(0)[0] == 0.0);
  CHECK(s.total_mass == 1.0);
}

TEST_CASE("scale_measure moves atoms and preserves weights") {
  AtomicMeasure nu;
  nu.dim = 1;
  nu.add_atom(Point(-1.0), 0.5);
  nu.add_atom(Point(1.0), 0.5);

  const AtomicMeasure same = scale_measure(nu, 1.0);
  CHECK(same.position(0)[0] == -1.0);
  CHECK(same.position(1)[0] == 1.0);

  const AtomicMeasure half = scale_measure(nu, 0.5);
  CHECK(half.position(0)[0] == doctest::Approx(-0.5));
  CHECK(half.position(1)[0] == doctest::Approx(0.5));
  CHECK(half.total_mass == nu.total_mass);

  CHECK_THROWS_AS(scale_measure(nu, 0.0), std::domain_error);
  CHECK_THROWS_AS(scale_measure(nu, -2.0), std::domain_error);
}

TEST_CASE("scaled measure of scaled balls matches the original") {
  // nu_t(B(0, t s)) = nu(B(0, s)): enumerate atoms inside both balls.
  AtomicMeasure nu;
  nu.dim = 1;
  nu.add_atom(Point(-1.0), 0.5);
  nu.add_atom(Point(1.0), 0.5);
  const double s = 1.5;
  for (double t : {0.25, 0.5, 2.0}) {
    const AtomicMeasure nu_t = scale_measure(nu, t);
    auto mass_in_ball = [](const AtomicMeasure& m, double radius) {
      double total = 0.0;
      for (std::size_t i = 0; i < m.atom_count(); ++i)
        if (norm(m.position(i)) <= radius) total += m.weights[i];
      return total;
    };
    CHECK(mass_in_ball(nu_t, t * s) == mass_in_ball(nu, s));
  }
}

TEST_CASE("scaling composes: t then s equals t*s") {
  AtomicMeasure nu;
  nu.dim = 2;
  nu.add_atom(Point(0.3, -1.7), 0.25);
  nu.add_atom(Point(-2.0, 0.1), 0.5);
  nu.add_atom(Point(1.1, 2.2), 0.25);
  const double t = 0.37, s = 3.1;
  const AtomicMeasure two_step = scale_measure(scale_measure(nu, t), s);
  const AtomicMeasure one_step = scale_measure(nu, t * s);
  for (std::size_t i = 0; i < nu.atom_count(); ++i)
    for (int a = 0; a < 2; ++a)
      CHECK(std::abs(two_step.position(i)[a] - one_step.position(i)[a]) <=
            1e-12 * std::abs(one_step.position(i)[a]));
}

TEST_CASE("normalize_measure") {
  AtomicMeasure nu;
  nu.dim = 1;
  nu.add_atom(Point(0.0), 2.0);
  nu.add_atom(Point(1.0), 2.0);
  const AtomicMeasure n = normalize_measure(nu);
  CHECK(n.weights[0] == doctest::Approx(0.5));
  CHECK(n.weights[1] == doctest::Approx(0.5));
  CHECK(n.total_mass == 1.0);
  const AtomicMeasure again = normalize_measure(n);
  CHECK(again.weights == n.weights);

  AtomicMeasure zero;
  zero.dim = 1;
  zero.add_atom(Point(0.0), 0.0);
  CHECK_THROWS_AS(normalize_measure(zero), std::domain_error);
}

TEST_CASE("field_to_measure: atoms at nonzero cells, mass preserved exactly") {
  const ScalarField f = indicator_1d();
  const AtomicMeasure nu = field_to_measure(f);

  std::size_t expected_atoms = 0;
  for (std::int64_t id = 0; id < f.grid.cell_count(); ++id)
    if (std::abs(f.grid.cell_center(id)[0]) <= 1.0) ++expected_atoms;
  CHECK(nu.atom_count() == expected_atoms);
  CHECK(nu.total_mass == field_mass(f));  // bitwise: identical summation order

  const AtomicMeasure unit = normalize_measure(nu);
  CHECK(unit.total_mass == 1.0);
}

TEST_CASE("field_to_measure: single nonzero cell") {
  ScalarField f;
  f.grid = Grid::centered(2, 1.0, 0.5);
  f.samples.assign(static_cast<std::size_t>(f.grid.cell_count()), 0.0);
  f.samples[5] = 3.0;
  const AtomicMeasure nu = field_to_measure(f);
  REQUIRE(nu.atom_count() == 1);
  CHECK(nu.weights[0] == doctest::Approx(3.0 * 0.25));
  CHECK(distance(nu.position(0), f.grid.cell_center(5)) == 0.0);
}

TEST_CASE("centroid and support radius") {
  AtomicMeasure nu;
  nu.dim = 1;
  nu.add_atom(Point(-1.0), 1.0);
  nu.add_atom(Point(3.0), 1.0);
  const Point c = nu.centroid();
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(nu.support_radius(c) == doctest::Approx(2.0));
}
