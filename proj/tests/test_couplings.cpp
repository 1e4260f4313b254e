#include <doctest.h>

#include "tjsim/couplings.hpp"

using namespace tjs;

TEST_CASE("ramp profile") {
  LightShiftProgram p;  // 2pi x 25 -> 2pi x 5 over 1 us, then tau = 1 us
  CHECK(ramp_value(p, 0.0) == doctest::Approx(mhz(25.0)));
  CHECK(ramp_value(p, 1.0) == doctest::Approx(mhz(5.0)));
  CHECK(ramp_value(p, 2.0) == doctest::Approx(mhz(5.0) * std::exp(-1.0)));
  CHECK(ramp_value(p, 0.5) == doctest::Approx(mhz(15.0)));  // linear fast phase
  CHECK_THROWS_AS(ramp_value(p, -0.1), std::invalid_argument);
  SUBCASE("sign flips the whole profile") {
    p.sign = -1.0;
    CHECK(ramp_value(p, 0.0) == doctest::Approx(-mhz(25.0)));
  }
  SUBCASE("continuity at the knee") {
    const double eps = 1e-9;
    CHECK(ramp_value(p, p.t_knee - eps) ==
          doctest::Approx(ramp_value(p, p.t_knee + eps)).epsilon(1e-6));
  }
}

TEST_CASE("power-law bond scaling") {
  const auto g = LatticeGeometry::ladder(19, 14.7, 0.5 * 14.7);
  CouplingSet c = CouplingSet::equilateral_reference();
  SUBCASE("leg bonds sit at the reference spacing") {
    const BondValues b = c.bond(g, 0, 2);
    CHECK(b.t_up == doctest::Approx(c.t_up));
    CHECK(b.j_z == doctest::Approx(c.j_z));
  }
  SUBCASE("rung bonds follow 1/r^3 and 1/r^6") {
    const double r = g.distance(0, 1);
    const BondValues b = c.bond(g, 0, 1);
    CHECK(b.t_dn == doctest::Approx(c.t_dn * std::pow(14.7 / r, 3)));
    CHECK(b.j_perp == doctest::Approx(c.j_perp * std::pow(14.7 / r, 6)));
  }
  SUBCASE("range cutoff silences distant bonds") {
    c.range_cutoff = 15.0;
    CHECK(c.bond(g, 0, 6).t_up == 0.0);
    CHECK(c.bond(g, 0, 1).t_up != 0.0);
  }
}

TEST_CASE("ladder table overrides pin rung and leg bonds") {
  const auto g = LatticeGeometry::ladder(19, 14.7, std::sqrt(3.0) / 2.0 * 14.7);
  const CouplingSet c = with_ladder_table_overrides(
      CouplingSet::equilateral_reference(), g, equilateral_rung_values(), equilateral_leg_values());
  CHECK(c.bond(g, 4, 5).t_up == doctest::Approx(mhz(1.1)));
  CHECK(c.bond(g, 4, 6).t_up == doctest::Approx(mhz(0.95)));
  CHECK(c.bond(g, 4, 6).j_perp == doctest::Approx(mhz(0.075)));
  // longer bonds keep the ideal tails
  CHECK(c.bond(g, 0, 4).t_up ==
        doctest::Approx(mhz(1.1) * std::pow(14.7 / g.distance(0, 4), 3)));
}
